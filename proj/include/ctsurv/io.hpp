#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctsurv/csv.hpp"
#include "ctsurv/errors.hpp"
#include "ctsurv/study.hpp"

namespace ctsurv {

// Shortest round-trippable decimal representation.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::string cell(const std::vector<std::string>& row, std::size_t col) {
    return col < row.size() ? row[col] : std::string();
}

} // namespace detail

// --- participants.csv ------------------------------------------------------
//
// Columns: id, site, enroll_date, status, date_lower, date_upper (optional),
// variant (optional), x, z1..zp. Dates are ISO-8601 and converted to integer
// day offsets from the grid origin. Subjects are normalized to id order so a
// load/serialize round trip is byte-stable.
inline StudyData load_participants(const std::string& path, const CalendarGrid& grid,
                                   const std::vector<std::string>& expected_variants = {}) {
    CsvTable t = read_csv(path);
    const std::size_t c_id = t.require("id");
    const std::size_t c_site = t.require("site");
    const std::size_t c_enroll = t.require("enroll_date");
    const std::size_t c_status = t.require("status");
    const std::size_t c_lower = t.require("date_lower");
    const auto c_upper = t.find("date_upper");
    const auto c_variant = t.find("variant");
    const std::size_t c_x = t.require("x");

    // Covariate columns are header-driven: z1, z2, ... in numeric order.
    std::vector<std::pair<int, std::size_t>> zcols;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        const std::string& h = t.header[i];
        if (h.size() >= 2 && h[0] == 'z') {
            bool digits = true;
            for (std::size_t j = 1; j < h.size(); ++j)
                if (!std::isdigit(static_cast<unsigned char>(h[j]))) digits = false;
            if (digits) zcols.emplace_back(std::stoi(h.substr(1)), i);
        }
    }
    std::sort(zcols.begin(), zcols.end());

    ErrorCollector errs(path);

    // First pass: collect site and variant labels.
    std::set<std::string> site_labels;
    std::set<std::string> variant_labels;
    for (const auto& row : t.rows) {
        if (!detail::cell(row, c_site).empty()) site_labels.insert(detail::cell(row, c_site));
        if (c_variant && !detail::cell(row, *c_variant).empty())
            variant_labels.insert(detail::cell(row, *c_variant));
    }

    std::vector<std::string> variant_names = expected_variants;
    if (variant_names.empty()) variant_names.assign(variant_labels.begin(), variant_labels.end());

    StudyData data;
    data.grid = grid;
    data.site_names.assign(site_labels.begin(), site_labels.end());
    data.n_sites = int(data.site_names.size());
    data.variant_names = variant_names;
    data.n_variants = std::max<int>(1, int(variant_names.size()));
    for (const auto& zc : zcols)
        data.covariate_names.push_back("z" + std::to_string(zc.first));

    auto site_index = [&](const std::string& name) -> int {
        auto it = std::lower_bound(data.site_names.begin(), data.site_names.end(), name);
        return int(it - data.site_names.begin());
    };
    auto variant_index = [&](const std::string& name) -> std::optional<int> {
        for (std::size_t v = 0; v < variant_names.size(); ++v)
            if (variant_names[v] == name) return int(v);
        return std::nullopt;
    };

    std::set<std::string> seen_ids;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = "row " + std::to_string(r + 2);
        Subject s;
        s.id = detail::cell(row, c_id);
        if (s.id.empty()) {
            errs.add(where + ", column 'id': empty");
            continue;
        }
        if (!seen_ids.insert(s.id).second) {
            errs.add(where + ", column 'id': duplicate id '" + s.id + "'");
            continue;
        }
        s.site = site_index(detail::cell(row, c_site));

        auto day_of = [&](std::size_t col, const char* colname,
                          bool required) -> std::optional<int> {
            const std::string v = detail::cell(row, col);
            if (v.empty()) {
                if (required) errs.add(where + ", column '" + colname + "': missing date");
                return std::nullopt;
            }
            try {
                const int day = grid.day_of(v);
                if (!grid.contains(day)) {
                    errs.add(where + ", column '" + colname + "': date " + v +
                             " outside the study grid");
                    return std::nullopt;
                }
                return day;
            } catch (const ValidationError& e) {
                errs.add(where + ", column '" + colname + "': " + e.what());
                return std::nullopt;
            }
        };

        const auto enroll = day_of(c_enroll, "enroll_date", true);
        const auto lower = day_of(c_lower, "date_lower", true);
        std::optional<int> upper;
        if (c_upper && !detail::cell(row, *c_upper).empty())
            upper = day_of(*c_upper, "date_upper", false);

        try {
            s.status = status_from_string(detail::cell(row, c_status));
        } catch (const ValidationError& e) {
            errs.add(where + ", column 'status': " + e.what());
            continue;
        }
        if (!enroll || !lower) continue;
        s.enroll_day = *enroll;
        s.time_lower = *lower;

        if (s.status == Status::interval_censored) {
            if (!upper) {
                errs.add(where + ", column 'date_upper': required for interval censoring");
                continue;
            }
            if (*upper <= s.time_lower) {
                errs.add(where + ": inverted censoring interval (date_upper <= date_lower)");
                continue;
            }
            s.time_upper = upper;
        } else if (upper) {
            errs.add(where + ", column 'date_upper': only valid for interval_censored rows");
            continue;
        }

        if (s.enroll_day > s.time_lower) {
            errs.add(where + ": enrollment after event/censoring date");
            continue;
        }
        if (s.status == Status::right_censored && s.time_lower == s.enroll_day) {
            errs.add(where + ": zero follow-up (censored on enrollment day)");
            continue;
        }

        if (c_variant && !detail::cell(row, *c_variant).empty()) {
            if (s.status != Status::event) {
                errs.add(where + ", column 'variant': only valid on event rows");
                continue;
            }
            const auto v = variant_index(detail::cell(row, *c_variant));
            if (!v) {
                errs.add(where + ", column 'variant': unknown variant label '" +
                         detail::cell(row, *c_variant) + "'");
                continue;
            }
            s.variant = v;
        }

        const auto x = detail::parse_double(detail::cell(row, c_x));
        if (!x) {
            errs.add(where + ", column 'x': not a number");
            continue;
        }
        s.x_path = StepPath::constant(*x);
        for (const auto& zc : zcols) {
            const auto z = detail::parse_double(detail::cell(row, zc.second));
            if (!z) {
                errs.add(where + ", column 'z" + std::to_string(zc.first) + "': not a number");
                break;
            }
            s.z_paths.push_back(StepPath::constant(*z));
        }
        if (s.z_paths.size() != zcols.size()) continue;

        data.subjects.push_back(std::move(s));
    }
    errs.raise_if_any();

    std::sort(data.subjects.begin(), data.subjects.end(),
              [](const Subject& a, const Subject& b) { return a.id < b.id; });
    data.validate();
    return data;
}

// Serializes to the participants schema with normalized ordering. Requires
// constant covariate paths (the v1 file format carries baseline values only).
inline void save_participants(const StudyData& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "id,site,enroll_date,status,date_lower,date_upper,variant,x";
    for (const auto& z : data.covariate_names) out << ',' << z;
    out << '\n';
    std::vector<const Subject*> order;
    for (const auto& s : data.subjects) order.push_back(&s);
    std::sort(order.begin(), order.end(),
              [](const Subject* a, const Subject* b) { return a->id < b->id; });
    for (const Subject* s : order) {
        if (!s->x_path.is_constant())
            throw ValidationError("subject '" + s->id +
                                  "': time-varying x path not representable in the v1 format");
        out << csv_escape(s->id) << ',' << csv_escape(data.site_names[std::size_t(s->site)])
            << ',' << data.grid.date_of(s->enroll_day) << ',' << to_string(s->status) << ','
            << data.grid.date_of(s->time_lower) << ',';
        if (s->time_upper) out << data.grid.date_of(*s->time_upper);
        out << ',';
        if (s->variant && !data.variant_names.empty())
            out << csv_escape(data.variant_names[std::size_t(*s->variant)]);
        out << ',' << format_double(s->x_path.at_day(s->enroll_day));
        for (const auto& z : s->z_paths) {
            if (!z.is_constant())
                throw ValidationError("subject '" + s->id +
                                      "': time-varying z path not representable in the v1 format");
            out << ',' << format_double(z.at_day(s->enroll_day));
        }
        out << '\n';
    }
}

// --- variant_props.csv ------------------------------------------------------
//
// Columns: site, date, variant, proportion. Missing days carry the last
// observation forward; rows for sites outside `site_names` are ignored.
inline VariantMix load_variant_proportions(const std::string& path, const CalendarGrid& grid,
                                           const std::vector<std::string>& site_names,
                                           std::vector<std::string>& variant_names) {
    CsvTable t = read_csv(path);
    const std::size_t c_site = t.require("site");
    const std::size_t c_date = t.require("date");
    const std::size_t c_variant = t.require("variant");
    const std::size_t c_prop = t.require("proportion");

    ErrorCollector errs(path);

    std::set<std::string> labels;
    for (const auto& row : t.rows) labels.insert(detail::cell(row, c_variant));
    if (variant_names.empty()) variant_names.assign(labels.begin(), labels.end());
    for (const auto& l : labels)
        if (std::find(variant_names.begin(), variant_names.end(), l) == variant_names.end())
            errs.add("variant label '" + l + "' not in the configured variant set");
    errs.raise_if_any();

    const int V = int(variant_names.size());
    const int S = int(site_names.size());
    auto variant_index = [&](const std::string& name) {
        return int(std::find(variant_names.begin(), variant_names.end(), name) -
                   variant_names.begin());
    };

    // records[site][variant]: day -> proportion (records before the grid start
    // are kept as carry-forward sources).
    std::vector<std::vector<std::map<int, double>>> records(
        std::size_t(S), std::vector<std::map<int, double>>(std::size_t(V)));

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = "row " + std::to_string(r + 2);
        const auto site_it =
            std::find(site_names.begin(), site_names.end(), detail::cell(row, c_site));
        if (site_it == site_names.end()) continue;
        const int s = int(site_it - site_names.begin());
        int day = 0;
        try {
            day = grid.day_of(detail::cell(row, c_date));
        } catch (const ValidationError& e) {
            errs.add(where + ", column 'date': " + e.what());
            continue;
        }
        const auto p = detail::parse_double(detail::cell(row, c_prop));
        if (!p || *p < 0.0 || *p > 1.0) {
            errs.add(where + ", column 'proportion': must be a number in [0, 1]");
            continue;
        }
        records[std::size_t(s)][std::size_t(variant_index(detail::cell(row, c_variant)))][day] =
            *p;
    }
    errs.raise_if_any();

    VariantMix mix;
    mix.n_sites = S;
    mix.n_variants = V;
    mix.paths.resize(std::size_t(S));
    for (int s = 0; s < S; ++s) {
        for (int v = 0; v < V; ++v) {
            const auto& rec = records[std::size_t(s)][std::size_t(v)];
            std::vector<double> daily(std::size_t(grid.end_day - grid.start_day) + 1, 0.0);
            double current = std::numeric_limits<double>::quiet_NaN();
            auto before = rec.lower_bound(grid.start_day);
            if (before != rec.begin()) current = std::prev(before)->second;
            for (int d = grid.start_day; d <= grid.end_day; ++d) {
                auto it = rec.find(d);
                if (it != rec.end()) current = it->second;
                if (std::isnan(current)) {
                    errs.add("site '" + site_names[std::size_t(s)] + "', variant '" +
                             variant_names[std::size_t(v)] + "': first grid day " +
                             grid.date_of(d) + " missing with no carry-forward source");
                    current = 0.0;
                }
                daily[std::size_t(d - grid.start_day)] = current;
            }
            mix.paths[std::size_t(s)].push_back(StepPath::daily(grid.start_day, std::move(daily)));
        }
    }
    errs.raise_if_any();
    mix.validate(grid);
    return mix;
}

// --- epidemic_curve.csv -----------------------------------------------------
//
// Columns: site, date, mean, lower, upper (bounds optional per row). The
// densified series spans at least the grid; interior gaps are interpolated
// log-linearly and edges carried flat.
inline EpidemicCurve load_epidemic_curve(const std::string& path, const CalendarGrid& grid,
                                         const std::vector<std::string>& site_names) {
    CsvTable t = read_csv(path);
    const std::size_t c_site = t.require("site");
    const std::size_t c_date = t.require("date");
    const std::size_t c_mean = t.require("mean");
    const auto c_lower = t.find("lower");
    const auto c_upper = t.find("upper");

    ErrorCollector errs(path);
    struct Rec {
        double mean;
        std::optional<double> lower, upper;
    };
    std::vector<std::map<int, Rec>> records(site_names.size());

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = "row " + std::to_string(r + 2);
        const auto site_it =
            std::find(site_names.begin(), site_names.end(), detail::cell(row, c_site));
        if (site_it == site_names.end()) continue;
        int day = 0;
        try {
            day = grid.day_of(detail::cell(row, c_date));
        } catch (const ValidationError& e) {
            errs.add(where + ", column 'date': " + e.what());
            continue;
        }
        Rec rec{};
        const auto m = detail::parse_double(detail::cell(row, c_mean));
        if (!m || *m < 0.0) {
            errs.add(where + ", column 'mean': must be a non-negative number");
            continue;
        }
        rec.mean = *m;
        if (c_lower) rec.lower = detail::parse_double(detail::cell(row, *c_lower));
        if (c_upper) rec.upper = detail::parse_double(detail::cell(row, *c_upper));
        if (rec.lower && *rec.lower < 0.0) {
            errs.add(where + ", column 'lower': negative");
            continue;
        }
        if (rec.lower && rec.upper) {
            if (*rec.upper < *rec.lower) {
                errs.add(where + ": upper bound below lower bound");
                continue;
            }
            if (rec.mean < *rec.lower) {
                errs.add(where + ": mean below lower bound");
                continue;
            }
            if (rec.mean > *rec.upper) {
                errs.add(where + ": mean above upper bound");
                continue;
            }
        }
        records[std::size_t(site_it - site_names.begin())][day] = rec;
    }
    errs.raise_if_any();

    // Log-linear interpolation between anchors; flat carry outside.
    auto fill = [&](const std::map<int, double>& pts, int from, int to,
                    const std::string& what) -> std::vector<double> {
        std::vector<double> out(std::size_t(to - from) + 1);
        for (int d = from; d <= to; ++d) {
            auto next = pts.lower_bound(d);
            double v;
            if (next != pts.end() && next->first == d) {
                v = next->second;
            } else if (next == pts.begin()) {
                v = next->second; // before first observation
            } else if (next == pts.end()) {
                v = std::prev(next)->second; // after last observation
            } else {
                auto prev = std::prev(next);
                if (prev->second <= 0.0 || next->second <= 0.0)
                    throw ValidationError(path + ": cannot log-interpolate " + what +
                                          " across a zero value near day " + std::to_string(d));
                const double w =
                    double(d - prev->first) / double(next->first - prev->first);
                v = std::exp((1.0 - w) * std::log(prev->second) + w * std::log(next->second));
            }
            out[std::size_t(d - from)] = v;
        }
        return out;
    };

    EpidemicCurve curve;
    for (std::size_t s = 0; s < site_names.size(); ++s) {
        const auto& rec = records[s];
        if (rec.empty()) {
            throw ValidationError(path + ": site '" + site_names[s] + "' has no records");
        }
        bool any_in_grid = false;
        for (const auto& [day, r] : rec)
            if (grid.contains(day)) any_in_grid = true;
        if (!any_in_grid)
            throw ValidationError(path + ": site '" + site_names[s] +
                                  "' has no records inside the grid");

        CurveSeries series;
        series.obs_first = rec.begin()->first;
        series.obs_last = rec.rbegin()->first;
        series.first_day = std::min(series.obs_first, grid.start_day);
        const int last = std::max(series.obs_last, grid.end_day);

        std::map<int, double> means;
        std::map<int, double> lowers, uppers;
        for (const auto& [day, r] : rec) {
            means[day] = r.mean;
            if (r.lower && r.upper) {
                lowers[day] = *r.lower;
                uppers[day] = *r.upper;
            }
        }
        series.mean = fill(means, series.first_day, last, "mean");
        const std::size_t n = series.mean.size();
        series.lower.assign(n, 0.0);
        series.upper.assign(n, 0.0);
        series.has_bounds.assign(n, 0);
        if (lowers.size() == means.size() && !lowers.empty()) {
            // Bounds are densified only when every record carries them.
            series.lower = fill(lowers, series.first_day, last, "lower bound");
            series.upper = fill(uppers, series.first_day, last, "upper bound");
            series.has_bounds.assign(n, 1);
        }
        curve.sites.push_back(std::move(series));
    }
    return curve;
}

} // namespace ctsurv
