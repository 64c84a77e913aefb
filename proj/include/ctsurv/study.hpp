#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ctsurv/calendar.hpp"
#include "ctsurv/errors.hpp"
#include "ctsurv/step_path.hpp"

namespace ctsurv {

enum class Status { event, right_censored, interval_censored };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::event: return "event";
        case Status::right_censored: return "right_censored";
        case Status::interval_censored: return "interval_censored";
    }
    return "?";
}

inline Status status_from_string(const std::string& s) {
    if (s == "event") return Status::event;
    if (s == "right_censored") return Status::right_censored;
    if (s == "interval_censored") return Status::interval_censored;
    throw ValidationError("unknown status '" + s + "'");
}

struct Subject {
    std::string id;
    int site = 0;
    int enroll_day = 0;
    Status status = Status::right_censored;
    int time_lower = 0;                // event/censoring day, or L for interval censoring
    std::optional<int> time_upper;     // R, interval censoring only
    std::optional<int> variant;        // 0-based infecting variant, events only in v1 files
    StepPath x_path;                   // predictor of interest X_i(t)
    std::vector<StepPath> z_paths;     // covariates Z_i(t)

    int follow_up_end() const { return time_upper.value_or(time_lower); }
};

struct StudyData {
    std::vector<Subject> subjects;
    int n_sites = 0;
    int n_variants = 1;
    CalendarGrid grid;
    std::vector<std::string> site_names;
    std::vector<std::string> variant_names;   // may be empty when V = 1 and unlabeled
    std::vector<std::string> covariate_names; // z column names, in order

    std::size_t n_covariates() const { return covariate_names.size(); }

    void validate() const {
        ErrorCollector errs("study data");
        if (subjects.empty()) errs.add("no subjects");
        if (int(site_names.size()) != n_sites) errs.add("site name/index mismatch");
        std::vector<int> site_counts(std::size_t(std::max(n_sites, 0)), 0);
        for (const auto& s : subjects) {
            const std::string who = "subject '" + s.id + "'";
            if (s.site < 0 || s.site >= n_sites) {
                errs.add(who + ": site index out of range");
                continue;
            }
            ++site_counts[std::size_t(s.site)];
            if (s.enroll_day > s.time_lower) errs.add(who + ": enrollment after event/censoring time");
            if (s.status == Status::interval_censored) {
                if (!s.time_upper) errs.add(who + ": interval censoring without an upper bound");
                else if (*s.time_upper <= s.time_lower) errs.add(who + ": inverted censoring interval");
            } else if (s.time_upper) {
                errs.add(who + ": upper bound only valid for interval censoring");
            }
            if (s.status == Status::right_censored && s.time_lower == s.enroll_day)
                errs.add(who + ": zero follow-up");
            if (s.variant) {
                if (s.status != Status::event)
                    errs.add(who + ": infecting variant recorded on a non-event");
                if (*s.variant < 0 || *s.variant >= n_variants)
                    errs.add(who + ": variant index out of range");
            }
            if (!grid.contains(s.enroll_day) || !grid.contains(s.follow_up_end()))
                errs.add(who + ": follow-up window not covered by the grid");
            if (!s.x_path.covers(s.enroll_day, s.follow_up_end()))
                errs.add(who + ": x path does not cover the follow-up window");
            for (std::size_t j = 0; j < s.z_paths.size(); ++j)
                if (!s.z_paths[j].covers(s.enroll_day, s.follow_up_end()))
                    errs.add(who + ": z path " + std::to_string(j + 1) + " does not cover follow-up");
            if (s.z_paths.size() != n_covariates())
                errs.add(who + ": covariate count mismatch");
        }
        for (int s = 0; s < n_sites; ++s)
            if (site_counts[std::size_t(s)] == 0)
                errs.add("site '" + site_names[std::size_t(s)] + "' has no subjects");
        errs.raise_if_any();
    }
};

// Known variant proportions pi_s^{(v)}(t): per site, one daily path per
// variant, summing to one across variants on every day.
struct VariantMix {
    int n_sites = 0;
    int n_variants = 1;
    std::vector<std::vector<StepPath>> paths; // [site][variant]

    static VariantMix single_variant(int n_sites) {
        VariantMix m;
        m.n_sites = n_sites;
        m.n_variants = 1;
        m.paths.assign(std::size_t(n_sites), {StepPath::constant(1.0)});
        return m;
    }

    double at(int site, int variant, double t) const {
        return paths[std::size_t(site)][std::size_t(variant)].at(t);
    }

    void validate(const CalendarGrid& grid, double tol = 1e-6) const {
        ErrorCollector errs("variant proportions");
        if (int(paths.size()) != n_sites) errs.add("site count mismatch");
        for (int s = 0; s < n_sites && s < int(paths.size()); ++s) {
            if (int(paths[std::size_t(s)].size()) != n_variants) {
                errs.add("site " + std::to_string(s) + ": variant count mismatch");
                continue;
            }
            for (int d = grid.start_day; d <= grid.end_day; ++d) {
                double sum = 0.0;
                bool in_range = true;
                for (int v = 0; v < n_variants; ++v) {
                    const double p = paths[std::size_t(s)][std::size_t(v)].at_day(d);
                    if (p < 0.0 || p > 1.0) in_range = false;
                    sum += p;
                }
                if (!in_range)
                    errs.add("site " + std::to_string(s) + " day " + std::to_string(d) +
                             ": proportion outside [0, 1]");
                else if (std::abs(sum - 1.0) > tol)
                    errs.add("site " + std::to_string(s) + " day " + std::to_string(d) +
                             ": variant proportions sum to " + std::to_string(sum));
                if (errs.count() > 30) break;
            }
        }
        errs.raise_if_any();
    }
};

// Daily community-infection estimates per site, densified over a span that
// covers the grid; interior gaps are log-linearly interpolated and edges are
// carried flat. Bound columns are optional per day.
struct CurveSeries {
    int first_day = 0;
    int obs_first = 0; // first/last day with an actual record
    int obs_last = 0;
    std::vector<double> mean;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<char> has_bounds;

    int last_day() const { return first_day + int(mean.size()) - 1; }
    bool covers(int from, int to) const { return first_day <= from && to <= last_day(); }

    double mean_at(int day) const {
        if (day < first_day || day > last_day())
            throw ValidationError("epidemic curve undefined at day " + std::to_string(day));
        return mean[std::size_t(day - first_day)];
    }
    bool bounds_at(int day, double& lo, double& hi) const {
        if (day < first_day || day > last_day()) return false;
        const auto i = std::size_t(day - first_day);
        if (!has_bounds[i]) return false;
        lo = lower[i];
        hi = upper[i];
        return true;
    }
};

struct EpidemicCurve {
    std::vector<CurveSeries> sites;

    const CurveSeries& site(int s) const { return sites[std::size_t(s)]; }
    int n_sites() const { return int(sites.size()); }
};

} // namespace ctsurv
