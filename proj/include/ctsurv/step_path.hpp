#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "ctsurv/errors.hpp"

namespace ctsurv {

// Piecewise-constant path on the daily grid. The value stored for day d
// applies on the span (d-1, d], matching the half-open interval convention
// of the calendar grid, so at(t) for t in (d-1, d] returns day d's value.
class StepPath {
public:
    StepPath() = default;

    static StepPath constant(double v) {
        StepPath p;
        p.constant_ = true;
        p.const_value_ = v;
        return p;
    }

    static StepPath daily(int first_day, std::vector<double> values) {
        if (values.empty()) throw ValidationError("daily path must not be empty");
        StepPath p;
        p.first_day_ = first_day;
        p.values_ = std::move(values);
        return p;
    }

    bool is_constant() const {
        if (constant_) return true;
        for (double v : values_)
            if (v != values_.front()) return false;
        return true;
    }

    bool covers(int from_day, int to_day) const {
        if (constant_) return true;
        return first_day_ <= from_day && to_day <= last_day();
    }

    int first_day() const { return constant_ ? std::numeric_limits<int>::min() : first_day_; }
    int last_day() const {
        return constant_ ? std::numeric_limits<int>::max()
                         : first_day_ + int(values_.size()) - 1;
    }

    double at_day(int d) const {
        if (constant_) return const_value_;
        if (d < first_day_ || d > last_day())
            throw ValidationError("path undefined at day " + std::to_string(d));
        return values_[std::size_t(d - first_day_)];
    }

    double at(double t) const {
        if (constant_) return const_value_;
        // t = first_day maps to the first stored value.
        int d = static_cast<int>(std::ceil(t));
        if (d < first_day_) d = first_day_;
        return at_day(d);
    }

private:
    bool constant_ = false;
    double const_value_ = 0.0;
    int first_day_ = 0;
    std::vector<double> values_;
};

} // namespace ctsurv
