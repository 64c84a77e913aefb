#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctsurv/errors.hpp"
#include "ctsurv/math_util.hpp"

namespace ctsurv {

enum class ThresholdMode { none, fixed_llod, estimate };

inline const char* to_string(ThresholdMode m) {
    switch (m) {
        case ThresholdMode::none: return "none";
        case ThresholdMode::fixed_llod: return "fixed_llod";
        case ThresholdMode::estimate: return "estimate";
    }
    return "?";
}

inline ThresholdMode threshold_mode_from_string(const std::string& s) {
    if (s == "none") return ThresholdMode::none;
    if (s == "fixed_llod") return ThresholdMode::fixed_llod;
    if (s == "estimate") return ThresholdMode::estimate;
    throw ValidationError("unknown threshold mode '" + s + "'");
}

struct ThresholdConfig {
    ThresholdMode mode = ThresholdMode::none;
    double x_llod = std::numeric_limits<double>::quiet_NaN();
    double lower = std::numeric_limits<double>::quiet_NaN(); // estimation bounds
    double upper = std::numeric_limits<double>::quiet_NaN();

    void validate() const {
        if (mode != ThresholdMode::none && !std::isfinite(x_llod))
            throw ValidationError("threshold mode requires a finite LLOD");
        if (mode == ThresholdMode::estimate) {
            if (!std::isfinite(lower) || !std::isfinite(upper) || lower >= upper)
                throw ValidationError("threshold estimation requires bounds with lower < upper");
        }
    }
};

enum class VariantKnowledge { known, unknown };

// Model parameters theta. Baseline hazards are parameterized on the log
// scale: per site, log h_ref plus a length-K vector of log relative hazards
// whose reference entry is structurally zero. alpha[0] is fixed at zero.
struct ModelParameters {
    std::vector<double> log_h_ref;          // per site
    std::vector<std::vector<double>> log_r; // per site, length K, ref entry == 0
    std::vector<double> alpha;              // per variant, alpha[0] == 0
    std::vector<double> gamma;              // per variant
    std::vector<double> gamma_T;            // per variant, threshold modes only
    std::vector<double> beta;               // covariate coefficients
    std::optional<double> x_threshold;      // X_T, estimate mode only
};

// Flat layout of the free (sampled) parameters, excluding X_T which moves in
// its own block. Order: log_h_ref per site, free log_r per site, free alpha,
// gamma, gamma_T (when a threshold is active), beta.
class ParameterLayout {
public:
    ParameterLayout() = default;

    ParameterLayout(int n_sites, int K, int n_variants, std::size_t n_covariates,
                    ThresholdMode mode, std::vector<int> ref_intervals,
                    std::vector<std::string> site_names = {},
                    std::vector<std::string> variant_names = {},
                    std::vector<std::string> covariate_names = {})
        : n_sites_(n_sites),
          K_(K),
          V_(n_variants),
          p_(n_covariates),
          mode_(mode),
          ref_(std::move(ref_intervals)) {
        if (int(ref_.size()) != n_sites_)
            throw ValidationError("one reference interval required per site");
        for (int r : ref_)
            if (r < 1 || r > K_) throw ValidationError("reference interval out of range");

        auto site_label = [&](int s) {
            return s < int(site_names.size()) ? site_names[std::size_t(s)]
                                              : "s" + std::to_string(s + 1);
        };
        auto variant_label = [&](int v) {
            return v < int(variant_names.size()) ? variant_names[std::size_t(v)]
                                                 : "v" + std::to_string(v + 1);
        };
        for (int s = 0; s < n_sites_; ++s)
            names_.push_back("log_h_ref[" + site_label(s) + "]");
        for (int s = 0; s < n_sites_; ++s)
            for (int k = 1; k <= K_; ++k)
                if (k != ref_[std::size_t(s)])
                    names_.push_back("log_r[" + site_label(s) + "][" + std::to_string(k) + "]");
        for (int v = 1; v < V_; ++v) names_.push_back("alpha[" + variant_label(v) + "]");
        for (int v = 0; v < V_; ++v) names_.push_back("gamma[" + variant_label(v) + "]");
        if (mode_ != ThresholdMode::none)
            for (int v = 0; v < V_; ++v) names_.push_back("gamma_T[" + variant_label(v) + "]");
        for (std::size_t j = 0; j < p_; ++j)
            names_.push_back("beta[" + (j < covariate_names.size()
                                            ? covariate_names[j]
                                            : "z" + std::to_string(j + 1)) +
                             "]");
        if (mode_ == ThresholdMode::estimate) threshold_index_ = names_.size();
    }

    std::size_t size() const { return names_.size(); }
    bool has_threshold_param() const { return mode_ == ThresholdMode::estimate; }

    // Total sampled dimension including X_T when estimated.
    std::size_t total_size() const { return size() + (has_threshold_param() ? 1 : 0); }

    // Names of the free parameters; X_T (when present) is appended last.
    std::vector<std::string> all_names() const {
        auto out = names_;
        if (has_threshold_param()) out.push_back("x_threshold");
        return out;
    }

    int n_sites() const { return n_sites_; }
    int K() const { return K_; }
    int n_variants() const { return V_; }
    std::size_t n_covariates() const { return p_; }
    ThresholdMode mode() const { return mode_; }
    const std::vector<int>& ref_intervals() const { return ref_; }

    ModelParameters unpack(std::span<const double> theta,
                           std::optional<double> x_threshold = std::nullopt) const {
        if (theta.size() != size())
            throw ValidationError("parameter vector has wrong dimension");
        ModelParameters p;
        std::size_t i = 0;
        p.log_h_ref.assign(theta.begin(), theta.begin() + n_sites_);
        i += std::size_t(n_sites_);
        p.log_r.assign(std::size_t(n_sites_), std::vector<double>(std::size_t(K_), 0.0));
        for (int s = 0; s < n_sites_; ++s)
            for (int k = 1; k <= K_; ++k)
                if (k != ref_[std::size_t(s)]) p.log_r[std::size_t(s)][std::size_t(k - 1)] = theta[i++];
        p.alpha.assign(std::size_t(V_), 0.0);
        for (int v = 1; v < V_; ++v) p.alpha[std::size_t(v)] = theta[i++];
        p.gamma.resize(std::size_t(V_));
        for (int v = 0; v < V_; ++v) p.gamma[std::size_t(v)] = theta[i++];
        if (mode_ != ThresholdMode::none) {
            p.gamma_T.resize(std::size_t(V_));
            for (int v = 0; v < V_; ++v) p.gamma_T[std::size_t(v)] = theta[i++];
        }
        p.beta.resize(p_);
        for (std::size_t j = 0; j < p_; ++j) p.beta[j] = theta[i++];
        if (mode_ == ThresholdMode::estimate) {
            if (!x_threshold) throw ValidationError("x_threshold required in estimate mode");
            p.x_threshold = x_threshold;
        }
        return p;
    }

    std::vector<double> pack(const ModelParameters& p) const {
        std::vector<double> theta;
        theta.reserve(size());
        for (int s = 0; s < n_sites_; ++s) theta.push_back(p.log_h_ref[std::size_t(s)]);
        for (int s = 0; s < n_sites_; ++s)
            for (int k = 1; k <= K_; ++k)
                if (k != ref_[std::size_t(s)])
                    theta.push_back(p.log_r[std::size_t(s)][std::size_t(k - 1)]);
        for (int v = 1; v < V_; ++v) theta.push_back(p.alpha[std::size_t(v)]);
        for (int v = 0; v < V_; ++v) theta.push_back(p.gamma[std::size_t(v)]);
        if (mode_ != ThresholdMode::none)
            for (int v = 0; v < V_; ++v) theta.push_back(p.gamma_T[std::size_t(v)]);
        for (std::size_t j = 0; j < p_; ++j) theta.push_back(p.beta[j]);
        return theta;
    }

private:
    int n_sites_ = 0;
    int K_ = 0;
    int V_ = 1;
    std::size_t p_ = 0;
    ThresholdMode mode_ = ThresholdMode::none;
    std::vector<int> ref_;
    std::vector<std::string> names_;
    std::size_t threshold_index_ = 0;
};

} // namespace ctsurv
