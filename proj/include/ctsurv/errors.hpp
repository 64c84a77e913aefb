#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ctsurv {

// Input/schema problems: bad CSV rows, inconsistent configs, invariant
// violations in loaded data. CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Sampler-level failures (bad initialization, non-finite likelihoods with
// subject context). CLI maps this to exit code 2.
class SamplerError : public std::runtime_error {
public:
    explicit SamplerError(const std::string& msg) : std::runtime_error(msg) {}
};

// Collects per-row errors so a whole file can be reported in one pass.
class ErrorCollector {
public:
    explicit ErrorCollector(std::string context, std::size_t max_reported = 25)
        : context_(std::move(context)), max_reported_(max_reported) {}

    void add(const std::string& msg) {
        ++count_;
        if (messages_.size() < max_reported_) messages_.push_back(msg);
    }

    bool empty() const { return count_ == 0; }
    std::size_t count() const { return count_; }

    [[noreturn]] void raise() const {
        std::string out = context_ + ": " + std::to_string(count_) + " error(s)";
        for (const auto& m : messages_) out += "\n  " + m;
        if (count_ > messages_.size())
            out += "\n  ... and " + std::to_string(count_ - messages_.size()) + " more";
        throw ValidationError(out);
    }

    void raise_if_any() const {
        if (!empty()) raise();
    }

private:
    std::string context_;
    std::size_t max_reported_;
    std::size_t count_ = 0;
    std::vector<std::string> messages_;
};

} // namespace ctsurv
