#pragma once

// Residual reports shared by every check in the library and the CLI.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pncalc/algebroid.hpp"

namespace pncalc {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr const char* kReportSchema = "pncalc.report/1";

struct CheckResult {
    std::string check;
    double max_residual = 0.0;
    double tolerance = 0.0;
    int points = 0;
    std::uint64_t seed = kDefaultSeed;
    bool pass = false;
    std::string note;
};

class Report {
public:
    explicit Report(std::string subject = {}) : subject_(std::move(subject)) {}

    const std::string& subject() const noexcept { return subject_; }
    const std::vector<CheckResult>& checks() const noexcept { return checks_; }

    void add(CheckResult result) { checks_.push_back(std::move(result)); }
    void append(const Report& other);

    bool pass() const;
    double max_residual() const;

    /// Result of a named check; throws if absent.
    const CheckResult& at(const std::string& check) const;

    std::string to_text() const;
    std::string to_json(int indent = 2) const;

private:
    std::string subject_;
    std::vector<CheckResult> checks_;
};

using Point = std::vector<double>;

/// Seeded uniform samples from a box (deterministic for a given seed).
std::vector<Point> sample_points(const Domain& domain, int count, std::uint64_t seed = kDefaultSeed);

/// Evaluates a residual at every point and folds the maximum into a result.
/// A NaN residual fails the check.
CheckResult max_residual(std::string check, std::span<const Point> points, double tolerance, std::uint64_t seed,
                         const std::function<double(const Point&)>& residual);

} // namespace pncalc
