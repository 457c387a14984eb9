#pragma once

#include "pdmlab/ntf.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pdmlab {

/// 1-bit error-feedback delta-sigma modulator clocked once per half
/// switching cycle. The loop filter NTF(z) - 1 is realized as a direct-form
/// difference equation over explicitly stored past errors and filter
/// outputs, all zero-initialized.
///
/// Per step: v = d + (NTF(z) - 1) applied to past errors, y = 1 iff
/// v >= threshold (default 1, ties quantize to 1), e = y - v. With this
/// convention e stays in [-1, 0] for every stable configuration.
/// The quantizer threshold is exposed only as a fault-injection hook for
/// stability tests.
class Modulator {
public:
    explicit Modulator(NtfSpec ntf, double quantizer_threshold = 1.0);

    int step(double d) {
        const std::size_t m = diff_.size();
        double f = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            f += diff_[i] * past_errors_[i] - den_[i] * past_feedback_[i];
        const double v = d + f;
        const int y = v >= threshold_ ? 1 : 0;
        const double e = static_cast<double>(y) - v;
        for (std::size_t i = m; i-- > 1;) {
            past_errors_[i] = past_errors_[i - 1];
            past_feedback_[i] = past_feedback_[i - 1];
        }
        if (m > 0) {
            past_errors_[0] = e;
            past_feedback_[0] = f;
        }
        last_error_ = e;
        ++sample_index_;
        return y;
    }

    double last_error() const { return last_error_; }
    std::uint64_t sample_index() const { return sample_index_; }
    const NtfSpec& ntf() const { return ntf_; }
    void reset();

private:
    NtfSpec ntf_;
    std::vector<double> diff_;          // b_i - a_i for i = 1..order
    std::vector<double> den_;           // a_i for i = 1..order
    std::vector<double> past_errors_;   // e[n-1] .. e[n-order]
    std::vector<double> past_feedback_; // f[n-1] .. f[n-order]
    double threshold_;
    double last_error_ = 0.0;
    std::uint64_t sample_index_ = 0;
};

struct ModulatorRun {
    std::vector<std::uint8_t> bits;
    std::vector<double> errors;
};

/// Streams Modulator::step over a density sequence from zero initial state.
ModulatorRun modulator_run(const NtfSpec& ntf, std::span<const double> density);

struct StabilityViolation {
    double d;
    std::uint64_t sample_index;
    double error;
};

/// Empirical stability check: for each constant density the modulator runs
/// `horizon` steps and every quantization error outside [-1 - eps, 0 + eps]
/// is a violation. Reported violations are capped; total_violations counts
/// all of them.
struct StabilityReport {
    std::vector<double> d_grid;
    double max_error = 0.0;
    double min_error = 0.0;
    std::vector<StabilityViolation> violations;
    std::uint64_t total_violations = 0;
    bool stable() const { return total_violations == 0; }
};

StabilityReport stability_scan(const NtfSpec& ntf, std::span<const double> d_grid,
                               std::uint64_t horizon, double quantizer_threshold = 1.0);

/// Error bound tolerance used by stability_scan.
inline constexpr double kStabilityEpsilon = 1e-9;

} // namespace pdmlab
