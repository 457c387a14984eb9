#include "pdmlab/modulator.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdmlab {

Modulator::Modulator(NtfSpec ntf, double quantizer_threshold)
    : ntf_(std::move(ntf)), threshold_(quantizer_threshold) {
    ntf_.validate();
    const std::vector<double> num = ntf_.numerator();
    const std::vector<double> den = ntf_.denominator();
    const std::size_t m = static_cast<std::size_t>(ntf_.order());
    diff_.resize(m);
    den_.resize(m);
    for (std::size_t i = 1; i <= m; ++i) {
        diff_[i - 1] = num[i] - den[i];
        den_[i - 1] = den[i];
    }
    past_errors_.assign(m, 0.0);
    past_feedback_.assign(m, 0.0);
}

void Modulator::reset() {
    std::fill(past_errors_.begin(), past_errors_.end(), 0.0);
    std::fill(past_feedback_.begin(), past_feedback_.end(), 0.0);
    last_error_ = 0.0;
    sample_index_ = 0;
}

ModulatorRun modulator_run(const NtfSpec& ntf, std::span<const double> density) {
    Modulator mod(ntf);
    ModulatorRun run;
    run.bits.reserve(density.size());
    run.errors.reserve(density.size());
    for (double d : density) {
        run.bits.push_back(static_cast<std::uint8_t>(mod.step(d)));
        run.errors.push_back(mod.last_error());
    }
    return run;
}

StabilityReport stability_scan(const NtfSpec& ntf, std::span<const double> d_grid,
                               std::uint64_t horizon, double quantizer_threshold) {
    constexpr std::size_t kMaxReported = 1000;
    StabilityReport report;
    report.d_grid.assign(d_grid.begin(), d_grid.end());
    bool first = true;
    for (double d : d_grid) {
        Modulator mod(ntf, quantizer_threshold);
        for (std::uint64_t n = 0; n < horizon; ++n) {
            mod.step(d);
            const double e = mod.last_error();
            if (first) {
                report.max_error = e;
                report.min_error = e;
                first = false;
            } else {
                report.max_error = std::max(report.max_error, e);
                report.min_error = std::min(report.min_error, e);
            }
            if (e > kStabilityEpsilon || e < -1.0 - kStabilityEpsilon) {
                ++report.total_violations;
                if (report.violations.size() < kMaxReported)
                    report.violations.push_back({d, n, e});
            }
        }
    }
    return report;
}

} // namespace pdmlab
