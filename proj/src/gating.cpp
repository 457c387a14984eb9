#include "pdmlab/gating.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdmlab {

std::vector<double> synthesize_bridge_wave(const GateSchedule& schedule) {
    if (schedule.bits.empty())
        throw std::invalid_argument("bridge wave: empty bit sequence");
    if (schedule.oversample < 8)
        throw std::invalid_argument("bridge wave: oversample must be >= 8");
    if (!(schedule.switching_frequency > 0.0))
        throw std::invalid_argument("bridge wave: switching_frequency must be positive");
    const std::size_t os = static_cast<std::size_t>(schedule.oversample);
    std::vector<double> wave(schedule.bits.size() * os, 0.0);
    for (std::size_t n = 0; n < schedule.bits.size(); ++n) {
        if (!schedule.bits[n])
            continue;
        const double v = (n % 2 == 0) ? schedule.dc_voltage : -schedule.dc_voltage;
        for (std::size_t i = 0; i < os; ++i)
            wave[n * os + i] = v;
    }
    return wave;
}

SyncPulseTracker::SyncPulseTracker(const SyncPulseConfig& cfg, double sample_rate) {
    if (!(cfg.blanking_fraction >= 0.0) || cfg.blanking_fraction >= 0.5)
        throw std::invalid_argument("sync pulses: blanking_fraction must be in [0, 0.5)");
    if (cfg.initial_polarity != 1 && cfg.initial_polarity != -1)
        throw std::invalid_argument("sync pulses: initial_polarity must be +1 or -1");
    if (!(cfg.switching_frequency > 0.0))
        throw std::invalid_argument("sync pulses: switching_frequency must be positive");
    if (!(sample_rate >= 16.0 * cfg.switching_frequency))
        throw std::invalid_argument("sync pulses: sample rate must be >= 16x switching frequency");
    dt_ = 1.0 / sample_rate;
    blanking_seconds_ = cfg.blanking_fraction / cfg.switching_frequency;
    polarity_ = cfg.initial_polarity;
    last_toggle_time_ = -std::numeric_limits<double>::infinity();
}

int SyncPulseTracker::push(double x) {
    const double t_now = t_;
    if (have_prev_ && x != 0.0) {
        const int s_now = x > 0.0 ? 1 : -1;
        if (prev_sign_ != 0 && s_now != prev_sign_) {
            // Sub-sample crossing between the previous sample and this one.
            const double denom = prev_ - x;
            const double frac = denom != 0.0 ? prev_ / denom : 0.0;
            const double tc = t_now - dt_ + frac * dt_;
            saw_crossing_ = true;
            if (tc - last_toggle_time_ > blanking_seconds_) {
                if (s_now != polarity_) {
                    polarity_ = s_now;
                    last_toggle_time_ = tc;
                }
            }
        }
    }
    if (x != 0.0)
        prev_sign_ = x > 0.0 ? 1 : -1;
    prev_ = x;
    have_prev_ = true;
    t_ = t_now + dt_;
    return polarity_;
}

SyncPulses sync_pulses_from_current(std::span<const double> current, double sample_rate,
                                    const SyncPulseConfig& cfg) {
    SyncPulseTracker tracker(cfg, sample_rate);
    SyncPulses out;
    out.c2.resize(current.size());
    for (std::size_t i = 0; i < current.size(); ++i)
        out.c2[i] = static_cast<std::int8_t>(tracker.push(current[i]));
    out.degenerate = !tracker.saw_crossing();
    return out;
}

} // namespace pdmlab
