#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pdmlab {

/// One bit per half switching cycle; bit n gates the half-cycle whose bridge
/// polarity is +1 for even n, -1 for odd n. The polarity clock keeps running
/// across skipped pulses.
struct GateSchedule {
    std::vector<std::uint8_t> bits;
    double switching_frequency = 0.0; // Hz
    double dc_voltage = 0.0;          // volts
    int oversample = 8;               // samples per half cycle, >= 8

    double sample_rate() const { return 2.0 * switching_frequency * oversample; }
};

/// Uniformly sampled bridge voltage: dc_voltage * polarity(n) while bit n is
/// set, 0 V while it is skipped.
std::vector<double> synthesize_bridge_wave(const GateSchedule& schedule);

struct SyncPulseConfig {
    double blanking_fraction = 0.25;  // of one switching period, in [0, 0.5)
    int initial_polarity = +1;        // +1 or -1
    double switching_frequency = 0.0; // Hz, sizes the blanking window
};

/// Streaming comparator with blanking for synchronous rectification. Feed
/// samples in time order; polarity() is valid after each push and uses only
/// past samples. A zero crossing flips the polarity to the sign the current
/// is entering; crossings inside the blanking window after the last accepted
/// transition are ignored.
class SyncPulseTracker {
public:
    SyncPulseTracker(const SyncPulseConfig& cfg, double sample_rate);

    int push(double current_sample);
    int polarity() const { return polarity_; }
    bool saw_crossing() const { return saw_crossing_; }

private:
    double dt_;
    double blanking_seconds_;
    int polarity_;
    double prev_ = 0.0;
    int prev_sign_ = 0;
    double t_ = 0.0;
    double last_toggle_time_;
    bool saw_crossing_ = false;
    bool have_prev_ = false;
};

struct SyncPulses {
    std::vector<std::int8_t> c2; // +1/-1 per sample
    bool degenerate = false;     // no zero crossing found in the whole record
};

SyncPulses sync_pulses_from_current(std::span<const double> current, double sample_rate,
                                    const SyncPulseConfig& cfg);

} // namespace pdmlab
