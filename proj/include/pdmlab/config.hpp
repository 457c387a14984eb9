#pragma once

#include "pdmlab/gssa.hpp"
#include "pdmlab/ntf.hpp"
#include "pdmlab/plant.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace pdmlab {

enum class NtfKind { first_order, notch };

/// Pulse-density trajectory fed to the modulator. `sweep` enumerates
/// operating points (one steady-state run each); the others are sampled in
/// time at the modulator clock. All produced values must lie in [0, 1].
struct DProfile {
    enum class Kind { constant, sweep, sinusoid, ramp };

    Kind kind = Kind::constant;
    double value = 0.963;                                   // constant
    double start = 0.0, stop = 0.0, step = 0.0;             // sweep
    double offset = 0.0, amplitude = 0.0, frequency = 0.0;  // sinusoid, Hz
    double duration = 0.0;                                  // ramp, seconds

    /// Operating points start, start+step, ... capped at stop (sweep only).
    std::vector<double> sweep_points() const;

    /// n samples at rate sample_rate (Hz). A ramp holds `stop` once the
    /// ramp interval has elapsed. Rejects sweep.
    std::vector<double> samples(double sample_rate, std::size_t n) const;

    /// Sample count covering the ramp interval at sample_rate.
    std::size_t ramp_samples(double sample_rate) const;

    void validate() const;
};

struct ExperimentConfig {
    CircuitParams circuit;           // bench defaults, see reference_params()
    NtfKind ntf_kind = NtfKind::notch;
    double notch_ratio = 0.076;      // notch frequency over switching frequency
    double pole_radius = 0.9;
    Side side = Side::secondary;     // which bridge the d profile drives
    DProfile d_profile;
    SimConfig sim;                   // duration_periods 0 = experiment default
    std::uint64_t seed = 1;          // reserved; the pipeline is deterministic

    /// Keys assigned by the config file or an override, as opposed to
    /// defaults. Experiments use this to fill experiment-specific defaults
    /// without clobbering user choices.
    std::set<std::string> explicit_keys;

    bool is_explicit(const std::string& key) const { return explicit_keys.count(key) != 0; }

    /// The shaper selected by ntf_kind / notch_ratio / pole_radius.
    NtfSpec make_ntf() const;

    void validate() const;
};

ExperimentConfig default_config();

/// Parses a flat `key = value` file ('#' starts a comment). Values take an
/// optional SI multiplier suffix (p n u m k M G). Unknown keys and
/// out-of-range values throw std::invalid_argument naming the key and the
/// violated constraint; an unreadable file throws std::runtime_error.
ExperimentConfig load_config(const std::string& path);

/// Assigns one key as if it appeared in the config file. Does not
/// re-validate; call cfg.validate() after the last override.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Number with optional SI multiplier suffix; `key` labels parse errors.
double parse_si_value(const std::string& text, const std::string& key);

} // namespace pdmlab
