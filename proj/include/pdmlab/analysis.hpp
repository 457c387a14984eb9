#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdmlab {

enum class WindowKind {
    rectangular, // band-power integration
    flat_top     // accurate line magnitudes under leakage
};

/// One-sided amplitude spectrum. magnitude[k] is the amplitude of a real
/// sinusoid at freq[k] (DC and Nyquist carry the component value itself).
/// Line powers sum to windowed_mean_square exactly (Parseval, coherent-gain
/// normalized), which is what band_power integrates.
struct Spectrum {
    std::vector<double> freq;      // Hz
    std::vector<double> magnitude; // input units
    double resolution_bw = 0.0;    // bin spacing, Hz
    WindowKind window = WindowKind::rectangular;
    double coherent_gain = 1.0;         // sum(w)/N
    double windowed_mean_square = 0.0;  // mean((w.x)^2)/coherent_gain^2
    std::size_t transform_length = 0;   // N of the underlying DFT
    std::size_t size() const { return freq.size(); }
};

Spectrum spectrum(std::span<const double> signal, double sample_rate, WindowKind window);

/// Power carried by one one-sided line: mag^2 (DC, Nyquist) or mag^2/2.
double line_power(const Spectrum& s, std::size_t k);

/// Sum of line powers over freq in [f_lo, f_hi], inclusive.
double band_power(const Spectrum& s, double f_lo, double f_hi);

struct SidebandSymmetry {
    double lower_mag = 0.0;
    double upper_mag = 0.0;
    double asymmetry_ratio = 0.0; // lower/upper
};

/// Magnitudes at the nearest bins to fs_switch -/+ delta.
SidebandSymmetry sideband_symmetry(const Spectrum& s, double fs_switch, double delta);

/// 10*log10(band power of ref / band power of test); grids must match.
double notch_depth_db(const Spectrum& ref, const Spectrum& test, double f_lo, double f_hi);

/// Peak |x| per switching cycle. Cycle n covers [n, n+1)/fs_switch; partial
/// trailing cycles are dropped. Requires fs_signal >= 64*fs_switch.
std::vector<double> envelope(std::span<const double> trace, double fs_signal, double fs_switch);

struct RippleReport {
    double ripple_percent = 0.0;
    double env_max = 0.0;
    double env_min = 0.0;
    double env_mean = 0.0;
    double window_start = 0.0; // seconds
    double window_end = 0.0;
    bool degenerate = false;   // env_max + env_min == 0
};

/// ripple_percent = 100*(max-min)/(max+min) over env[discard..end). Needs at
/// least 500 cycles after the discard; fs_switch only dates the window.
RippleReport ripple(std::span<const double> env, std::size_t discard_cycles, double fs_switch);

/// Amplitude of the f0 component over an integer number of f0 cycles
/// (trailing fraction dropped): 2|sum x e^{-j2pi f0 t}|/N.
double fundamental_amplitude(std::span<const double> signal, double sample_rate, double f0);

} // namespace pdmlab
