#include "pdmlab/analysis.hpp"

#include "pdmlab/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace pdmlab {
namespace {

std::vector<double> make_window(WindowKind kind, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::flat_top) {
        // 5-term flat-top; amplitude flatness ~0.01% across a bin.
        constexpr double a0 = 0.21557895, a1 = 0.41663158, a2 = 0.277263158,
                         a3 = 0.083578947, a4 = 0.006947368;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
            w[i] = a0 - a1 * std::cos(t) + a2 * std::cos(2 * t) - a3 * std::cos(3 * t) +
                   a4 * std::cos(4 * t);
        }
    }
    return w;
}

std::size_t nearest_bin(const Spectrum& s, double f) {
    if (s.freq.empty())
        throw std::invalid_argument("empty spectrum");
    if (f < s.freq.front() || f > s.freq.back())
        throw std::out_of_range("frequency outside spectrum range");
    const double df = s.resolution_bw;
    std::size_t k = static_cast<std::size_t>(std::llround(f / df));
    if (k >= s.size())
        k = s.size() - 1;
    return k;
}

} // namespace

Spectrum spectrum(std::span<const double> signal, double sample_rate, WindowKind window) {
    const std::size_t n = signal.size();
    if (n < 2)
        throw std::invalid_argument("spectrum needs at least 2 samples");
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw std::invalid_argument("sample_rate must be positive and finite");

    const std::vector<double> w = make_window(window, n);
    std::vector<double> wx(n);
    double wsum = 0.0, ms = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wx[i] = w[i] * signal[i];
        wsum += w[i];
        ms += wx[i] * wx[i];
    }
    ms /= static_cast<double>(n);

    const std::vector<std::complex<double>> X = fft_real(wx);

    Spectrum s;
    s.window = window;
    s.transform_length = n;
    s.resolution_bw = sample_rate / static_cast<double>(n);
    s.coherent_gain = wsum / static_cast<double>(n);
    s.windowed_mean_square = ms / (s.coherent_gain * s.coherent_gain);
    const std::size_t half = n / 2;
    const std::size_t bins = half + 1;
    s.freq.resize(bins);
    s.magnitude.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        s.freq[k] = s.resolution_bw * static_cast<double>(k);
        const double scale = (k == 0 || (n % 2 == 0 && k == half)) ? 1.0 : 2.0;
        s.magnitude[k] = scale * std::abs(X[k]) / wsum;
    }
    return s;
}

double line_power(const Spectrum& s, std::size_t k) {
    if (k >= s.size())
        throw std::out_of_range("spectrum bin out of range");
    const double m = s.magnitude[k];
    const bool nyquist = (s.transform_length % 2 == 0) && (k == s.transform_length / 2);
    if (k == 0 || nyquist)
        return m * m;
    return 0.5 * m * m;
}

double band_power(const Spectrum& s, double f_lo, double f_hi) {
    if (f_lo > f_hi)
        throw std::invalid_argument("band_power: f_lo > f_hi");
    double p = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s.freq[k] >= f_lo && s.freq[k] <= f_hi)
            p += line_power(s, k);
    return p;
}

SidebandSymmetry sideband_symmetry(const Spectrum& s, double fs_switch, double delta) {
    SidebandSymmetry out;
    out.lower_mag = s.magnitude[nearest_bin(s, fs_switch - delta)];
    out.upper_mag = s.magnitude[nearest_bin(s, fs_switch + delta)];
    out.asymmetry_ratio = out.upper_mag == 0.0 ? 0.0 : out.lower_mag / out.upper_mag;
    return out;
}

double notch_depth_db(const Spectrum& ref, const Spectrum& test, double f_lo, double f_hi) {
    if (ref.size() != test.size())
        throw std::invalid_argument("notch_depth_db: spectra have different lengths");
    for (std::size_t k = 0; k < ref.size(); ++k)
        if (std::abs(ref.freq[k] - test.freq[k]) > 1e-9 * std::max(1.0, std::abs(ref.freq[k])))
            throw std::invalid_argument("notch_depth_db: frequency grids differ");
    const double pr = band_power(ref, f_lo, f_hi);
    const double pt = band_power(test, f_lo, f_hi);
    if (pt <= 0.0)
        throw std::domain_error("notch_depth_db: zero power in test band");
    return 10.0 * std::log10(pr / pt);
}

std::vector<double> envelope(std::span<const double> trace, double fs_signal, double fs_switch) {
    if (!(fs_switch > 0.0) || !(fs_signal >= 64.0 * fs_switch))
        throw std::invalid_argument("envelope: need fs_signal >= 64*fs_switch");
    const double r = fs_signal / fs_switch; // samples per switching cycle
    const std::size_t cycles = static_cast<std::size_t>(static_cast<double>(trace.size()) / r);
    if (cycles == 0)
        throw std::invalid_argument("envelope: trace shorter than one switching cycle");
    std::vector<double> env(cycles);
    for (std::size_t c = 0; c < cycles; ++c) {
        const std::size_t lo = static_cast<std::size_t>(std::ceil(static_cast<double>(c) * r));
        std::size_t hi = static_cast<std::size_t>(std::ceil(static_cast<double>(c + 1) * r));
        hi = std::min(hi, trace.size());
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            m = std::max(m, std::abs(trace[i]));
        env[c] = m;
    }
    return env;
}

RippleReport ripple(std::span<const double> env, std::size_t discard_cycles, double fs_switch) {
    if (env.size() < discard_cycles + 500)
        throw std::invalid_argument("ripple: need at least 500 cycles after discard");
    if (!(fs_switch > 0.0))
        throw std::invalid_argument("ripple: fs_switch must be positive");
    RippleReport r;
    r.window_start = static_cast<double>(discard_cycles) / fs_switch;
    r.window_end = static_cast<double>(env.size()) / fs_switch;
    double mx = env[discard_cycles], mn = env[discard_cycles], sum = 0.0;
    for (std::size_t i = discard_cycles; i < env.size(); ++i) {
        mx = std::max(mx, env[i]);
        mn = std::min(mn, env[i]);
        sum += env[i];
    }
    r.env_max = mx;
    r.env_min = mn;
    r.env_mean = sum / static_cast<double>(env.size() - discard_cycles);
    if (mx + mn == 0.0) {
        r.degenerate = true;
        r.ripple_percent = 0.0;
    } else {
        r.ripple_percent = 100.0 * (mx - mn) / (mx + mn);
    }
    return r;
}

double fundamental_amplitude(std::span<const double> signal, double sample_rate, double f0) {
    if (!(f0 > 0.0) || !(sample_rate > 0.0))
        throw std::invalid_argument("fundamental_amplitude: need positive f0 and sample rate");
    const double samples_per_cycle = sample_rate / f0;
    const std::size_t cycles = static_cast<std::size_t>(static_cast<double>(signal.size()) / samples_per_cycle);
    if (cycles == 0)
        throw std::invalid_argument("fundamental_amplitude: window shorter than one cycle");
    const std::size_t n = static_cast<std::size_t>(std::floor(static_cast<double>(cycles) * samples_per_cycle));
    std::complex<double> acc(0.0, 0.0);
    const double dphi = -2.0 * std::numbers::pi * f0 / sample_rate;
    for (std::size_t i = 0; i < n; ++i)
        acc += signal[i] * std::polar(1.0, dphi * static_cast<double>(i));
    return 2.0 * std::abs(acc) / static_cast<double>(n);
}

} // namespace pdmlab
