#pragma once

#include <complex>
#include <vector>

namespace pdmlab {

/// Rational discrete-time transfer function in zero/pole/gain form.
///
/// Realizable noise transfer functions used here are monic (gain 1), have
/// equally many zeros and poles, all poles strictly inside the unit circle,
/// a zero at z = 1 (no DC quantization noise) and unit gain at z = infinity
/// so that NTF(z) - 1 is strictly causal.
struct NtfSpec {
    std::vector<std::complex<double>> zeros;
    std::vector<std::complex<double>> poles;
    double gain = 1.0;

    int order() const { return static_cast<int>(poles.size()); }

    /// NTF(e^{j theta}). theta = pi * (omega / omega_s): the modulator runs
    /// once per half switching cycle, so omega_s maps to the Nyquist angle.
    std::complex<double> eval(double theta) const;

    /// NTF at an arbitrary z-plane point.
    std::complex<double> eval_at(std::complex<double> z) const;

    /// Monic numerator/denominator coefficients, descending powers of z.
    /// Size is order()+1 with leading coefficient 1.
    std::vector<double> numerator() const;
    std::vector<double> denominator() const;

    /// Throws std::invalid_argument when the invariants above are broken.
    void validate() const;
};

/// NTF1(z) = 1 - 1/z: the conventional first-order difference shaper.
NtfSpec ntf_first_order();

/// Third-order notch NTF. Zeros at {1, e^{+-j pi omega_ratio}} put a null
/// at DC and at the target envelope frequency; poles at the same angles
/// with radius pole_radius keep the shaper stable and the out-of-notch
/// gain flat. omega_ratio is omega_e/omega_s in (0, 1); pole_radius in (0, 1).
NtfSpec ntf_notch(double omega_ratio, double pole_radius = 0.9);

/// Impulse response of the (IIR) transfer function, truncated to n terms.
std::vector<double> ntf_impulse_response(const NtfSpec& ntf, std::size_t n);

} // namespace pdmlab
