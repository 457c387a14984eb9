#include "pdmlab/ntf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdmlab {

namespace {

// Expand prod_i (z - r_i) into monic real coefficients, descending powers.
std::vector<double> expand_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> coeffs{1.0};
    for (const auto& r : roots) {
        coeffs.push_back(0.0);
        for (std::size_t i = coeffs.size() - 1; i > 0; --i)
            coeffs[i] -= r * coeffs[i - 1];
    }
    std::vector<double> out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (std::abs(coeffs[i].imag()) > 1e-9)
            throw std::invalid_argument(
                "ntf: roots are not closed under conjugation, coefficients not real");
        out[i] = coeffs[i].real();
    }
    return out;
}

bool conjugate_paired(const std::vector<std::complex<double>>& roots) {
    constexpr double tol = 1e-12;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i] || std::abs(roots[i].imag()) <= tol) continue;
        bool matched = false;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - std::conj(roots[i])) <= 1e-9) {
                used[i] = used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

} // namespace

std::complex<double> NtfSpec::eval(double theta) const {
    return eval_at(std::polar(1.0, theta));
}

std::complex<double> NtfSpec::eval_at(std::complex<double> z) const {
    std::complex<double> num = gain;
    for (const auto& zr : zeros) num *= (z - zr);
    std::complex<double> den = 1.0;
    for (const auto& p : poles) den *= (z - p);
    return num / den;
}

std::vector<double> NtfSpec::numerator() const { return expand_roots(zeros); }
std::vector<double> NtfSpec::denominator() const { return expand_roots(poles); }

void NtfSpec::validate() const {
    if (zeros.size() != poles.size())
        throw std::invalid_argument("ntf: zero/pole counts differ (gain at z->inf != 1)");
    if (gain != 1.0)
        throw std::invalid_argument("ntf: gain must be 1 for a realizable monic NTF");
    if (!conjugate_paired(zeros) || !conjugate_paired(poles))
        throw std::invalid_argument("ntf: complex zeros/poles must occur in conjugate pairs");
    for (const auto& p : poles)
        if (std::abs(p) >= 1.0)
            throw std::invalid_argument("ntf: all poles must lie strictly inside the unit circle");
    if (std::abs(eval_at(1.0)) > 1e-9)
        throw std::invalid_argument("ntf: NTF(1) must be 0 (DC rejection)");
}

NtfSpec ntf_first_order() {
    NtfSpec ntf;
    ntf.zeros = {1.0};
    ntf.poles = {0.0};
    ntf.gain = 1.0;
    return ntf;
}

NtfSpec ntf_notch(double omega_ratio, double pole_radius) {
    if (!(omega_ratio > 0.0 && omega_ratio < 1.0))
        throw std::invalid_argument("ntf_notch: omega_ratio must lie strictly in (0, 1)");
    if (!(pole_radius > 0.0 && pole_radius < 1.0))
        throw std::invalid_argument("ntf_notch: pole_radius must lie strictly in (0, 1)");
    const double ang = std::numbers::pi * omega_ratio;
    const std::complex<double> ze = std::polar(1.0, ang);
    NtfSpec ntf;
    ntf.zeros = {1.0, ze, std::conj(ze)};
    ntf.poles = {pole_radius, pole_radius * ze, pole_radius * std::conj(ze)};
    ntf.gain = 1.0;
    return ntf;
}

std::vector<double> ntf_impulse_response(const NtfSpec& ntf, std::size_t n) {
    const auto b = ntf.numerator();
    const auto a = ntf.denominator();
    const std::size_t m = a.size() - 1;
    std::vector<double> h(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = (i < b.size()) ? b[i] : 0.0;
        for (std::size_t j = 1; j <= std::min<std::size_t>(m, i); ++j)
            v -= a[j] * h[i - j];
        h[i] = v;
    }
    return h;
}

} // namespace pdmlab
