#pragma once

#include <complex>
#include <vector>

namespace pdmlab {

/// Forward DFT, X[k] = sum_n x[n] e^{-j2pi kn/N}. Radix-2 in place when N is
/// a power of two, Bluestein's chirp-z otherwise, so any length works.
std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x);

std::vector<std::complex<double>> fft_real(const std::vector<double>& x);

} // namespace pdmlab
