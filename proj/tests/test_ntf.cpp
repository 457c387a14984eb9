#include "pdmlab/ntf.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace pdmlab;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

// conv(a, h) truncated to h's length; used to check h against B/A.
std::vector<double> convolve_with_denominator(const std::vector<double>& a,
                                              const std::vector<double>& h) {
    std::vector<double> out(h.size(), 0.0);
    for (std::size_t n = 0; n < h.size(); ++n)
        for (std::size_t j = 0; j < a.size() && j <= n; ++j)
            out[n] += a[j] * h[n - j];
    return out;
}

} // namespace

TEST_CASE("first-order shaper is the plain difference") {
    const NtfSpec ntf = ntf_first_order();
    REQUIRE(ntf.order() == 1);
    REQUIRE(ntf.zeros.size() == 1);
    REQUIRE(ntf.zeros[0] == std::complex<double>(1.0, 0.0));
    REQUIRE(ntf.poles[0] == std::complex<double>(0.0, 0.0));

    const std::vector<double> num = ntf.numerator();
    const std::vector<double> den = ntf.denominator();
    REQUIRE(num == std::vector<double>{1.0, -1.0});
    REQUIRE(den == std::vector<double>{1.0, 0.0});

    REQUIRE_THAT(std::abs(ntf.eval(0.0)), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(ntf.eval(std::numbers::pi)), WithinAbs(2.0, 1e-15));
    REQUIRE_THAT(std::abs(ntf.eval_at({1.0, 0.0})), WithinAbs(0.0, 1e-15));
}

TEST_CASE("notch coefficients match their root expansion") {
    const double ratio = 0.075, r = 0.9;
    const NtfSpec ntf = ntf_notch(ratio, r);
    REQUIRE(ntf.order() == 3);

    // (z-1)(z^2 - 2cos(theta) z + 1) and (z-r)(z^2 - 2r cos(theta) z + r^2)
    const double theta = std::numbers::pi * ratio;
    const double c = 1.0 + 2.0 * std::cos(theta);
    const std::vector<double> num = ntf.numerator();
    const std::vector<double> den = ntf.denominator();
    REQUIRE(num.size() == 4);
    REQUIRE_THAT(num[0], WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(num[1], WithinAbs(-c, 1e-12));
    REQUIRE_THAT(num[2], WithinAbs(c, 1e-12));
    REQUIRE_THAT(num[3], WithinAbs(-1.0, 1e-12));
    REQUIRE_THAT(den[0], WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(den[1], WithinAbs(-r * c, 1e-12));
    REQUIRE_THAT(den[2], WithinAbs(r * r * c, 1e-12));
    REQUIRE_THAT(den[3], WithinAbs(-r * r * r, 1e-12));
}

TEST_CASE("notch nulls DC and its target frequency") {
    for (double ratio : {0.05, 0.075, 0.076, 0.0925, 0.3}) {
        const NtfSpec ntf = ntf_notch(ratio);
        REQUIRE_THAT(std::abs(ntf.eval(0.0)), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(std::abs(ntf.eval(std::numbers::pi * ratio)), WithinAbs(0.0, 1e-12));
        // off the notch the shaper passes energy
        REQUIRE(std::abs(ntf.eval(std::numbers::pi * 0.6)) > 0.5);
    }
}

TEST_CASE("frequency response has conjugate symmetry") {
    std::mt19937 rng(7101);
    std::uniform_real_distribution<double> uratio(0.01, 0.45), uradius(0.1, 0.98),
        utheta(0.0, std::numbers::pi);
    for (int trial = 0; trial < 20; ++trial) {
        const NtfSpec ntf = ntf_notch(uratio(rng), uradius(rng));
        for (int j = 0; j < 5; ++j) {
            const double theta = utheta(rng);
            const std::complex<double> zp = std::polar(1.0, theta);
            const std::complex<double> zm = std::polar(1.0, -theta);
            const std::complex<double> hp = ntf.eval_at(zp);
            const std::complex<double> hm = ntf.eval_at(zm);
            REQUIRE_THAT(hm.real(), WithinAbs(hp.real(), 1e-12));
            REQUIRE_THAT(hm.imag(), WithinAbs(-hp.imag(), 1e-12));
        }
    }
}

TEST_CASE("impulse response solves the difference equation") {
    for (int which : {0, 1}) {
        const NtfSpec ntf = which ? ntf_notch(0.076) : ntf_first_order();
        const std::vector<double> h = ntf_impulse_response(ntf, 64);
        REQUIRE(h.size() == 64);
        REQUIRE(h[0] == 1.0); // unit gain at z -> infinity

        const std::vector<double> b = ntf.numerator();
        const std::vector<double> lhs = convolve_with_denominator(ntf.denominator(), h);
        for (std::size_t n = 0; n < lhs.size(); ++n) {
            const double expect = n < b.size() ? b[n] : 0.0;
            REQUIRE_THAT(lhs[n], WithinAbs(expect, 1e-12));
        }
    }

    const std::vector<double> h1 = ntf_impulse_response(ntf_first_order(), 8);
    REQUIRE(h1[0] == 1.0);
    REQUIRE(h1[1] == -1.0);
    for (std::size_t n = 2; n < h1.size(); ++n)
        REQUIRE(h1[n] == 0.0);
}

TEST_CASE("validate rejects malformed shapers") {
    NtfSpec bad;

    bad.zeros = {{1.0, 0.0}};
    bad.poles = {{1.5, 0.0}};
    REQUIRE_THROWS_MATCHES(bad.validate(), std::invalid_argument,
                           Catch::Matchers::MessageMatches(ContainsSubstring("unit circle")));

    bad.zeros = {{0.5, 0.0}};
    bad.poles = {{0.0, 0.0}};
    REQUIRE_THROWS_MATCHES(bad.validate(), std::invalid_argument,
                           Catch::Matchers::MessageMatches(ContainsSubstring("NTF(1)")));

    bad.zeros = {{1.0, 0.0}, {0.5, 0.0}};
    bad.poles = {{0.0, 0.0}};
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

    bad.zeros = {{1.0, 0.0}};
    bad.poles = {{0.0, 0.0}};
    bad.gain = 2.0;
    REQUIRE_THROWS_MATCHES(bad.validate(), std::invalid_argument,
                           Catch::Matchers::MessageMatches(ContainsSubstring("gain")));

    bad.gain = 1.0;
    bad.zeros = {{1.0, 0.0}, {0.0, 0.5}};
    bad.poles = {{0.0, 0.0}, {0.0, 0.0}};
    REQUIRE_THROWS_MATCHES(bad.validate(), std::invalid_argument,
                           Catch::Matchers::MessageMatches(ContainsSubstring("conjugate")));
}

TEST_CASE("notch construction guards its arguments") {
    REQUIRE_THROWS_AS(ntf_notch(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ntf_notch(1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ntf_notch(-0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(ntf_notch(0.076, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ntf_notch(0.076, -0.2), std::invalid_argument);
    REQUIRE_NOTHROW(ntf_notch(0.076, 0.9).validate());
}
