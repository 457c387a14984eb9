#include "pdmlab/plant.hpp"

#include "pdmlab/analysis.hpp"
#include "pdmlab/modulator.hpp"
#include "pdmlab/ntf.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

using namespace pdmlab;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<std::uint8_t> ones(std::size_t n) { return std::vector<std::uint8_t>(n, 1); }

std::vector<std::uint8_t> density_bits(const NtfSpec& ntf, double d, std::size_t n) {
    std::vector<double> dens(n, d);
    return modulator_run(ntf, dens).bits;
}

} // namespace

TEST_CASE("bench parameter set is self-consistent") {
    const CircuitParams p = reference_params();
    REQUIRE(p.L1 == 31.7e-6);
    REQUIRE(p.L2 == 29.7e-6);
    REQUIRE(p.C1 == 8.87e-9);
    REQUIRE(p.C2 == 9.47e-9);
    REQUIRE(p.R1 == 105e-3);
    REQUIRE(p.R2 == 102e-3);
    REQUIRE(p.k == 0.152);
    REQUIRE(p.Vg == 50.0);
    REQUIRE(p.Vo == 50.0);
    REQUIRE(p.fs == 300e3);
    REQUIRE_NOTHROW(p.validate());
    REQUIRE(p.is_resonant());
    REQUIRE_THAT(p.M(), WithinRel(p.k * std::sqrt(p.L1 * p.L2), 1e-15));
    REQUIRE_THAT(p.omega_s(), WithinRel(2.0 * std::numbers::pi * 300e3, 1e-15));

    CircuitParams off = p;
    off.C1 *= 2.0; // tank 1 tuned ~212 kHz, far off the switching rate
    REQUIRE_FALSE(off.is_resonant());
}

TEST_CASE("parameter validation names the offending field") {
    CircuitParams p = reference_params();
    p.k = 1.2;
    REQUIRE_THROWS_MATCHES(p.validate(), std::invalid_argument,
                           MessageMatches(ContainsSubstring("k")));
    p = reference_params();
    p.L1 = -1.0;
    REQUIRE_THROWS_MATCHES(p.validate(), std::invalid_argument,
                           MessageMatches(ContainsSubstring("L1")));
    p = reference_params();
    p.fs = 0.0;
    REQUIRE_THROWS_MATCHES(p.validate(), std::invalid_argument,
                           MessageMatches(ContainsSubstring("fs")));
}

TEST_CASE("simulate guards its inputs") {
    const CircuitParams p = reference_params();
    SimConfig sim;
    sim.duration_periods = 10;
    REQUIRE_THROWS_AS(simulate(p, ones(19), ones(20), sim), std::invalid_argument);
    REQUIRE_THROWS_AS(simulate(p, ones(20), ones(19), sim), std::invalid_argument);
    sim.steps_per_period = 511;
    REQUIRE_THROWS_AS(simulate(p, ones(20), ones(20), sim), std::invalid_argument);
    sim.steps_per_period = 32;
    REQUIRE_THROWS_AS(simulate(p, ones(20), ones(20), sim), std::invalid_argument);
    sim.steps_per_period = 512;
    sim.duration_periods = 0;
    REQUIRE_THROWS_AS(simulate(p, ones(20), ones(20), sim), std::invalid_argument);
}

TEST_CASE("zero drive from zero state stays identically zero") {
    const CircuitParams p = reference_params();
    SimConfig sim;
    sim.duration_periods = 100;
    std::vector<std::uint8_t> zeros(200, 0);
    const TraceSet tr = simulate(p, zeros, zeros, sim);
    REQUIRE(tr.i1.size() == 100 * 512);
    for (std::size_t i = 0; i < tr.i1.size(); ++i) {
        REQUIRE(tr.i1[i] == 0.0);
        REQUIRE(tr.i2[i] == 0.0);
        REQUIRE(tr.vc1[i] == 0.0);
        REQUIRE(tr.vc2[i] == 0.0);
        REQUIRE(tr.u1[i] == 0.0);
        REQUIRE(tr.u2[i] == 0.0);
    }
}

TEST_CASE("repeat runs are bit-identical") {
    const CircuitParams p = reference_params();
    SimConfig sim;
    sim.duration_periods = 100;
    const auto bits2 = density_bits(ntf_notch(0.076), 0.7, 200);
    const TraceSet a = simulate(p, ones(200), bits2, sim);
    const TraceSet b = simulate(p, ones(200), bits2, sim);
    REQUIRE(a.i1 == b.i1);
    REQUIRE(a.i2 == b.i2);
    REQUIRE(a.vc1 == b.vc1);
    REQUIRE(a.vc2 == b.vc2);
    REQUIRE(a.u2 == b.u2);
    REQUIRE(a.c2 == b.c2);
}

TEST_CASE("initial state is reproduced at the first sample") {
    const CircuitParams p = reference_params();
    SimConfig sim;
    sim.duration_periods = 2;
    const PlantState init{1.5, -0.5, 20.0, -10.0};
    std::vector<std::uint8_t> zeros(4, 0);
    const TraceSet tr = simulate(p, zeros, zeros, sim, nullptr, &init);
    REQUIRE(tr.i1[0] == 1.5);
    REQUIRE(tr.i2[0] == -0.5);
    REQUIRE(tr.vc1[0] == 20.0);
    REQUIRE(tr.vc2[0] == -10.0);
}

TEST_CASE("full-power steady state matches the phasor fixed point") {
    const CircuitParams p = reference_params();
    const double u1a = 4.0 * p.Vg / std::numbers::pi;
    const double u2a = 4.0 * p.Vo / std::numbers::pi;
    const PhasorSolution ph = steady_state_phasor(p, u1a, u2a);
    REQUIRE(ph.converged);
    REQUIRE(ph.iterations > 0);

    // independent residual check of the fixed point itself
    {
        const double w = p.omega_s();
        const std::complex<double> j(0.0, 1.0);
        const std::complex<double> Z1 = p.R1 + j * (w * p.L1 - 1.0 / (w * p.C1));
        const std::complex<double> Z2 = p.R2 + j * (w * p.L2 - 1.0 / (w * p.C2));
        const std::complex<double> jwM = j * w * p.M();
        const std::complex<double> U2 = u2a * ph.I2 / std::abs(ph.I2);
        const double r1 = std::abs(Z1 * ph.I1 + jwM * ph.I2 - u1a);
        const double r2 = std::abs(jwM * ph.I1 + Z2 * ph.I2 + U2);
        const double scale = std::max(u1a, u2a);
        REQUIRE(r1 <= 1e-9 * scale);
        REQUIRE(r2 <= 1e-9 * scale);
    }

    // measured currents for the bench values
    REQUIRE_THAT(std::abs(ph.I1), WithinRel(7.3246, 2e-3));
    REQUIRE_THAT(std::abs(ph.I2), WithinRel(7.1540, 2e-3));

    SimConfig sim;
    sim.duration_periods = 1600;
    const TraceSet tr = simulate(p, ones(3200), ones(3200), sim);

    const std::size_t lastN = 400 * 512;
    const std::size_t off = tr.i1.size() - lastN;
    const double a1 =
        fundamental_amplitude(std::span(tr.i1).subspan(off), tr.sample_rate, p.fs);
    const double a2 =
        fundamental_amplitude(std::span(tr.i2).subspan(off), tr.sample_rate, p.fs);
    REQUIRE_THAT(a1, WithinRel(std::abs(ph.I1), 5e-3));
    REQUIRE_THAT(a2, WithinRel(std::abs(ph.I2), 5e-3));

    // power balance over the same window: source input covers the load,
    // the copper loss, and nothing else once the transient is gone
    double pin = 0.0, pout = 0.0, ploss = 0.0;
    for (std::size_t i = off; i < tr.i1.size(); ++i) {
        pin += tr.u1[i] * tr.i1[i];
        pout += tr.u2[i] * tr.i2[i];
        ploss += p.R1 * tr.i1[i] * tr.i1[i] + p.R2 * tr.i2[i] * tr.i2[i];
    }
    REQUIRE(pin > 0.0);
    REQUIRE(pout > 0.0);
    REQUIRE(pout < pin);
    REQUIRE(std::abs(pin - pout - ploss) <= 0.01 * pin);
}

TEST_CASE("halving the step does not move the answer") {
    const CircuitParams p = reference_params();
    const int duration = 800;
    const std::size_t discard = 200;
    const auto bits2 = density_bits(ntf_notch(0.076), 0.963, 2 * duration);

    double rip[2], mean[2];
    int idx = 0;
    for (int spp : {512, 1024}) {
        SimConfig sim;
        sim.steps_per_period = spp;
        sim.duration_periods = duration;
        const TraceSet tr = simulate(p, ones(2 * duration), bits2, sim);
        const auto env = envelope(tr.i2, tr.sample_rate, tr.fs_switch);
        const RippleReport rr = ripple(env, discard, tr.fs_switch);
        rip[idx] = rr.ripple_percent;
        mean[idx] = rr.env_mean;
        ++idx;
    }
    REQUIRE(std::abs(rip[0] - rip[1]) <= 0.5);
    REQUIRE(std::abs(mean[0] - mean[1]) <= 0.005 * mean[1]);
}

TEST_CASE("undriven tank rings down") {
    const CircuitParams p = reference_params();
    const PlantState init{5.0, -3.0, 100.0, -50.0};
    SimConfig sim;
    sim.duration_periods = 600;
    std::vector<std::uint8_t> zeros(1200, 0);
    const TraceSet tr = simulate(p, zeros, zeros, sim, nullptr, &init);
    const auto env = envelope(tr.i1, tr.sample_rate, tr.fs_switch);
    REQUIRE(env.size() == 600);

    // beat between the two tank modes makes single cycles non-monotone;
    // 50-cycle block maxima must still only decay
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b + 50 <= env.size(); b += 50) {
        double mx = 0.0;
        for (std::size_t c = b; c < b + 50; ++c)
            mx = std::max(mx, env[c]);
        REQUIRE(mx <= prev * (1.0 + 1e-9));
        prev = mx;
    }
    REQUIRE(env.back() <= 0.01 * env.front());
}

TEST_CASE("phasor solver reports an unreachable rectifier voltage") {
    CircuitParams p = reference_params();
    p.R1 = 200.0; // drive current collapses, the load voltage cannot be held
    const PhasorSolution ph =
        steady_state_phasor(p, 4.0 * p.Vg / std::numbers::pi, 4.0 * p.Vo / std::numbers::pi);
    REQUIRE_FALSE(ph.converged);

    // with the load off the same network solves in closed form
    const PhasorSolution open = steady_state_phasor(p, 4.0 * p.Vg / std::numbers::pi, 0.0);
    REQUIRE(open.converged);
    REQUIRE(std::abs(open.I1) > 0.0);
    REQUIRE_THROWS_AS(steady_state_phasor(p, -1.0, 0.0), std::invalid_argument);
}
