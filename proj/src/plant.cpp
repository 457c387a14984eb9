#include "pdmlab/plant.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace pdmlab {
namespace {

struct State {
    double i1, i2, vc1, vc2;
};

State operator+(State a, const State& b) {
    return {a.i1 + b.i1, a.i2 + b.i2, a.vc1 + b.vc1, a.vc2 + b.vc2};
}

State operator*(double s, const State& a) { return {s * a.i1, s * a.i2, s * a.vc1, s * a.vc2}; }

struct Derivative {
    // Inverse inductance matrix entries and capacitor reciprocals.
    double l11, l12, l22, ic1, ic2, r1, r2;

    State operator()(const State& x, double u1, double u2) const {
        const double e1 = u1 - r1 * x.i1 - x.vc1;
        const double e2 = -u2 - r2 * x.i2 - x.vc2;
        return {l11 * e1 + l12 * e2, l12 * e1 + l22 * e2, ic1 * x.i1, ic2 * x.i2};
    }
};

State rk4_step(const Derivative& f, const State& x, double u1, double u2, double h) {
    const State k1 = f(x, u1, u2);
    const State k2 = f(x + (h / 2) * k1, u1, u2);
    const State k3 = f(x + (h / 2) * k2, u1, u2);
    const State k4 = f(x + h * k3, u1, u2);
    return x + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

TraceSet run_sim(const CircuitParams& p, std::span<const double> u1_samples,
                 std::span<const std::uint8_t> secondary_bits, const SimConfig& sim,
                 const SyncPulseConfig* sync_cfg, const PlantState* initial_state) {
    p.validate();
    if (sim.steps_per_period < 64 || sim.steps_per_period % 2 != 0)
        throw std::invalid_argument("simulate: steps_per_period must be even and >= 64");
    const std::size_t spp = static_cast<std::size_t>(sim.steps_per_period);
    if (u1_samples.empty() || u1_samples.size() % spp != 0)
        throw std::invalid_argument("simulate: u1 samples must cover whole periods");
    const std::size_t n = u1_samples.size();
    const std::size_t periods = n / spp;
    const std::size_t half = spp / 2;
    if (secondary_bits.size() < 2 * periods)
        throw std::invalid_argument("simulate: secondary bits must cover 2 per period");

    const double M = p.M();
    const double det = p.L1 * p.L2 - M * M;
    const Derivative f{p.L2 / det, -M / det, p.L1 / det, 1.0 / p.C1, 1.0 / p.C2, p.R1, p.R2};
    const double dt = 1.0 / (p.fs * static_cast<double>(spp));

    SyncPulseConfig sc = sync_cfg ? *sync_cfg : SyncPulseConfig{};
    sc.switching_frequency = p.fs;
    SyncPulseTracker tracker(sc, 1.0 / dt);

    TraceSet tr;
    tr.sample_rate = 1.0 / dt;
    tr.fs_switch = p.fs;
    tr.time.resize(n);
    tr.i1.resize(n);
    tr.i2.resize(n);
    tr.vc1.resize(n);
    tr.vc2.resize(n);
    tr.u1.assign(u1_samples.begin(), u1_samples.end());
    tr.u2.resize(n);
    tr.c2.resize(n);

    State x{0.0, 0.0, 0.0, 0.0};
    if (initial_state)
        x = {initial_state->i1, initial_state->i2, initial_state->vc1, initial_state->vc2};
    int pol = tracker.push(x.i2);
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t h = s / half; // half-cycle index
        const double u2 = secondary_bits[h] ? p.Vo * static_cast<double>(pol) : 0.0;

        tr.time[s] = static_cast<double>(s) * dt;
        tr.i1[s] = x.i1;
        tr.i2[s] = x.i2;
        tr.vc1[s] = x.vc1;
        tr.vc2[s] = x.vc2;
        tr.u2[s] = u2;
        tr.c2[s] = static_cast<std::int8_t>(pol);

        x = rk4_step(f, x, u1_samples[s], u2, dt);
        if (!std::isfinite(x.i1) || !std::isfinite(x.i2) || !std::isfinite(x.vc1) ||
            !std::isfinite(x.vc2)) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "simulate: state diverged at t=%.9g s (sample %zu of %zu)",
                          tr.time[s], s, n);
            throw std::runtime_error(msg);
        }
        pol = tracker.push(x.i2);
    }
    return tr;
}

} // namespace

double CircuitParams::M() const { return k * std::sqrt(L1 * L2); }

double CircuitParams::omega_s() const { return 2.0 * std::numbers::pi * fs; }

void CircuitParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "circuit: %s must be positive and finite", name);
            throw std::invalid_argument(msg);
        }
    };
    positive(L1, "L1");
    positive(L2, "L2");
    positive(C1, "C1");
    positive(C2, "C2");
    positive(R1, "R1");
    positive(R2, "R2");
    positive(Vg, "Vg");
    positive(Vo, "Vo");
    positive(fs, "fs");
    if (!(k > 0.0) || !(k < 1.0))
        throw std::invalid_argument("circuit: coupling k must satisfy 0 < k < 1");
}

bool CircuitParams::is_resonant(double tol) const {
    const double f1 = 1.0 / (2.0 * std::numbers::pi * std::sqrt(L1 * C1));
    const double f2 = 1.0 / (2.0 * std::numbers::pi * std::sqrt(L2 * C2));
    return std::abs(f1 - fs) <= tol * fs && std::abs(f2 - fs) <= tol * fs;
}

CircuitParams reference_params() {
    CircuitParams p;
    p.L1 = 31.7e-6;
    p.L2 = 29.7e-6;
    p.C1 = 8.87e-9;
    p.C2 = 9.47e-9;
    p.R1 = 105e-3;
    p.R2 = 102e-3;
    p.k = 0.152;
    p.Vg = 50.0;
    p.Vo = 50.0;
    p.fs = 300e3;
    return p;
}

TraceSet simulate(const CircuitParams& params, std::span<const std::uint8_t> primary_bits,
                  std::span<const std::uint8_t> secondary_bits, const SimConfig& sim,
                  const SyncPulseConfig* sync_cfg, const PlantState* initial_state) {
    if (sim.duration_periods <= 0)
        throw std::invalid_argument("simulate: duration_periods must be positive");
    const std::size_t periods = static_cast<std::size_t>(sim.duration_periods);
    if (primary_bits.size() < 2 * periods)
        throw std::invalid_argument("simulate: primary bits must cover 2 per period");
    GateSchedule sched;
    sched.bits.assign(primary_bits.begin(), primary_bits.begin() + 2 * periods);
    sched.switching_frequency = params.fs;
    sched.dc_voltage = params.Vg;
    sched.oversample = sim.steps_per_period / 2;
    const std::vector<double> u1 = synthesize_bridge_wave(sched);
    return run_sim(params, u1, secondary_bits, sim, sync_cfg, initial_state);
}

TraceSet simulate_with_primary_wave(const CircuitParams& params,
                                    std::span<const double> u1_samples,
                                    std::span<const std::uint8_t> secondary_bits,
                                    const SimConfig& sim, const SyncPulseConfig* sync_cfg,
                                    const PlantState* initial_state) {
    return run_sim(params, u1_samples, secondary_bits, sim, sync_cfg, initial_state);
}

PhasorSolution steady_state_phasor(const CircuitParams& params, double u1_amp, double u2_amp) {
    params.validate();
    if (u1_amp < 0.0 || u2_amp < 0.0)
        throw std::invalid_argument("phasor: amplitudes must be nonnegative");
    const double w = params.omega_s();
    const double M = params.M();
    const std::complex<double> j(0.0, 1.0);
    const std::complex<double> Z1 = params.R1 + j * (w * params.L1 - 1.0 / (w * params.C1));
    const std::complex<double> Z2 = params.R2 + j * (w * params.L2 - 1.0 / (w * params.C2));
    const std::complex<double> jwM = j * w * M;
    const std::complex<double> det = Z1 * Z2 + w * w * M * M;

    auto solve = [&](std::complex<double> U2) {
        PhasorSolution s;
        s.I1 = (u1_amp * Z2 + jwM * U2) / det;
        s.I2 = (-Z1 * U2 - jwM * u1_amp) / det;
        return s;
    };

    PhasorSolution sol = solve({0.0, 0.0});
    if (u2_amp == 0.0)
        return sol;

    // U2 must stay anti-phase with I2; damped fixed point on that direction.
    // The slow second phase covers weakly contracting regimes near the
    // feasibility boundary (rectifier voltage close to the available drive).
    std::complex<double> U2{0.0, 0.0};
    int iterations = 0;
    for (double alpha : {0.7, 0.15}) {
        const int max_iter = alpha > 0.5 ? 500 : 5000;
        for (int it = 1; it <= max_iter; ++it) {
            const double mag = std::abs(sol.I2);
            const std::complex<double> target = mag > 0.0 ? u2_amp * sol.I2 / mag
                                                          : std::complex<double>{0.0, 0.0};
            const std::complex<double> next = (1.0 - alpha) * U2 + alpha * target;
            const double delta = std::abs(next - U2);
            U2 = next;
            sol = solve(U2);
            sol.iterations = ++iterations;
            if (delta <= 1e-13 * std::max(1.0, u2_amp))
                return sol;
        }
    }
    sol.converged = false;
    return sol;
}

} // namespace pdmlab
