#pragma once

#include "pdmlab/gating.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace pdmlab {

/// Series-series compensated two-coil tank with a DC source bridge on the
/// primary and a constant-voltage synchronous rectifier on the secondary.
struct CircuitParams {
    double L1 = 0.0, L2 = 0.0; // henries
    double C1 = 0.0, C2 = 0.0; // farads
    double R1 = 0.0, R2 = 0.0; // ohms
    double k = 0.0;            // coupling, (0, 1)
    double Vg = 0.0, Vo = 0.0; // volts
    double fs = 0.0;           // switching frequency, Hz

    double M() const;
    double omega_s() const;
    void validate() const;

    /// Both LC pairs tuned to fs within tol (relative).
    bool is_resonant(double tol = 0.02) const;
};

/// Bench prototype values: L1 31.7 uH, L2 29.7 uH, C1 8.87 nF, C2 9.47 nF,
/// R1 105 mOhm, R2 102 mOhm, k 0.152, Vg = Vo = 50 V, fs 300 kHz.
CircuitParams reference_params();

struct SimConfig {
    int steps_per_period = 512; // even, >= 64
    int duration_periods = 0;
    int transient_discard_periods = 200;
};

struct TraceSet {
    std::vector<double> time;     // seconds
    std::vector<double> i1, i2;   // amps
    std::vector<double> vc1, vc2; // volts
    std::vector<double> u1, u2;   // volts
    std::vector<std::int8_t> c2;  // rectifier polarity during each sample
    double sample_rate = 0.0;     // Hz
    double fs_switch = 0.0;       // Hz
};

struct PlantState {
    double i1 = 0.0, i2 = 0.0;   // amps
    double vc1 = 0.0, vc2 = 0.0; // volts
};

/// Fixed-step RK4 integration of
///   L1 i1' + M i2' = u1 - R1 i1 - vc1
///   M i1' + L2 i2' = -u2 - R2 i2 - vc2
///   C1 vc1' = i1,  C2 vc2' = i2
/// from zero initial state. u1 is the primary bridge wave; u2 is Vo gated by
/// the secondary bit and by the rectifier polarity tracked online from i2
/// zero crossings (a skipped secondary pulse shorts the winding, u2 = 0).
/// Inputs are held constant across each sample. Bit arrays need 2 bits per
/// simulated period. Divergence aborts with a diagnostic.
TraceSet simulate(const CircuitParams& params, std::span<const std::uint8_t> primary_bits,
                  std::span<const std::uint8_t> secondary_bits, const SimConfig& sim,
                  const SyncPulseConfig* sync_cfg = nullptr,
                  const PlantState* initial_state = nullptr);

/// Same plant, but the primary voltage samples are supplied directly
/// (amplitude-modulated drive probes). u1_samples.size() fixes the duration
/// and must be a multiple of steps_per_period.
TraceSet simulate_with_primary_wave(const CircuitParams& params,
                                    std::span<const double> u1_samples,
                                    std::span<const std::uint8_t> secondary_bits,
                                    const SimConfig& sim,
                                    const SyncPulseConfig* sync_cfg = nullptr,
                                    const PlantState* initial_state = nullptr);

struct PhasorSolution {
    std::complex<double> I1{0.0, 0.0};
    std::complex<double> I2{0.0, 0.0};
    int iterations = 0;
    bool converged = true;
};

/// Fundamental-frequency fixed point of the tank with the rectifier voltage
/// anti-phase to I2:
///   Z1 I1 + jwM I2 = U1,   jwM I1 + Z2 I2 = -U2,   U2 = u2_amp * I2/|I2|.
/// Solved by damped fixed-point iteration on U2. Brute-force steady-state
/// oracle for simulate().
PhasorSolution steady_state_phasor(const CircuitParams& params, double u1_amp, double u2_amp);

} // namespace pdmlab
