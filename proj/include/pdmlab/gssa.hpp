#pragma once

#include "pdmlab/plant.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace pdmlab {

enum class Side { primary, secondary };
enum class OutputCurrent { i1, i2 };

/// First-harmonic dynamic-phasor small-signal model. State is the real and
/// imaginary parts of the I1, I2, Vc1, Vc2 phasors (8 reals, in that order);
/// input is a perturbation of the chosen bridge's fundamental voltage
/// amplitude; outputs are the current-amplitude perturbations d|I1|, d|I2|.
/// The rectifier enters as the derivative of U2 = u2_amp * I2/|I2| at the
/// operating point.
struct GssaModel {
    Eigen::Matrix<double, 8, 8> A;
    Eigen::Vector<double, 8> B;
    Eigen::RowVector<double, 8> C_i1;
    Eigen::RowVector<double, 8> C_i2;
    Eigen::Vector<double, 8> x0; // operating point
    CircuitParams params;
    Side input_side = Side::primary;
    double d1 = 1.0, d2 = 1.0;
};

/// Builds the model at the operating point set by pulse densities d1, d2
/// (bridge fundamental amplitude 4*V*d/pi). The operating point comes from
/// the steady-state phasor fixed point. Throws when the rectifier is active
/// but carries no current (linearization undefined).
GssaModel build_gssa(const CircuitParams& params, double d1, double d2,
                     Side input_side = Side::primary);

struct BodeData {
    std::vector<double> freq;         // envelope perturbation frequency, rad/s
    std::vector<double> magnitude_db;
    std::vector<double> phase_deg;
    Side input_side = Side::primary;
    OutputCurrent output = OutputCurrent::i2;
};

/// Evaluates C (jw I - A)^(-1) B over the grid (strictly increasing, > 0).
BodeData gssa_bode(const GssaModel& model, std::span<const double> freq_grid,
                   OutputCurrent output);

struct PeakResult {
    bool has_peak = false; // false: magnitude is monotone over the grid
    double omega0 = 0.0;   // rad/s
    double gain_db = 0.0;
};

/// Grid maximum refined by a local quadratic fit; an endpoint maximum is
/// reported as "no interior peak".
PeakResult find_peak(const BodeData& bode);

} // namespace pdmlab
