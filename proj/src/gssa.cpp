#include "pdmlab/gssa.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdmlab {
namespace {

// Multiplication by -jw as a 2x2 real block acting on (re, im).
Eigen::Matrix2d rot_minus_jw(double w) {
    Eigen::Matrix2d m;
    m << 0.0, w, -w, 0.0;
    return m;
}

Eigen::Vector2d as_vec(std::complex<double> z) { return {z.real(), z.imag()}; }

} // namespace

GssaModel build_gssa(const CircuitParams& params, double d1, double d2, Side input_side) {
    params.validate();
    if (d1 < 0.0 || d1 > 1.0 || d2 < 0.0 || d2 > 1.0)
        throw std::invalid_argument("gssa: densities must be in [0, 1]");

    const double w = params.omega_s();
    const double M = params.M();
    const double det = params.L1 * params.L2 - M * M;
    const double l11 = params.L2 / det, l12 = -M / det, l22 = params.L1 / det;
    const double u1_amp = 4.0 * params.Vg / std::numbers::pi * d1;
    const double u2_amp = 4.0 * params.Vo / std::numbers::pi * d2;

    const PhasorSolution op = steady_state_phasor(params, u1_amp, u2_amp);
    if (!op.converged)
        throw std::runtime_error("gssa: operating-point iteration did not converge");

    const double i2_mag = std::abs(op.I2);
    if (u2_amp > 0.0 && i2_mag < 1e-12)
        throw std::runtime_error("gssa: rectifier active with zero carrier current");

    // Unit direction of I2 and the rectifier's small-signal response
    // d(U2)/d(I2) = u2_amp (I - u u^T)/|I2| as real 2x2 blocks.
    Eigen::Vector2d u2dir(1.0, 0.0);
    Eigen::Matrix2d Gamma = Eigen::Matrix2d::Zero();
    if (u2_amp > 0.0) {
        u2dir = as_vec(op.I2) / i2_mag;
        Gamma = u2_amp * (Eigen::Matrix2d::Identity() - u2dir * u2dir.transpose()) / i2_mag;
    }

    const Eigen::Matrix2d I2x2 = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d W = rot_minus_jw(w);

    GssaModel m;
    m.params = params;
    m.input_side = input_side;
    m.d1 = d1;
    m.d2 = d2;
    m.A.setZero();

    // Row blocks: state order (I1, I2, V1, V2), each a (re, im) pair.
    auto blk = [&](int r, int c) { return m.A.block<2, 2>(2 * r, 2 * c); };
    blk(0, 0) = -l11 * params.R1 * I2x2 + W;
    blk(0, 1) = -l12 * params.R2 * I2x2 - l12 * Gamma;
    blk(0, 2) = -l11 * I2x2;
    blk(0, 3) = -l12 * I2x2;
    blk(1, 0) = -l12 * params.R1 * I2x2;
    blk(1, 1) = -l22 * params.R2 * I2x2 - l22 * Gamma + W;
    blk(1, 2) = -l12 * I2x2;
    blk(1, 3) = -l22 * I2x2;
    blk(2, 0) = (1.0 / params.C1) * I2x2;
    blk(2, 2) = W;
    blk(3, 1) = (1.0 / params.C2) * I2x2;
    blk(3, 3) = W;

    m.B.setZero();
    if (input_side == Side::primary) {
        // U1 is the phase reference; a voltage-amplitude perturbation enters
        // along the real axis.
        m.B.segment<2>(0) = l11 * Eigen::Vector2d(1.0, 0.0);
        m.B.segment<2>(2) = l12 * Eigen::Vector2d(1.0, 0.0);
    } else {
        // U2 amplitude perturbation acts along the rectifier direction.
        m.B.segment<2>(0) = -l12 * u2dir;
        m.B.segment<2>(2) = -l22 * u2dir;
    }

    m.C_i1.setZero();
    m.C_i2.setZero();
    const double i1_mag = std::abs(op.I1);
    const Eigen::Vector2d u1dir = i1_mag > 0.0 ? Eigen::Vector2d(as_vec(op.I1) / i1_mag)
                                               : Eigen::Vector2d(1.0, 0.0);
    m.C_i1.segment<2>(0) = u1dir.transpose();
    m.C_i2.segment<2>(2) = u2dir.transpose();
    if (u2_amp == 0.0 && i2_mag > 0.0)
        m.C_i2.segment<2>(2) = (as_vec(op.I2) / i2_mag).transpose();

    const std::complex<double> jw(0.0, w);
    const std::complex<double> V1 = op.I1 / (jw * params.C1);
    const std::complex<double> V2 = op.I2 / (jw * params.C2);
    m.x0 << op.I1.real(), op.I1.imag(), op.I2.real(), op.I2.imag(), V1.real(), V1.imag(),
        V2.real(), V2.imag();
    return m;
}

BodeData gssa_bode(const GssaModel& model, std::span<const double> freq_grid,
                   OutputCurrent output) {
    if (freq_grid.empty())
        throw std::invalid_argument("gssa_bode: empty frequency grid");
    for (std::size_t i = 0; i < freq_grid.size(); ++i) {
        if (!(freq_grid[i] > 0.0))
            throw std::invalid_argument("gssa_bode: frequencies must be positive");
        if (i > 0 && !(freq_grid[i] > freq_grid[i - 1]))
            throw std::invalid_argument("gssa_bode: frequencies must be strictly increasing");
    }
    const Eigen::RowVector<double, 8>& C =
        output == OutputCurrent::i1 ? model.C_i1 : model.C_i2;
    using CMat = Eigen::Matrix<std::complex<double>, 8, 8>;
    const CMat Ac = model.A.cast<std::complex<double>>();
    const Eigen::Vector<std::complex<double>, 8> Bc = model.B.cast<std::complex<double>>();

    BodeData out;
    out.input_side = model.input_side;
    out.output = output;
    out.freq.assign(freq_grid.begin(), freq_grid.end());
    out.magnitude_db.resize(freq_grid.size());
    out.phase_deg.resize(freq_grid.size());
    for (std::size_t i = 0; i < freq_grid.size(); ++i) {
        CMat lhs = -Ac;
        for (int d = 0; d < 8; ++d)
            lhs(d, d) += std::complex<double>(0.0, freq_grid[i]);
        const Eigen::Vector<std::complex<double>, 8> x = lhs.partialPivLu().solve(Bc);
        const std::complex<double> g = (C.cast<std::complex<double>>() * x)(0);
        out.magnitude_db[i] = 20.0 * std::log10(std::abs(g));
        out.phase_deg[i] = std::arg(g) * 180.0 / std::numbers::pi;
    }
    return out;
}

PeakResult find_peak(const BodeData& bode) {
    const std::size_t n = bode.freq.size();
    if (n < 3)
        throw std::invalid_argument("find_peak: need at least 3 points");
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (bode.magnitude_db[i] > bode.magnitude_db[imax])
            imax = i;
    PeakResult r;
    if (imax == 0 || imax == n - 1)
        return r; // endpoint maximum: no interior peak
    r.has_peak = true;

    // Quadratic through the three samples around the maximum (general
    // spacing); vertex refines both location and height.
    const double x0 = bode.freq[imax - 1], x1 = bode.freq[imax], x2 = bode.freq[imax + 1];
    const double y0 = bode.magnitude_db[imax - 1], y1 = bode.magnitude_db[imax],
                 y2 = bode.magnitude_db[imax + 1];
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0); // half the second derivative
    if (curv >= 0.0) {
        r.omega0 = x1;
        r.gain_db = y1;
        return r;
    }
    const double xv = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
    const double clamped = std::min(std::max(xv, x0), x2);
    r.omega0 = clamped;
    const double a = curv;
    const double b = d0 - a * (x0 + x1);
    const double c = y0 - a * x0 * x0 - b * x0;
    r.gain_db = a * clamped * clamped + b * clamped + c;
    return r;
}

} // namespace pdmlab
