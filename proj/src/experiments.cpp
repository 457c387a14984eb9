#include "pdmlab/experiments.hpp"

#include "pdmlab/analysis.hpp"
#include "pdmlab/gssa.hpp"
#include "pdmlab/modulator.hpp"
#include "pdmlab/ntf.hpp"
#include "pdmlab/plant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pdmlab {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// CSV sink for one output directory. Every opened file lands in the
/// manifest with its schema version; rows are plain comma-joined cells, one
/// "\n" per row, so identical inputs give identical bytes.
class CsvOut {
public:
    explicit CsvOut(const std::string& out_dir) : dir_(out_dir) {
        std::filesystem::create_directories(dir_);
    }

    class File {
    public:
        File(const std::filesystem::path& path, const std::string& header) : path_(path) {
            os_.open(path, std::ios::binary);
            if (!os_)
                throw std::runtime_error("experiment: cannot open " + path.string() +
                                         " for writing");
            os_ << header << "\n";
        }

        void row(std::initializer_list<std::string> cells) {
            bool first = true;
            for (const auto& c : cells) {
                if (!first)
                    os_ << ',';
                os_ << c;
                first = false;
            }
            os_ << '\n';
        }

        void close() {
            os_.flush();
            if (!os_)
                throw std::runtime_error("experiment: failed writing " + path_.string());
            os_.close();
        }

    private:
        std::filesystem::path path_;
        std::ofstream os_;
    };

    File open(const std::string& name, int schema_version, const std::string& header) {
        manifest_.emplace_back(name, schema_version);
        return File(dir_ / name, header);
    }

    void write_manifest() {
        File m(dir_ / "manifest.csv", "file,schema_version");
        for (const auto& [name, version] : manifest_)
            m.row({name, std::to_string(version)});
        m.close();
    }

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, int>> manifest_;
};

std::vector<std::uint8_t> ones(std::size_t n) { return std::vector<std::uint8_t>(n, 1); }

std::vector<std::uint8_t> density_bits(const NtfSpec& ntf, double d, std::size_t n) {
    const std::vector<double> dens(n, d);
    return modulator_run(ntf, dens).bits;
}

int duration_or(const ExperimentConfig& cfg, int dflt) {
    return cfg.sim.duration_periods > 0 ? cfg.sim.duration_periods : dflt;
}

/// Envelope cycles dropped before measuring ripple: everything but the last
/// 600 cycles, capped at 1000 so long runs keep their extra window. An
/// explicit discard_periods takes precedence.
std::size_t ripple_discard(const ExperimentConfig& cfg, int duration_periods) {
    if (cfg.is_explicit("discard_periods"))
        return static_cast<std::size_t>(cfg.sim.transient_discard_periods);
    const int d = std::clamp(duration_periods - 600, 0, 1000);
    return static_cast<std::size_t>(d);
}

struct RipplePoint {
    RippleReport i1;
    RippleReport i2;
};

RipplePoint ripple_at(const CircuitParams& p, const NtfSpec& ntf, double d, Side side,
                      SimConfig sim, int duration, std::size_t discard) {
    sim.duration_periods = duration;
    const std::size_t nbits = 2 * static_cast<std::size_t>(duration);
    const std::vector<std::uint8_t> mod = density_bits(ntf, d, nbits);
    const std::vector<std::uint8_t> one = ones(nbits);
    const auto& b1 = side == Side::secondary ? one : mod;
    const auto& b2 = side == Side::secondary ? mod : one;
    const TraceSet tr = simulate(p, b1, b2, sim);
    const std::vector<double> e1 = envelope(tr.i1, tr.sample_rate, tr.fs_switch);
    const std::vector<double> e2 = envelope(tr.i2, tr.sample_rate, tr.fs_switch);
    return {ripple(e1, discard, tr.fs_switch), ripple(e2, discard, tr.fs_switch)};
}

const char* ntf_label(NtfKind kind) { return kind == NtfKind::first_order ? "first" : "notch"; }

double constant_density(const ExperimentConfig& cfg, const char* experiment) {
    if (cfg.d_profile.kind != DProfile::Kind::constant)
        throw std::invalid_argument(std::string(experiment) +
                                    ": d profile must be constant for this experiment");
    return cfg.d_profile.value;
}

// ---------------------------------------------------------------------------

void run_dynamic_response(const ExperimentConfig& cfg, CsvOut& out) {
    const DProfile& prof = cfg.d_profile;
    if (prof.kind == DProfile::Kind::sweep)
        throw std::invalid_argument(
            "dynamic-response: d profile must be constant, ramp, or sinusoid");

    const double clock = 2.0 * cfg.circuit.fs; // modulator rate, Hz
    std::size_t nbits;
    if (cfg.sim.duration_periods > 0) {
        nbits = 2 * static_cast<std::size_t>(cfg.sim.duration_periods);
    } else if (prof.kind == DProfile::Kind::ramp) {
        nbits = prof.ramp_samples(clock) + 512; // tail shows settling
    } else if (prof.kind == DProfile::Kind::sinusoid) {
        nbits = static_cast<std::size_t>(std::ceil(3.0 * clock / prof.frequency));
    } else {
        nbits = 10000;
    }

    const std::vector<double> dens = prof.samples(clock, nbits);
    const ModulatorRun run = modulator_run(cfg.make_ntf(), dens);

    CsvOut::File f = out.open("dynamic_response.csv", 1, "sample,time_s,density,bit,error");
    std::size_t bad = 0, first_bad = 0;
    for (std::size_t n = 0; n < nbits; ++n) {
        f.row({std::to_string(n), num(static_cast<double>(n) / clock), num(dens[n]),
               std::to_string(run.bits[n]), num(run.errors[n])});
        const double e = run.errors[n];
        if (e > kStabilityEpsilon || e < -1.0 - kStabilityEpsilon) {
            if (bad == 0)
                first_bad = n;
            ++bad;
        }
    }
    f.close();
    out.write_manifest();
    if (bad > 0)
        throw std::runtime_error("dynamic-response: " + std::to_string(bad) +
                                 " quantizer errors left [-1, 0], first at sample " +
                                 std::to_string(first_bad) + " (error " +
                                 num(run.errors[first_bad]) + ")");
}

void run_ntf_compare(const ExperimentConfig& cfg, CsvOut& out) {
    const double d = constant_density(cfg, "ntf-compare");
    const NtfSpec first = ntf_first_order();
    const NtfSpec notch = ntf_notch(cfg.notch_ratio, cfg.pole_radius);

    {
        CsvOut::File f =
            out.open("ntf_response.csv", 1, "omega_over_ws,mag_db_first,mag_db_notch");
        const int n = 2000;
        for (int i = 0; i <= n; ++i) {
            const double x = static_cast<double>(i) / n; // omega / omega_s in [0, 1]
            const double theta = std::numbers::pi * x;
            auto db = [](std::complex<double> h) {
                return 20.0 * std::log10(std::max(std::abs(h), 1e-12));
            };
            f.row({num(x), num(db(first.eval(theta))), num(db(notch.eval(theta)))});
        }
        f.close();
    }

    {
        CsvOut::File f = out.open("pole_zero.csv", 1, "ntf,kind,re,im");
        auto dump = [&](const char* label, const NtfSpec& ntf) {
            for (const auto& z : ntf.zeros)
                f.row({label, "zero", num(z.real()), num(z.imag())});
            for (const auto& p : ntf.poles)
                f.row({label, "pole", num(p.real()), num(p.imag())});
        };
        dump("first", first);
        dump("notch", notch);
        f.close();
    }

    const std::size_t N = std::size_t(1) << 16;
    const std::vector<std::uint8_t> b1 = density_bits(first, d, N);
    const std::vector<std::uint8_t> b3 = density_bits(notch, d, N);
    const double clock = 2.0 * cfg.circuit.fs;

    {
        CsvOut::File f = out.open("waveform.csv", 1, "sample,time_s,bit_first,bit_notch");
        for (std::size_t n = 0; n < 1024; ++n)
            f.row({std::to_string(n), num(static_cast<double>(n) / clock),
                   std::to_string(b1[n]), std::to_string(b3[n])});
        f.close();
    }

    {
        std::vector<double> a1(N), a3(N);
        for (std::size_t i = 0; i < N; ++i) {
            a1[i] = b1[i];
            a3[i] = b3[i];
        }
        const Spectrum s1 = spectrum(a1, clock, WindowKind::rectangular);
        const Spectrum s3 = spectrum(a3, clock, WindowKind::rectangular);
        CsvOut::File f = out.open("spectrum.csv", 1,
                                  "freq_hz,omega_over_ws,amplitude_first,amplitude_notch");
        for (std::size_t k = 0; k < s1.size(); ++k)
            f.row({num(s1.freq[k]), num(s1.freq[k] / cfg.circuit.fs), num(s1.magnitude[k]),
                   num(s3.magnitude[k])});
        f.close();
    }

    out.write_manifest();
}

void run_ripple_sweep(const ExperimentConfig& cfg, CsvOut& out) {
    DProfile prof = cfg.d_profile;
    if (!cfg.is_explicit("d")) {
        prof.kind = DProfile::Kind::sweep;
        prof.start = 0.203;
        prof.stop = 1.0;
        prof.step = 0.02;
    } else if (prof.kind == DProfile::Kind::constant) {
        prof.kind = DProfile::Kind::sweep;
        prof.start = prof.stop = prof.value;
        prof.step = 1.0;
    } else if (prof.kind != DProfile::Kind::sweep) {
        throw std::invalid_argument("ripple-sweep: d profile must be a sweep or constant");
    }

    const int duration = duration_or(cfg, 1600);
    const std::size_t discard = ripple_discard(cfg, duration);
    const std::vector<double> grid = prof.sweep_points();

    CsvOut::File f = out.open(
        "ripple_sweep.csv", 1,
        "ntf,d,ripple_i1_percent,ripple_i2_percent,env_i1_mean_A,env_i2_mean_A");
    for (NtfKind kind : {NtfKind::first_order, NtfKind::notch}) {
        const NtfSpec ntf = kind == NtfKind::first_order
                                ? ntf_first_order()
                                : ntf_notch(cfg.notch_ratio, cfg.pole_radius);
        for (double d : grid) {
            const RipplePoint r =
                ripple_at(cfg.circuit, ntf, d, cfg.side, cfg.sim, duration, discard);
            f.row({ntf_label(kind), num(d), num(r.i1.ripple_percent), num(r.i2.ripple_percent),
                   num(r.i1.env_mean), num(r.i2.env_mean)});
        }
    }
    f.close();
    out.write_manifest();
}

void run_deviation_study(const ExperimentConfig& cfg, CsvOut& out) {
    DProfile prof = cfg.d_profile;
    if (!cfg.is_explicit("d")) {
        prof.kind = DProfile::Kind::sweep;
        prof.start = 0.9;
        prof.stop = 1.0;
        prof.step = 0.01;
    } else if (prof.kind == DProfile::Kind::constant) {
        prof.kind = DProfile::Kind::sweep;
        prof.start = prof.stop = prof.value;
        prof.step = 1.0;
    } else if (prof.kind != DProfile::Kind::sweep) {
        throw std::invalid_argument("deviation-study: d profile must be a sweep or constant");
    }

    std::vector<double> ratios = {0.065, cfg.notch_ratio, 0.085};
    std::sort(ratios.begin(), ratios.end());
    ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());

    const int duration = duration_or(cfg, 1600);
    const std::size_t discard = ripple_discard(cfg, duration);
    const std::vector<double> grid = prof.sweep_points();

    CsvOut::File f =
        out.open("deviation_study.csv", 1, "notch_ratio,d,ripple_i1_percent,ripple_i2_percent");
    for (double ratio : ratios) {
        const NtfSpec ntf = ntf_notch(ratio, cfg.pole_radius);
        for (double d : grid) {
            const RipplePoint r =
                ripple_at(cfg.circuit, ntf, d, cfg.side, cfg.sim, duration, discard);
            f.row({num(ratio), num(d), num(r.i1.ripple_percent), num(r.i2.ripple_percent)});
        }
    }
    f.close();
    out.write_manifest();
}

void run_sinusoid_tracking(const ExperimentConfig& cfg, CsvOut& out) {
    CircuitParams p = cfg.circuit;
    if (!cfg.is_explicit("Vg"))
        p.Vg = 15.0;
    if (!cfg.is_explicit("Vo"))
        p.Vo = 15.0;

    DProfile prof = cfg.d_profile;
    if (!cfg.is_explicit("d")) {
        prof.kind = DProfile::Kind::sinusoid;
        prof.offset = 0.5;
        prof.amplitude = 0.5;
        prof.frequency = 500.0;
    } else if (prof.kind != DProfile::Kind::sinusoid) {
        throw std::invalid_argument("sinusoid-tracking: d profile must be a sinusoid");
    }

    const int duration = duration_or(cfg, static_cast<int>(std::ceil(3.0 * p.fs / prof.frequency)));
    const std::size_t nbits = 2 * static_cast<std::size_t>(duration);
    const double clock = 2.0 * p.fs;

    const std::vector<double> dens = prof.samples(clock, nbits);
    const std::vector<std::uint8_t> mod = modulator_run(cfg.make_ntf(), dens).bits;
    const std::vector<std::uint8_t> one = ones(nbits);
    const auto& b1 = cfg.side == Side::secondary ? one : mod;
    const auto& b2 = cfg.side == Side::secondary ? mod : one;

    SimConfig sim = cfg.sim;
    sim.duration_periods = duration;
    const TraceSet tr = simulate(p, b1, b2, sim);
    const std::vector<double> e1 = envelope(tr.i1, tr.sample_rate, tr.fs_switch);
    const std::vector<double> e2 = envelope(tr.i2, tr.sample_rate, tr.fs_switch);

    const double u1_full = 4.0 * p.Vg / std::numbers::pi;
    const double u2_full = 4.0 * p.Vo / std::numbers::pi;

    CsvOut::File f = out.open("sinusoid_tracking.csv", 1,
                              "cycle,time_s,d,env_i1_A,env_i2_A,pred_i1_A,pred_i2_A");
    for (std::size_t c = 0; c < e1.size(); ++c) {
        const double t = (static_cast<double>(c) + 0.5) / p.fs;
        const double d = prof.offset +
                         prof.amplitude * std::sin(2.0 * std::numbers::pi * prof.frequency * t);
        const double d1 = cfg.side == Side::primary ? d : 1.0;
        const double d2 = cfg.side == Side::secondary ? d : 1.0;
        const PhasorSolution ph = steady_state_phasor(p, u1_full * d1, u2_full * d2);
        f.row({std::to_string(c), num(t), num(d), num(e1[c]), num(e2[c]),
               num(std::abs(ph.I1)), num(std::abs(ph.I2))});
    }
    f.close();
    out.write_manifest();
}

void run_gssa_bode(const ExperimentConfig& cfg, CsvOut& out) {
    const Side side = cfg.is_explicit("side") ? cfg.side : Side::primary;
    const GssaModel model = build_gssa(cfg.circuit, 1.0, 1.0, side);
    const double ws = cfg.circuit.omega_s();

    const int n = 400;
    const double lg0 = std::log10(1e-3), lg1 = std::log10(0.5);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = ws * std::pow(10.0, lg0 + (lg1 - lg0) * i / (n - 1));

    const BodeData bi1 = gssa_bode(model, grid, OutputCurrent::i1);
    const BodeData bi2 = gssa_bode(model, grid, OutputCurrent::i2);

    {
        CsvOut::File f = out.open(
            "gssa_bode.csv", 1,
            "omega_rad_s,freq_hz,omega_over_ws,mag_db_i1,phase_deg_i1,mag_db_i2,phase_deg_i2");
        for (int i = 0; i < n; ++i)
            f.row({num(grid[i]), num(grid[i] / (2.0 * std::numbers::pi)), num(grid[i] / ws),
                   num(bi1.magnitude_db[i]), num(bi1.phase_deg[i]), num(bi2.magnitude_db[i]),
                   num(bi2.phase_deg[i])});
        f.close();
    }

    {
        CsvOut::File f = out.open(
            "gssa_peaks.csv", 1, "output,has_peak,omega0_rad_s,freq_hz,omega0_over_ws,gain_db");
        auto dump = [&](const char* label, const BodeData& b) {
            const PeakResult pk = find_peak(b);
            f.row({label, std::to_string(pk.has_peak ? 1 : 0), num(pk.omega0),
                   num(pk.omega0 / (2.0 * std::numbers::pi)), num(pk.omega0 / ws),
                   num(pk.gain_db)});
        };
        dump("i1", bi1);
        dump("i2", bi2);
        f.close();
    }

    {
        const double d = constant_density(cfg, "gssa-bode");
        const std::size_t N = std::size_t(1) << 16;
        const std::vector<std::uint8_t> bits = density_bits(cfg.make_ntf(), d, N);
        std::vector<double> a(N);
        for (std::size_t i = 0; i < N; ++i)
            a[i] = bits[i];
        const Spectrum s = spectrum(a, 2.0 * cfg.circuit.fs, WindowKind::rectangular);
        CsvOut::File f = out.open("spectrum_overlay.csv", 1, "freq_hz,omega_over_ws,amplitude");
        for (std::size_t k = 0; k < s.size(); ++k)
            f.row({num(s.freq[k]), num(s.freq[k] / cfg.circuit.fs), num(s.magnitude[k])});
        f.close();
    }

    out.write_manifest();
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "dynamic-response", "ntf-compare",       "ripple-sweep",
        "deviation-study",  "sinusoid-tracking", "gssa-bode",
    };
    return names;
}

void run_experiment(const std::string& name, const ExperimentConfig& cfg,
                    const std::string& out_dir) {
    cfg.validate();
    CsvOut out(out_dir);
    if (name == "dynamic-response")
        run_dynamic_response(cfg, out);
    else if (name == "ntf-compare")
        run_ntf_compare(cfg, out);
    else if (name == "ripple-sweep")
        run_ripple_sweep(cfg, out);
    else if (name == "deviation-study")
        run_deviation_study(cfg, out);
    else if (name == "sinusoid-tracking")
        run_sinusoid_tracking(cfg, out);
    else if (name == "gssa-bode")
        run_gssa_bode(cfg, out);
    else {
        std::string all;
        for (const auto& n : experiment_names())
            all += (all.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown experiment \"" + name + "\" (expected one of: " +
                                    all + ")");
    }
}

} // namespace pdmlab
