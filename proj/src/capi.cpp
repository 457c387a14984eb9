#include "pdmlab.h"

#include "pdmlab/analysis.hpp"
#include "pdmlab/config.hpp"
#include "pdmlab/experiments.hpp"
#include "pdmlab/gssa.hpp"
#include "pdmlab/modulator.hpp"
#include "pdmlab/ntf.hpp"
#include "pdmlab/plant.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <new>
#include <numbers>
#include <stdexcept>
#include <string>

struct pdmlab_ntf {
    pdmlab::NtfSpec spec;
};

struct pdmlab_config {
    pdmlab::ExperimentConfig cfg;
};

struct pdmlab_trace {
    pdmlab::TraceSet tr;
};

namespace {

thread_local std::string g_last_error;

pdmlab_status fail(pdmlab_status s, const char* what) {
    g_last_error = what;
    return s;
}

/// Runs f inside the exception-to-status firewall every entry point needs.
template <typename F>
pdmlab_status guarded(F&& f) {
    try {
        f();
        return PDMLAB_OK;
    } catch (const std::invalid_argument& e) {
        return fail(PDMLAB_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PDMLAB_ERR_NO_MEMORY, "out of memory");
    } catch (const std::exception& e) {
        return fail(PDMLAB_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(PDMLAB_ERR_RUNTIME, "unknown error");
    }
}

bool null_arg(const void* p, const char* name) {
    if (p != nullptr)
        return false;
    g_last_error = std::string(name) + " must not be null";
    return true;
}

pdmlab::Side bode_input_side(const pdmlab::ExperimentConfig& cfg) {
    return cfg.is_explicit("side") ? cfg.side : pdmlab::Side::primary;
}

const std::vector<double>* trace_channel(const pdmlab::TraceSet& tr, const char* name) {
    if (std::strcmp(name, "time") == 0)
        return &tr.time;
    if (std::strcmp(name, "i1") == 0)
        return &tr.i1;
    if (std::strcmp(name, "i2") == 0)
        return &tr.i2;
    if (std::strcmp(name, "vc1") == 0)
        return &tr.vc1;
    if (std::strcmp(name, "vc2") == 0)
        return &tr.vc2;
    if (std::strcmp(name, "u1") == 0)
        return &tr.u1;
    if (std::strcmp(name, "u2") == 0)
        return &tr.u2;
    return nullptr;
}

} // namespace

extern "C" {

const char* pdmlab_version(void) { return "1.0.0"; }

const char* pdmlab_last_error(void) { return g_last_error.c_str(); }

pdmlab_status pdmlab_ntf_first_order(pdmlab_ntf** out) {
    if (null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new pdmlab_ntf{pdmlab::ntf_first_order()}; });
}

pdmlab_status pdmlab_ntf_notch(double omega_ratio, double pole_radius, pdmlab_ntf** out) {
    if (null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new pdmlab_ntf{pdmlab::ntf_notch(omega_ratio, pole_radius)}; });
}

pdmlab_status pdmlab_ntf_order(const pdmlab_ntf* ntf, int* out) {
    if (null_arg(ntf, "ntf") || null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    *out = ntf->spec.order();
    return PDMLAB_OK;
}

pdmlab_status pdmlab_ntf_eval(const pdmlab_ntf* ntf, double omega_over_ws, double* magnitude,
                              double* phase_rad) {
    if (null_arg(ntf, "ntf") || null_arg(magnitude, "magnitude"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const std::complex<double> h = ntf->spec.eval(std::numbers::pi * omega_over_ws);
        *magnitude = std::abs(h);
        if (phase_rad != nullptr)
            *phase_rad = std::arg(h);
    });
}

void pdmlab_ntf_free(pdmlab_ntf* ntf) { delete ntf; }

pdmlab_status pdmlab_modulate(const pdmlab_ntf* ntf, const double* density, size_t n,
                              uint8_t* bits, double* errors) {
    if (null_arg(ntf, "ntf") || null_arg(density, "density") || null_arg(bits, "bits"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const pdmlab::ModulatorRun run =
            pdmlab::modulator_run(ntf->spec, std::span<const double>(density, n));
        std::memcpy(bits, run.bits.data(), n);
        if (errors != nullptr)
            std::memcpy(errors, run.errors.data(), n * sizeof(double));
    });
}

pdmlab_status pdmlab_stability_scan(const pdmlab_ntf* ntf, const double* d_grid, size_t n_d,
                                    uint64_t horizon, uint64_t* violations, double* min_error,
                                    double* max_error) {
    if (null_arg(ntf, "ntf") || null_arg(d_grid, "d_grid") || null_arg(violations, "violations"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const pdmlab::StabilityReport rep = pdmlab::stability_scan(
            ntf->spec, std::span<const double>(d_grid, n_d), horizon);
        *violations = rep.total_violations;
        if (min_error != nullptr)
            *min_error = rep.min_error;
        if (max_error != nullptr)
            *max_error = rep.max_error;
    });
}

pdmlab_status pdmlab_config_default(pdmlab_config** out) {
    if (null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new pdmlab_config{pdmlab::default_config()}; });
}

pdmlab_status pdmlab_config_load(const char* path, pdmlab_config** out) {
    if (null_arg(path, "path") || null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new pdmlab_config{pdmlab::load_config(path)}; });
}

pdmlab_status pdmlab_config_set(pdmlab_config* cfg, const char* key, const char* value) {
    if (null_arg(cfg, "cfg") || null_arg(key, "key") || null_arg(value, "value"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] { pdmlab::apply_override(cfg->cfg, key, value); });
}

pdmlab_status pdmlab_config_validate(const pdmlab_config* cfg) {
    if (null_arg(cfg, "cfg"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] { cfg->cfg.validate(); });
}

void pdmlab_config_free(pdmlab_config* cfg) { delete cfg; }

pdmlab_status pdmlab_experiment_count(size_t* out) {
    if (null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    *out = pdmlab::experiment_names().size();
    return PDMLAB_OK;
}

pdmlab_status pdmlab_experiment_name(size_t index, const char** out) {
    if (null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    const auto& names = pdmlab::experiment_names();
    if (index >= names.size())
        return fail(PDMLAB_ERR_INVALID_ARGUMENT, "experiment index out of range");
    *out = names[index].c_str();
    return PDMLAB_OK;
}

pdmlab_status pdmlab_run_experiment(const char* name, const pdmlab_config* cfg,
                                    const char* out_dir) {
    if (null_arg(name, "name") || null_arg(cfg, "cfg") || null_arg(out_dir, "out_dir"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] { pdmlab::run_experiment(name, cfg->cfg, out_dir); });
}

pdmlab_status pdmlab_simulate_density(const pdmlab_config* cfg, double d, pdmlab_trace** out) {
    if (null_arg(cfg, "cfg") || null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const pdmlab::ExperimentConfig& c = cfg->cfg;
        c.validate();
        if (!(d >= 0.0 && d <= 1.0))
            throw std::invalid_argument("density must lie in [0, 1]");
        pdmlab::SimConfig sim = c.sim;
        if (sim.duration_periods <= 0)
            sim.duration_periods = 1600;
        const std::size_t nbits = 2 * static_cast<std::size_t>(sim.duration_periods);
        const std::vector<double> dens(nbits, d);
        const std::vector<std::uint8_t> mod = pdmlab::modulator_run(c.make_ntf(), dens).bits;
        const std::vector<std::uint8_t> one(nbits, 1);
        const auto& b1 = c.side == pdmlab::Side::secondary ? one : mod;
        const auto& b2 = c.side == pdmlab::Side::secondary ? mod : one;
        *out = new pdmlab_trace{pdmlab::simulate(c.circuit, b1, b2, sim)};
    });
}

pdmlab_status pdmlab_trace_length(const pdmlab_trace* trace, size_t* out) {
    if (null_arg(trace, "trace") || null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    *out = trace->tr.time.size();
    return PDMLAB_OK;
}

pdmlab_status pdmlab_trace_sample_rate(const pdmlab_trace* trace, double* out) {
    if (null_arg(trace, "trace") || null_arg(out, "out"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    *out = trace->tr.sample_rate;
    return PDMLAB_OK;
}

pdmlab_status pdmlab_trace_channel(const pdmlab_trace* trace, const char* channel, double* buffer,
                                   size_t buffer_len) {
    if (null_arg(trace, "trace") || null_arg(channel, "channel") || null_arg(buffer, "buffer"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    const std::vector<double>* ch = trace_channel(trace->tr, channel);
    if (ch == nullptr)
        return fail(PDMLAB_ERR_INVALID_ARGUMENT,
                    "unknown channel (time, i1, i2, vc1, vc2, u1, u2)");
    if (buffer_len < ch->size())
        return fail(PDMLAB_ERR_INVALID_ARGUMENT, "buffer shorter than the trace");
    std::memcpy(buffer, ch->data(), ch->size() * sizeof(double));
    return PDMLAB_OK;
}

pdmlab_status pdmlab_trace_ripple(const pdmlab_trace* trace, const char* channel,
                                  size_t discard_cycles, double* ripple_percent) {
    if (null_arg(trace, "trace") || null_arg(channel, "channel") ||
        null_arg(ripple_percent, "ripple_percent"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const std::vector<double>* ch = trace_channel(trace->tr, channel);
        if (ch == nullptr || (std::strcmp(channel, "i1") != 0 && std::strcmp(channel, "i2") != 0))
            throw std::invalid_argument("ripple channel must be i1 or i2");
        const std::vector<double> env =
            pdmlab::envelope(*ch, trace->tr.sample_rate, trace->tr.fs_switch);
        *ripple_percent =
            pdmlab::ripple(env, discard_cycles, trace->tr.fs_switch).ripple_percent;
    });
}

void pdmlab_trace_free(pdmlab_trace* trace) { delete trace; }

pdmlab_status pdmlab_gssa_peak(const pdmlab_config* cfg, int output_i2, int* has_peak,
                               double* omega0_rad_s, double* gain_db) {
    if (null_arg(cfg, "cfg") || null_arg(has_peak, "has_peak") ||
        null_arg(omega0_rad_s, "omega0_rad_s") || null_arg(gain_db, "gain_db"))
        return PDMLAB_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const pdmlab::ExperimentConfig& c = cfg->cfg;
        c.validate();
        const pdmlab::GssaModel model =
            pdmlab::build_gssa(c.circuit, 1.0, 1.0, bode_input_side(c));
        const double ws = c.circuit.omega_s();
        const int n = 400;
        const double lg0 = std::log10(1e-3), lg1 = std::log10(0.5);
        std::vector<double> grid(n);
        for (int i = 0; i < n; ++i)
            grid[i] = ws * std::pow(10.0, lg0 + (lg1 - lg0) * i / (n - 1));
        const pdmlab::BodeData bode = pdmlab::gssa_bode(
            model, grid, output_i2 ? pdmlab::OutputCurrent::i2 : pdmlab::OutputCurrent::i1);
        const pdmlab::PeakResult pk = pdmlab::find_peak(bode);
        *has_peak = pk.has_peak ? 1 : 0;
        *omega0_rad_s = pk.omega0;
        *gain_db = pk.gain_db;
    });
}

} // extern "C"
