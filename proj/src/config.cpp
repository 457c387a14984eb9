#include "pdmlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace pdmlab {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void require(bool ok, const std::string& key, const std::string& constraint, double got) {
    if (!ok)
        fail("key \"" + key + "\" violates " + constraint + " (got " + fmt(got) + ")");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next - pos)));
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    return parts;
}

DProfile parse_d_profile(const std::string& value) {
    DProfile p;
    if (value.find(':') == std::string::npos) {
        p.kind = DProfile::Kind::constant;
        p.value = parse_si_value(value, "d");
        return p;
    }
    const std::vector<std::string> parts = split(value, ':');
    const std::string& name = parts[0];
    auto arg = [&](std::size_t i) { return parse_si_value(parts[i], "d"); };
    if (name == "sweep") {
        if (parts.size() != 4)
            fail("key \"d\": sweep takes start:stop:step, got \"" + value + "\"");
        p.kind = DProfile::Kind::sweep;
        p.start = arg(1);
        p.stop = arg(2);
        p.step = arg(3);
    } else if (name == "sinusoid") {
        if (parts.size() != 4)
            fail("key \"d\": sinusoid takes offset:amplitude:frequency_hz, got \"" + value + "\"");
        p.kind = DProfile::Kind::sinusoid;
        p.offset = arg(1);
        p.amplitude = arg(2);
        p.frequency = arg(3);
    } else if (name == "ramp") {
        if (parts.size() != 4)
            fail("key \"d\": ramp takes start:stop:duration_s, got \"" + value + "\"");
        p.kind = DProfile::Kind::ramp;
        p.start = arg(1);
        p.stop = arg(2);
        p.duration = arg(3);
    } else {
        fail("key \"d\": unknown profile \"" + name + "\" (constant, sweep, sinusoid, ramp)");
    }
    return p;
}

long long parse_integer(const std::string& text, const std::string& key) {
    const double v = parse_si_value(text, key);
    const long long n = std::llround(v);
    if (std::abs(v - static_cast<double>(n)) > 1e-9)
        fail("key \"" + key + "\" expects an integer, got \"" + text + "\"");
    return n;
}

} // namespace

double parse_si_value(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    if (t.empty())
        fail("key \"" + key + "\" has an empty value");
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first)
        fail("key \"" + key + "\": cannot parse number from \"" + t + "\"");
    if (ptr < last) {
        if (ptr + 1 != last)
            fail("key \"" + key + "\": trailing characters after number in \"" + t + "\"");
        double scale = 0.0;
        switch (*ptr) {
        case 'p': scale = 1e-12; break;
        case 'n': scale = 1e-9; break;
        case 'u': scale = 1e-6; break;
        case 'm': scale = 1e-3; break;
        case 'k': scale = 1e3; break;
        case 'M': scale = 1e6; break;
        case 'G': scale = 1e9; break;
        default:
            fail("key \"" + key + "\": unknown suffix '" + std::string(1, *ptr) +
                 "' in \"" + t + "\" (p n u m k M G)");
        }
        v *= scale;
    }
    return v;
}

std::vector<double> DProfile::sweep_points() const {
    if (kind != Kind::sweep)
        throw std::logic_error("DProfile::sweep_points on a non-sweep profile");
    std::vector<double> pts;
    // Half-step slack so stop lands on the grid despite rounding.
    for (double d = start; d <= stop + step * 0.5; d += step)
        pts.push_back(std::min(d, stop));
    return pts;
}

std::vector<double> DProfile::samples(double sample_rate, std::size_t n) const {
    std::vector<double> out(n);
    switch (kind) {
    case Kind::constant:
        std::fill(out.begin(), out.end(), value);
        break;
    case Kind::sinusoid:
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sample_rate;
            out[i] = offset + amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
        }
        break;
    case Kind::ramp: {
        const std::size_t m = ramp_samples(sample_rate);
        for (std::size_t i = 0; i < n; ++i) {
            if (i + 1 >= m)
                out[i] = stop;
            else
                out[i] = start + (stop - start) * static_cast<double>(i) /
                                     static_cast<double>(m - 1);
        }
        break;
    }
    case Kind::sweep:
        throw std::logic_error("DProfile::samples on a sweep profile");
    }
    return out;
}

std::size_t DProfile::ramp_samples(double sample_rate) const {
    return static_cast<std::size_t>(std::llround(duration * sample_rate)) + 1;
}

void DProfile::validate() const {
    auto unit = [&](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0))
            fail(std::string("key \"d\": ") + what + " must lie in [0, 1] (got " + fmt(v) + ")");
    };
    switch (kind) {
    case Kind::constant:
        unit(value, "the density");
        break;
    case Kind::sweep:
        unit(start, "sweep start");
        unit(stop, "sweep stop");
        require(step > 0.0, "d", "sweep step > 0", step);
        require(start <= stop, "d", "sweep start <= stop", start);
        break;
    case Kind::sinusoid:
        unit(offset - std::abs(amplitude), "the sinusoid minimum");
        unit(offset + std::abs(amplitude), "the sinusoid maximum");
        require(frequency > 0.0, "d", "sinusoid frequency > 0", frequency);
        break;
    case Kind::ramp:
        unit(start, "ramp start");
        unit(stop, "ramp stop");
        require(duration > 0.0, "d", "ramp duration > 0", duration);
        break;
    }
}

NtfSpec ExperimentConfig::make_ntf() const {
    return ntf_kind == NtfKind::first_order ? ntf_first_order()
                                            : ntf_notch(notch_ratio, pole_radius);
}

void ExperimentConfig::validate() const {
    circuit.validate();
    if (ntf_kind == NtfKind::notch) {
        require(notch_ratio > 0.0 && notch_ratio < 1.0, "notch_ratio", "0 < notch_ratio < 1",
                notch_ratio);
        require(pole_radius > 0.0 && pole_radius < 1.0, "pole_radius", "0 < pole_radius < 1",
                pole_radius);
    } else if (is_explicit("notch_ratio")) {
        fail("key \"notch_ratio\" is only meaningful with ntf = notch");
    }
    d_profile.validate();
    require(sim.steps_per_period >= 64 && sim.steps_per_period % 2 == 0, "steps_per_period",
            "an even value >= 64", sim.steps_per_period);
    require(sim.duration_periods >= 0, "duration_periods", "duration_periods >= 0",
            sim.duration_periods);
    require(sim.transient_discard_periods >= 0, "discard_periods", "discard_periods >= 0",
            sim.transient_discard_periods);
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.circuit = reference_params();
    return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto num = [&] { return parse_si_value(value, key); };
    if (key == "L1")
        cfg.circuit.L1 = num();
    else if (key == "L2")
        cfg.circuit.L2 = num();
    else if (key == "C1")
        cfg.circuit.C1 = num();
    else if (key == "C2")
        cfg.circuit.C2 = num();
    else if (key == "R1")
        cfg.circuit.R1 = num();
    else if (key == "R2")
        cfg.circuit.R2 = num();
    else if (key == "k")
        cfg.circuit.k = num();
    else if (key == "Vg")
        cfg.circuit.Vg = num();
    else if (key == "Vo")
        cfg.circuit.Vo = num();
    else if (key == "fs")
        cfg.circuit.fs = num();
    else if (key == "ntf") {
        const std::string v = trim(value);
        if (v == "first")
            cfg.ntf_kind = NtfKind::first_order;
        else if (v == "notch")
            cfg.ntf_kind = NtfKind::notch;
        else
            fail("key \"ntf\" must be first or notch, got \"" + v + "\"");
    } else if (key == "notch_ratio")
        cfg.notch_ratio = num();
    else if (key == "pole_radius")
        cfg.pole_radius = num();
    else if (key == "side") {
        const std::string v = trim(value);
        if (v == "primary")
            cfg.side = Side::primary;
        else if (v == "secondary")
            cfg.side = Side::secondary;
        else
            fail("key \"side\" must be primary or secondary, got \"" + v + "\"");
    } else if (key == "d")
        cfg.d_profile = parse_d_profile(trim(value));
    else if (key == "steps_per_period")
        cfg.sim.steps_per_period = static_cast<int>(parse_integer(value, key));
    else if (key == "duration_periods")
        cfg.sim.duration_periods = static_cast<int>(parse_integer(value, key));
    else if (key == "discard_periods")
        cfg.sim.transient_discard_periods = static_cast<int>(parse_integer(value, key));
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_integer(value, key));
    else
        fail("unknown key \"" + key + "\"");
    cfg.explicit_keys.insert(key);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot read \"" + path + "\"");
    ExperimentConfig cfg = default_config();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty())
            continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            fail("line " + std::to_string(lineno) + ": expected key = value, got \"" +
                 stripped + "\"");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            fail("line " + std::to_string(lineno) + ": empty key");
        try {
            apply_override(cfg, key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string(e.what()) + " (line " +
                                        std::to_string(lineno) + ")");
        }
    }
    cfg.validate();
    return cfg;
}

} // namespace pdmlab
