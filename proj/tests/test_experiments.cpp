#include "pdmlab/experiments.hpp"

#include "pdmlab/config.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <string>
#include <vector>

using namespace pdmlab;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

using Csv = std::vector<std::vector<std::string>>;

ExperimentConfig cfg_with(std::initializer_list<std::pair<const char*, const char*>> kv) {
    ExperimentConfig cfg = default_config();
    for (const auto& [k, v] : kv)
        apply_override(cfg, k, v);
    return cfg;
}

std::set<std::string> manifest_files(const std::filesystem::path& dir) {
    const Csv rows = testutil::read_csv(dir / "manifest.csv");
    std::set<std::string> names;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 2);
        REQUIRE(rows[i][1] == "1");
        names.insert(rows[i][0]);
    }
    return names;
}

double cell(const Csv& rows, std::size_t r, std::size_t c) { return std::stod(rows[r][c]); }

} // namespace

TEST_CASE("experiment roster") {
    const auto& names = experiment_names();
    REQUIRE(names.size() == 6);
    REQUIRE(names.front() == "dynamic-response");
    REQUIRE(names.back() == "gssa-bode");

    const auto dir = testutil::fresh_dir("exp_unknown");
    REQUIRE_THROWS_MATCHES(run_experiment("warp-drive", default_config(), dir.string()),
                           std::invalid_argument,
                           MessageMatches(ContainsSubstring("unknown experiment") &&
                                          ContainsSubstring("gssa-bode")));
}

TEST_CASE("dynamic response of a ramp profile") {
    const auto dir = testutil::fresh_dir("exp_dyn");
    const ExperimentConfig cfg = cfg_with({{"d", "ramp:0:1:0.001"}});
    run_experiment("dynamic-response", cfg, dir.string());

    const Csv rows = testutil::read_csv(dir / "dynamic_response.csv");
    REQUIRE(rows.at(0) ==
            std::vector<std::string>{"sample", "time_s", "density", "bit", "error"});
    // 601 ramp samples at the 600 kHz modulator clock plus a 512-sample tail
    REQUIRE(rows.size() == 1 + 1113);
    REQUIRE(rows[1][0] == "0");
    REQUIRE(cell(rows, 1, 2) == 0.0);
    REQUIRE(cell(rows, 1113, 2) == 1.0);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double bit = cell(rows, r, 3);
        REQUIRE((bit == 0.0 || bit == 1.0));
        const double err = cell(rows, r, 4);
        REQUIRE(err <= 1e-9);
        REQUIRE(err >= -1.0 - 1e-9);
    }
    REQUIRE(manifest_files(dir) == std::set<std::string>{"dynamic_response.csv"});

    const auto dir2 = testutil::fresh_dir("exp_dyn_bad");
    REQUIRE_THROWS_MATCHES(
        run_experiment("dynamic-response", cfg_with({{"d", "sweep:0:1:0.1"}}), dir2.string()),
        std::invalid_argument, MessageMatches(ContainsSubstring("dynamic-response")));
}

TEST_CASE("shaper comparison bundle") {
    const auto dir = testutil::fresh_dir("exp_cmp");
    run_experiment("ntf-compare", default_config(), dir.string());

    REQUIRE(manifest_files(dir) == std::set<std::string>{"ntf_response.csv", "pole_zero.csv",
                                                         "waveform.csv", "spectrum.csv"});

    const Csv resp = testutil::read_csv(dir / "ntf_response.csv");
    REQUIRE(resp.size() == 1 + 2001);
    REQUIRE(resp[0][0] == "omega_over_ws");
    // the notch frequency itself sits on this grid; the response there is
    // clamped numerical zero while the first-order shaper stays finite
    bool found = false;
    for (std::size_t r = 1; r < resp.size(); ++r) {
        if (std::abs(cell(resp, r, 0) - 0.076) < 1e-12) {
            found = true;
            REQUIRE(cell(resp, r, 2) <= -200.0);
            REQUIRE(cell(resp, r, 1) > -40.0);
        }
    }
    REQUIRE(found);

    const Csv pz = testutil::read_csv(dir / "pole_zero.csv");
    REQUIRE(pz.size() == 1 + 8); // 1 zero + 1 pole + 3 zeros + 3 poles

    const Csv wave = testutil::read_csv(dir / "waveform.csv");
    REQUIRE(wave.size() == 1 + 1024);

    const Csv spec = testutil::read_csv(dir / "spectrum.csv");
    REQUIRE(spec.size() == 1 + 32769); // one-sided bins of a 65536-point record

    REQUIRE_THROWS_AS(
        run_experiment("ntf-compare", cfg_with({{"d", "ramp:0:1:0.001"}}),
                       testutil::fresh_dir("exp_cmp_bad").string()),
        std::invalid_argument);
}

TEST_CASE("ripple sweep emits one row per shaper and operating point") {
    const auto dir = testutil::fresh_dir("exp_sweep");
    const ExperimentConfig cfg =
        cfg_with({{"d", "sweep:0.95:0.99:0.02"}, {"duration_periods", "700"}});
    run_experiment("ripple-sweep", cfg, dir.string());

    const Csv rows = testutil::read_csv(dir / "ripple_sweep.csv");
    REQUIRE(rows.at(0) ==
            std::vector<std::string>{"ntf", "d", "ripple_i1_percent", "ripple_i2_percent",
                                     "env_i1_mean_A", "env_i2_mean_A"});
    REQUIRE(rows.size() == 1 + 6);
    for (std::size_t r = 1; r <= 3; ++r)
        REQUIRE(rows[r][0] == "first");
    for (std::size_t r = 4; r <= 6; ++r)
        REQUIRE(rows[r][0] == "notch");
    // deterministic ordering: d ascends within each shaper block
    REQUIRE(cell(rows, 1, 1) == 0.95);
    REQUIRE(cell(rows, 2, 1) == 0.97);
    REQUIRE(cell(rows, 3, 1) == 0.99);
    REQUIRE(cell(rows, 4, 1) == 0.95);
    for (std::size_t r = 1; r <= 6; ++r) {
        REQUIRE(cell(rows, r, 2) > 0.0);
        REQUIRE(cell(rows, r, 3) > 0.0);
        REQUIRE(cell(rows, r, 4) > 0.0);
        REQUIRE(cell(rows, r, 5) > 0.0);
    }

    // a constant profile degenerates to a single-point sweep
    const auto dir2 = testutil::fresh_dir("exp_sweep_one");
    run_experiment("ripple-sweep", cfg_with({{"d", "0.963"}, {"duration_periods", "700"}}),
                   dir2.string());
    REQUIRE(testutil::read_csv(dir2 / "ripple_sweep.csv").size() == 1 + 2);

    REQUIRE_THROWS_AS(run_experiment("ripple-sweep",
                                     cfg_with({{"d", "sinusoid:0.5:0.5:500"}}),
                                     testutil::fresh_dir("exp_sweep_bad").string()),
                      std::invalid_argument);
}

TEST_CASE("explicit discard_periods drives the ripple window") {
    // 700-cycle run: the default discard leaves 600 cycles. An explicit
    // discard of 250 leaves only 450, below the 500-cycle floor.
    REQUIRE_THROWS_WITH(
        run_experiment("ripple-sweep",
                       cfg_with({{"d", "0.963"},
                                 {"duration_periods", "700"},
                                 {"discard_periods", "250"}}),
                       testutil::fresh_dir("exp_sweep_disc_bad").string()),
        ContainsSubstring("500 cycles"));

    REQUIRE_NOTHROW(run_experiment("ripple-sweep",
                                   cfg_with({{"d", "0.963"},
                                             {"duration_periods", "700"},
                                             {"discard_periods", "200"}}),
                                   testutil::fresh_dir("exp_sweep_disc_ok").string()));
}

TEST_CASE("deviation study covers the ratio triplet") {
    const auto dir = testutil::fresh_dir("exp_dev");
    const ExperimentConfig cfg =
        cfg_with({{"d", "sweep:0.96:1:0.02"}, {"duration_periods", "700"}});
    run_experiment("deviation-study", cfg, dir.string());

    const Csv rows = testutil::read_csv(dir / "deviation_study.csv");
    REQUIRE(rows.at(0) == std::vector<std::string>{"notch_ratio", "d", "ripple_i1_percent",
                                                   "ripple_i2_percent"});
    REQUIRE(rows.size() == 1 + 9);
    std::set<std::string> ratios;
    for (std::size_t r = 1; r < rows.size(); ++r)
        ratios.insert(rows[r][0]);
    REQUIRE(ratios == std::set<std::string>{"0.065", "0.076", "0.085"});
}

TEST_CASE("sinusoid tracking follows the demanded envelope") {
    const auto dir = testutil::fresh_dir("exp_track");
    run_experiment("sinusoid-tracking", default_config(), dir.string());

    const Csv rows = testutil::read_csv(dir / "sinusoid_tracking.csv");
    REQUIRE(rows.at(0) == std::vector<std::string>{"cycle", "time_s", "d", "env_i1_A",
                                                   "env_i2_A", "pred_i1_A", "pred_i2_A"});
    REQUIRE(rows.size() == 1 + 1800); // three 500 Hz modulation periods at 300 kHz

    // past the first modulation period the primary envelope must track the
    // demanded density profile
    const std::size_t c0 = 1 + 600;
    double md = 0.0, me = 0.0;
    std::size_t n = 0;
    for (std::size_t r = c0; r < rows.size(); ++r, ++n) {
        md += cell(rows, r, 2);
        me += cell(rows, r, 3);
    }
    md /= static_cast<double>(n);
    me /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t r = c0; r < rows.size(); ++r) {
        const double a = cell(rows, r, 2) - md;
        const double b = cell(rows, r, 3) - me;
        sab += a * b;
        saa += a * a;
        sbb += b * b;
    }
    const double ncc = sab / std::sqrt(saa * sbb);
    REQUIRE(ncc >= 0.9);

    REQUIRE_THROWS_AS(run_experiment("sinusoid-tracking", cfg_with({{"d", "0.5"}}),
                                     testutil::fresh_dir("exp_track_bad").string()),
                      std::invalid_argument);
}

TEST_CASE("averaged-model bode bundle") {
    const auto dir = testutil::fresh_dir("exp_bode");
    run_experiment("gssa-bode", default_config(), dir.string());

    REQUIRE(manifest_files(dir) == std::set<std::string>{"gssa_bode.csv", "gssa_peaks.csv",
                                                         "spectrum_overlay.csv"});
    const Csv bode = testutil::read_csv(dir / "gssa_bode.csv");
    REQUIRE(bode.size() == 1 + 400);

    const Csv peaks = testutil::read_csv(dir / "gssa_peaks.csv");
    REQUIRE(peaks.size() == 1 + 2);
    REQUIRE(peaks[2][0] == "i2");
    REQUIRE(peaks[2][1] == "1");
    // the envelope resonance sits near half the coupling
    const double w0 = cell(peaks, 2, 4);
    REQUIRE(std::abs(w0 - 0.076) <= 0.05 * 0.076);

    const Csv overlay = testutil::read_csv(dir / "spectrum_overlay.csv");
    REQUIRE(overlay.size() == 1 + 32769);
}

TEST_CASE("identical configs give identical bytes") {
    const auto dir1 = testutil::fresh_dir("exp_rep1");
    const auto dir2 = testutil::fresh_dir("exp_rep2");
    const ExperimentConfig cfg = cfg_with({{"d", "ramp:0:1:0.001"}});
    run_experiment("dynamic-response", cfg, dir1.string());
    run_experiment("dynamic-response", cfg, dir2.string());
    REQUIRE(testutil::read_file(dir1 / "dynamic_response.csv") ==
            testutil::read_file(dir2 / "dynamic_response.csv"));
    REQUIRE(testutil::read_file(dir1 / "manifest.csv") ==
            testutil::read_file(dir2 / "manifest.csv"));

    const auto dir3 = testutil::fresh_dir("exp_rep3");
    const auto dir4 = testutil::fresh_dir("exp_rep4");
    run_experiment("ntf-compare", default_config(), dir3.string());
    run_experiment("ntf-compare", default_config(), dir4.string());
    for (const char* f : {"ntf_response.csv", "pole_zero.csv", "waveform.csv", "spectrum.csv",
                          "manifest.csv"})
        REQUIRE(testutil::read_file(dir3 / f) == testutil::read_file(dir4 / f));
}

TEST_CASE("a config that fails validation is rejected up front") {
    ExperimentConfig cfg = default_config();
    cfg.circuit.k = 1.5;
    REQUIRE_THROWS_AS(
        run_experiment("ntf-compare", cfg, testutil::fresh_dir("exp_badcfg").string()),
        std::invalid_argument);
}
