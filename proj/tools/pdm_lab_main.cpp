// Command-line front end. Talks to the core exclusively through the C API.

#include "pdmlab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

std::string experiment_list() {
    std::string all;
    size_t count = 0;
    pdmlab_experiment_count(&count);
    for (size_t i = 0; i < count; ++i) {
        const char* name = nullptr;
        pdmlab_experiment_name(i, &name);
        if (!all.empty())
            all += ", ";
        all += name;
    }
    return all;
}

int report(pdmlab_status status) {
    if (status == PDMLAB_OK)
        return 0;
    std::fprintf(stderr, "pdm-lab: %s\n", pdmlab_last_error());
    return static_cast<int>(status);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulse-density modulation experiments for resonant wireless power links"};
    app.set_version_flag("--version", pdmlab_version());

    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::string ntf;
    std::string side;
    double notch_ratio = 0.0;

    app.add_option("experiment", experiment, "One of: " + experiment_list())->required();
    app.add_option("--config", config_path, "key = value config file")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory for CSV files")->required();
    app.add_option("--ntf", ntf, "noise shaper: first or notch");
    app.add_option("--notch-ratio", notch_ratio, "notch frequency over switching frequency");
    app.add_option("--side", side, "modulated bridge: primary or secondary");

    CLI11_PARSE(app, argc, argv);

    pdmlab_config* cfg = nullptr;
    pdmlab_status status = config_path.empty() ? pdmlab_config_default(&cfg)
                                               : pdmlab_config_load(config_path.c_str(), &cfg);
    if (status != PDMLAB_OK)
        return report(status);

    if (!ntf.empty())
        status = pdmlab_config_set(cfg, "ntf", ntf.c_str());
    if (status == PDMLAB_OK && app.count("--notch-ratio") > 0)
        status = pdmlab_config_set(cfg, "notch_ratio", std::to_string(notch_ratio).c_str());
    if (status == PDMLAB_OK && !side.empty())
        status = pdmlab_config_set(cfg, "side", side.c_str());
    if (status == PDMLAB_OK)
        status = pdmlab_config_validate(cfg);
    if (status == PDMLAB_OK)
        status = pdmlab_run_experiment(experiment.c_str(), cfg, out_dir.c_str());

    pdmlab_config_free(cfg);
    if (status == PDMLAB_OK)
        std::printf("wrote %s outputs to %s\n", experiment.c_str(), out_dir.c_str());
    return report(status);
}
