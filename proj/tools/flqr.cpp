// flqr: Floquet readout toolkit command line.
//
// Deliberately a thin client of the C API in floquet_readout.h: everything
// the CLI can do, an embedding application can do through the shared
// library.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "floquet_readout.h"

namespace {

int run_subcommand(const std::string& name, const std::string& config, const std::string& out,
                   int jobs, const std::string& oracle) {
    char summary[1024] = {0};
    flqr_status st = flqr_run_command(name.c_str(), config.c_str(), out.c_str(), jobs,
                                      oracle.c_str(), summary, sizeof summary);
    if (st != FLQR_OK) {
        std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(st), flqr_last_error());
        return 1;
    }
    std::printf("%s\n", summary);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floquet quasi-energy spectra, qubit-photon couplings, pointer-state "
                 "trajectories and readout SNR, validated against a Lindblad master-equation "
                 "oracle"};
    app.require_subcommand(1);

    std::string config, out = "out", oracle;
    int jobs = 0;

    struct Sub {
        CLI::App* cmd;
        std::string name;
    };
    std::vector<Sub> subs;
    for (const char* name : {"spectrum", "couplings", "trajectory", "snr", "models"}) {
        CLI::App* cmd = app.add_subcommand(name, std::string("write ") + name + " CSV data");
        cmd->add_option("--config", config, "run configuration file")->required();
        cmd->add_option("--out", out, "output directory")->capture_default_str();
        cmd->add_option("--oracle", oracle, "oracle mode override: off|on|subset")
            ->check(CLI::IsMember({"off", "on", "subset"}));
        cmd->add_option("--jobs", jobs, "worker threads (0: all cores)")->capture_default_str();
        subs.push_back({cmd, name});
    }
    CLI::App* validate = app.add_subcommand("validate", "run the acceptance suite");
    validate->add_option("--jobs", jobs, "worker threads (0: all cores)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        int failed = 0;
        flqr_status st = flqr_validate(jobs > 0 ? jobs : 2, &failed);
        if (st != FLQR_OK) {
            std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(st), flqr_last_error());
            return 1;
        }
        return failed == 0 ? 0 : 1;
    }
    for (const Sub& sub : subs)
        if (sub.cmd->parsed()) return run_subcommand(sub.name, config, out, jobs, oracle);
    return 1;
}
