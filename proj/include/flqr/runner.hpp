#pragma once

#include <string>

#include "flqr/cavity.hpp"
#include "flqr/config.hpp"

namespace flqr {

// One resolved readout operating point: couplings, drive plan and the
// dressed initial polarizations of the two logical states.
struct PointSolution {
    ReadoutCouplings rc;
    DrivePlan plan;
    double s0_up = 1.0;
    double s0_dn = -1.0;
};

PointSolution solve_point(const RunConfig& cfg, double omega_d, double a_q, bool compensation);

// Subcommand entry points; each writes CSV files under out_dir and returns
// a one-line summary. oracle_mode overrides the config when nonempty.
struct RunContext {
    RunConfig cfg;
    std::string out_dir;
    int jobs = 1;
    std::string oracle_mode;
};

std::string cmd_spectrum(const RunContext& ctx);
std::string cmd_couplings(const RunContext& ctx);
std::string cmd_trajectory(const RunContext& ctx);
std::string cmd_snr(const RunContext& ctx);
std::string cmd_models(const RunContext& ctx);

// Dispatch by subcommand name (spectrum|couplings|trajectory|snr|models).
std::string run_command(const std::string& name, const std::string& config_path,
                        const std::string& out_dir, int jobs, const std::string& oracle_mode);

} // namespace flqr
