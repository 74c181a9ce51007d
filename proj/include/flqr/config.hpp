#pragma once

#include <string>
#include <vector>

#include "flqr/floquet.hpp"
#include "flqr/lindblad.hpp"
#include "flqr/system_model.hpp"

namespace flqr {

// Flat-sectioned key = value run configuration. Units are explicit in the
// key names; frequencies may be given absolute (model energy unit) or as
// *_over_omega_q ratios resolved against the built model.
struct RunConfig {
    std::string device;
    SystemModel model;

    // resonator
    double omega_r = 0.0;
    double kappa = 0.0;
    double g_perp = 0.0;

    // drive
    double a_q = 0.0;
    double omega_d = 0.0; // defaults to omega_r
    bool compensation = false;
    bool dispersive = false;
    bool a_r_set = false;
    double a_r = 0.0;
    bool dressed_sigma_z0 = true; // false: raw +-1 initial polarization

    // floquet engine
    int n_rep = 41;
    double fd_step = 1e-4;
    double convergence_tol = 1e-6;
    int track_levels = 0; // 0: all model levels
    double ramp_points = 48;

    // spectrum command
    double spectrum_a_max = 0.0;
    int spectrum_points = 121;
    bool spectrum_static_column = false;

    // sweep axes
    std::vector<double> sweep_a_q;
    std::vector<double> sweep_omega_r;

    // output
    double t_max_kappa = 5.0; // trajectory window in units of 1/kappa
    int t_points = 800;
    double snr_time_kappa = 0.5; // SNR evaluation time t* in units of 1/kappa

    // oracle
    int oracle_fock = 30;
    int oracle_levels = 0; // 0: all model levels
    Frame oracle_frame = Frame::rotating;
    bool oracle_drop_cr = true;
    int oracle_subset_stride = 8; // every k-th grid point in subset mode
    std::string oracle_mode = "off";

    FloquetConfig floquet_config(double omega_d_value) const;
    SimConfig sim_config() const;
    SystemModel oracle_model() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

} // namespace flqr
