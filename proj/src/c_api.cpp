#include "floquet_readout.h"

#include <cstring>
#include <iostream>
#include <string>

#include "flqr/cavity.hpp"
#include "flqr/couplings.hpp"
#include "flqr/error.hpp"
#include "flqr/floquet.hpp"
#include "flqr/lindblad.hpp"
#include "flqr/runner.hpp"
#include "flqr/system_model.hpp"
#include "flqr/validate.hpp"

namespace {

thread_local std::string g_last_error;

flqr_status to_status(flqr::ErrorCode code) { return static_cast<flqr_status>(code); }

template <typename Fn>
flqr_status guarded(Fn&& fn) {
    try {
        fn();
        return FLQR_OK;
    } catch (const flqr::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FLQR_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return FLQR_ERR_INTERNAL;
    }
}

flqr::ReadoutCouplings unpack(const flqr_couplings& c) {
    flqr::ReadoutCouplings rc;
    rc.g_par = c.g_par;
    rc.g_bar = c.g_bar;
    rc.chi = c.chi;
    rc.chi_bar = c.chi_bar;
    rc.epsilon = c.epsilon;
    rc.gamma = c.gamma;
    rc.g_perp = c.g_perp;
    rc.kappa = c.kappa;
    rc.omega_d = c.omega_d;
    rc.omega_r = c.omega_r;
    rc.a_q = c.a_q;
    return rc;
}

flqr::DrivePlan unpack(const flqr_drive_plan& p) { return {p.a_q, p.a_r, p.phi, p.omega_d}; }

void check_ptr(const void* p, const char* what) {
    flqr::require(p != nullptr, flqr::ErrorCode::invalid_argument,
                  std::string(what) + " must not be null");
}

} // namespace

struct flqr_model {
    flqr::SystemModel model;
};

struct flqr_spectrum {
    flqr::FloquetSpectrum spectrum;
};

extern "C" {

const char* flqr_version(void) { return "1.0.0"; }

const char* flqr_last_error(void) { return g_last_error.c_str(); }

flqr_status flqr_model_charge_qubit(double omega_q, flqr_model** out) {
    return guarded([&] {
        check_ptr(out, "out");
        *out = new flqr_model{flqr::build_charge_qubit(omega_q)};
    });
}

flqr_status flqr_model_flopping(double delta, double epsilon0, double t_sc, double t_sf,
                                flqr_model** out) {
    return guarded([&] {
        check_ptr(out, "out");
        *out = new flqr_model{flqr::build_flopping_mode({delta, epsilon0, t_sc, t_sf})};
    });
}

flqr_status flqr_model_transmon(double e_c_over_e_j, double flux, int n_max, int levels,
                                flqr_model** out) {
    return guarded([&] {
        check_ptr(out, "out");
        flqr::TransmonParams p;
        p.e_c = e_c_over_e_j;
        p.flux = flux;
        if (n_max > 0) p.n_max = n_max;
        if (levels > 0) p.levels = levels;
        *out = new flqr_model{flqr::build_transmon(p)};
    });
}

flqr_status flqr_model_fluxonium(double e_c_over_e_j, double e_l_over_e_j, double flux,
                                 int basis_size, int levels, flqr_model** out) {
    return guarded([&] {
        check_ptr(out, "out");
        flqr::FluxoniumParams p;
        p.e_c = e_c_over_e_j;
        p.e_l = e_l_over_e_j;
        p.flux = flux;
        if (basis_size > 0) p.basis_size = basis_size;
        if (levels > 0) p.levels = levels;
        *out = new flqr_model{flqr::build_fluxonium(p)};
    });
}

void flqr_model_free(flqr_model* model) { delete model; }

int flqr_model_dim(const flqr_model* model) { return model ? model->model.dim() : 0; }

double flqr_model_energy(const flqr_model* model, int level) {
    if (!model || level < 0 || level >= model->model.dim()) return 0.0;
    return model->model.energies[level];
}

flqr_status flqr_model_charge_element(const flqr_model* model, int i, int j, double* re,
                                      double* im) {
    return guarded([&] {
        check_ptr(model, "model");
        check_ptr(re, "re");
        check_ptr(im, "im");
        flqr::require(i >= 0 && i < model->model.dim() && j >= 0 && j < model->model.dim(),
                      flqr::ErrorCode::invalid_argument, "matrix element index out of range");
        const std::complex<double> q = model->model.charge_op(i, j);
        *re = q.real();
        *im = q.imag();
    });
}

flqr_status flqr_spectrum_track(const flqr_model* model, double omega_d, int n_rep,
                                const double* a_grid, size_t n_points, flqr_spectrum** out) {
    return guarded([&] {
        check_ptr(model, "model");
        check_ptr(a_grid, "a_grid");
        check_ptr(out, "out");
        flqr::FloquetConfig cfg;
        cfg.omega_d = omega_d;
        cfg.n_rep = n_rep;
        std::span<const double> grid(a_grid, n_points);
        *out = new flqr_spectrum{flqr::track_branches(model->model, grid, cfg)};
    });
}

void flqr_spectrum_free(flqr_spectrum* spectrum) { delete spectrum; }

flqr_status flqr_spectrum_quasi_energy(const flqr_spectrum* spectrum, int level, double a,
                                       double* out) {
    return guarded([&] {
        check_ptr(spectrum, "spectrum");
        check_ptr(out, "out");
        *out = spectrum->spectrum.quasi_energy(level, a);
    });
}

flqr_status flqr_dressed_polarization(const flqr_model* model, double omega_d, int n_rep,
                                      double a, int bare_state, double* out) {
    return guarded([&] {
        check_ptr(model, "model");
        check_ptr(out, "out");
        flqr::FloquetConfig cfg;
        cfg.omega_d = omega_d;
        cfg.n_rep = n_rep;
        *out = flqr::dressed_initial_polarization(model->model, a, cfg, bare_state);
    });
}

flqr_status flqr_couplings_compute(const flqr_model* model, double omega_d, double a_q,
                                   double g_perp, double kappa, double omega_r, double fd_step,
                                   int n_rep, flqr_couplings* out) {
    return guarded([&] {
        check_ptr(model, "model");
        check_ptr(out, "out");
        flqr::FloquetConfig cfg;
        cfg.omega_d = omega_d;
        cfg.n_rep = n_rep;
        flqr::LevelCouplings lc =
            flqr::couplings_at(model->model, cfg, g_perp, a_q, fd_step);
        flqr::ReadoutCouplings rc =
            flqr::reduce_two_level(lc, {0, 1}, g_perp, kappa, omega_d, omega_r);
        *out = {rc.g_par, rc.g_bar,  rc.chi,   rc.chi_bar, rc.epsilon, rc.gamma,
                rc.g_perp, rc.kappa, rc.omega_d, rc.omega_r, rc.a_q};
    });
}

flqr_status flqr_compensation_tone(const flqr_couplings* couplings, double omega_r,
                                   flqr_drive_plan* out) {
    return guarded([&] {
        check_ptr(couplings, "couplings");
        check_ptr(out, "out");
        flqr::DrivePlan plan = flqr::compensation_tone(unpack(*couplings), omega_r);
        *out = {plan.a_q, plan.a_r, plan.phi, plan.omega_d};
    });
}

flqr_status flqr_small_drive_couplings(double omega_q, double omega_d, double g_perp, double a_q,
                                       double* g_par0, double* chi0) {
    return guarded([&] {
        check_ptr(g_par0, "g_par0");
        check_ptr(chi0, "chi0");
        auto [g0, x0] = flqr::small_drive_couplings(omega_q, omega_d, g_perp, a_q);
        *g_par0 = g0;
        *chi0 = x0;
    });
}

flqr_status flqr_trajectory_analytic(const flqr_couplings* couplings, const flqr_drive_plan* plan,
                                     double sigma_z0, double kappa, const double* t, size_t n,
                                     double* re_a, double* im_a) {
    return guarded([&] {
        check_ptr(couplings, "couplings");
        check_ptr(plan, "plan");
        check_ptr(t, "t");
        check_ptr(re_a, "re_a");
        check_ptr(im_a, "im_a");
        flqr::TrajectoryParams p;
        p.rc = unpack(*couplings);
        p.plan = unpack(*plan);
        p.sigma_z0 = sigma_z0;
        p.kappa = kappa;
        p.t_grid.assign(t, t + n);
        flqr::Trajectory tr = flqr::analytic_trajectory(p);
        for (size_t k = 0; k < n; ++k) {
            re_a[k] = tr.a[k].real();
            im_a[k] = tr.a[k].imag();
        }
    });
}

flqr_status flqr_steady_state_pointer(const flqr_couplings* couplings,
                                      const flqr_drive_plan* plan, double sigma_z, double* re_a,
                                      double* im_a) {
    return guarded([&] {
        check_ptr(couplings, "couplings");
        check_ptr(plan, "plan");
        check_ptr(re_a, "re_a");
        check_ptr(im_a, "im_a");
        const std::complex<double> ss =
            flqr::steady_state_pointer(unpack(*couplings), unpack(*plan), sigma_z);
        *re_a = ss.real();
        *im_a = ss.imag();
    });
}

flqr_status flqr_snr(const double* t, const double* re_up, const double* im_up,
                     const double* re_dn, const double* im_dn, size_t n, double kappa,
                     double* snr_out) {
    return guarded([&] {
        check_ptr(t, "t");
        check_ptr(re_up, "re_up");
        check_ptr(im_up, "im_up");
        check_ptr(re_dn, "re_dn");
        check_ptr(im_dn, "im_dn");
        check_ptr(snr_out, "snr_out");
        flqr::Trajectory up, dn;
        up.times.assign(t, t + n);
        dn.times = up.times;
        up.a.resize(n);
        dn.a.resize(n);
        for (size_t k = 0; k < n; ++k) {
            up.a[k] = {re_up[k], im_up[k]};
            dn.a[k] = {re_dn[k], im_dn[k]};
        }
        flqr::SnrCurve s = flqr::snr(up, dn, kappa);
        for (size_t k = 0; k < n; ++k) snr_out[k] = s.snr[k];
    });
}

flqr_status flqr_simulate(const flqr_model* model, double g_perp, double omega_r, double kappa,
                          const flqr_drive_plan* plan, int initial_level, const double* t,
                          size_t n, const flqr_sim_config* config, double* re_a, double* im_a,
                          double* sigma_z, double* photon) {
    return guarded([&] {
        check_ptr(model, "model");
        check_ptr(plan, "plan");
        check_ptr(t, "t");
        check_ptr(re_a, "re_a");
        check_ptr(im_a, "im_a");
        flqr::SimConfig cfg;
        if (config) {
            cfg.fock_dim = config->fock_dim;
            cfg.dt = config->dt;
            cfg.frame = config->lab_frame ? flqr::Frame::lab : flqr::Frame::rotating;
            cfg.drop_counter_rotating_cavity_drive = !config->keep_counter_rotating_drive;
        }
        std::span<const double> grid(t, n);
        flqr::SimResult r = flqr::simulate(model->model, g_perp, omega_r, kappa, unpack(*plan),
                                           initial_level, grid, cfg);
        for (size_t k = 0; k < n; ++k) {
            re_a[k] = r.expect_a[k].real();
            im_a[k] = r.expect_a[k].imag();
            if (sigma_z) sigma_z[k] = r.sigma_z(static_cast<int>(k));
            if (photon) photon[k] = r.photon_number[k];
        }
    });
}

flqr_status flqr_run_command(const char* subcommand, const char* config_path, const char* out_dir,
                             int jobs, const char* oracle_mode, char* summary,
                             size_t summary_len) {
    return guarded([&] {
        check_ptr(subcommand, "subcommand");
        check_ptr(config_path, "config_path");
        const std::string text =
            flqr::run_command(subcommand, config_path, out_dir ? out_dir : "", jobs,
                              oracle_mode ? oracle_mode : "");
        if (summary && summary_len > 0) {
            std::strncpy(summary, text.c_str(), summary_len - 1);
            summary[summary_len - 1] = '\0';
        }
    });
}

flqr_status flqr_validate(int jobs, int* n_failed) {
    return guarded([&] {
        std::vector<flqr::CriterionResult> results = flqr::validate_all(jobs, &std::cout);
        if (n_failed) *n_failed = flqr::count_failures(results);
    });
}

} // extern "C"
