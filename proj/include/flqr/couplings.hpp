#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "flqr/floquet.hpp"

namespace flqr {

// Per-level longitudinal and dispersive couplings at drive amplitude a_q.
struct LevelCouplings {
    std::vector<int> levels;
    std::vector<double> g_par;   // g_perp * d eps_j / dA
    std::vector<double> chi;     // g_perp^2 * [eps_j'' + eps_j'/A]
    std::vector<double> epsilon; // quasi-energy at a_q
    Eigen::VectorXd bare_energies;
    double a_q = 0.0;
    double fd_step = 0.0;
    double g_perp = 0.0;

    int row_of(int level) const;
};

// Two-level reduction plus the cavity-side rates.
struct ReadoutCouplings {
    double g_par = 0.0;   // (g_par_1 - g_par_0)/2
    double g_bar = 0.0;   // (g_par_1 + g_par_0)/2
    double chi = 0.0;     // (chi_1 - chi_0)/2
    double chi_bar = 0.0; // (chi_1 + chi_0)/2
    double epsilon = 0.0; // (eps_1 - eps_0)/2
    double gamma = 0.0;   // Purcell rate kappa g_perp^2 / (omega_q - omega_r)^2
    double g_perp = 0.0;
    double kappa = 0.0;
    double omega_d = 0.0;
    double omega_r = 0.0;
    double a_q = 0.0;
};

struct DrivePlan {
    double a_q = 0.0;
    double a_r = 0.0;
    double phi = 0.0;
    double omega_d = 0.0;
};

// Finite-difference couplings from a branch-tracked spectrum. The spectrum
// must contain the points a_q + {0, +-h/2, +-h, +-2h}.
LevelCouplings level_couplings(const FloquetSpectrum& spectrum, double g_perp, double a_q,
                               double fd_step);

ReadoutCouplings reduce_two_level(const LevelCouplings& lc, std::pair<int, int> levels,
                                  double g_perp, double kappa, double omega_d, double omega_r);

// Charge-qubit closed forms: chi0 = 2 g_perp^2 omega_q/(omega_q^2-omega_d^2),
// g_par0 = chi0 A_q / (2 g_perp). Returns (g_par0, chi0).
std::pair<double, double> small_drive_couplings(double omega_q, double omega_d, double g_perp,
                                                double a_q);

// Cavity tone canceling the qubit-independent pointer motion:
// A_r = -2 g_bar, phi = 0, omega_d = omega_r + chi_bar.
DrivePlan compensation_tone(const ReadoutCouplings& rc, double omega_r);

// Transmon perturbative reference (counter-rotating terms kept unless rwa).
// Returns (g_par0, chi0).
std::pair<double, double> transmon_small_drive_reference(double e_c, double n01_abs,
                                                         double g_perp, double a_q,
                                                         double omega_q, double omega_d,
                                                         bool rwa = false);

// Stencil offsets (in units of fd_step) that level_couplings expects the
// tracked grid to contain around a_q.
std::vector<double> coupling_stencil_offsets();

// Amplitude grid containing 0, a tracking ramp and the derivative stencils
// of every requested a_q.
std::vector<double> coupling_grid(const SystemModel& model, const FloquetConfig& cfg,
                                  std::span<const double> a_q_values, double fd_step);

// Track once, differentiate at one drive point.
LevelCouplings couplings_at(const SystemModel& model, const FloquetConfig& cfg, double g_perp,
                            double a_q, double fd_step);

// Track once over a shared grid, differentiate at every drive point.
std::vector<LevelCouplings> sweep_couplings(const SystemModel& model, const FloquetConfig& cfg,
                                            double g_perp, std::span<const double> a_q_values,
                                            double fd_step);

} // namespace flqr
