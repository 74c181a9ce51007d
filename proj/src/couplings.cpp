#include "flqr/couplings.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "flqr/error.hpp"

namespace flqr {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct Derivatives {
    double d1, d2;
};

// 5-point central stencils at step h with one Richardson halving; returns
// the half-step values after checking the two estimates agree.
Derivatives stencil_derivatives(const std::array<double, 7>& e, double h, double scale,
                                int level) {
    // e = {-2h, -h, -h/2, 0, +h/2, +h, +2h}
    const double d1_h = (-e[6] + 8.0 * e[5] - 8.0 * e[1] + e[0]) / (12.0 * h);
    const double d1_h2 = (-e[5] + 8.0 * e[4] - 8.0 * e[2] + e[1]) / (6.0 * h);
    const double d2_h = (-e[6] + 16.0 * e[5] - 30.0 * e[3] + 16.0 * e[1] - e[0]) / (12.0 * h * h);
    const double d2_h2 = (-e[5] + 16.0 * e[4] - 30.0 * e[3] + 16.0 * e[2] - e[1]) / (3.0 * h * h);

    const double floor1 = 1e-9 * scale / h;
    const double floor2 = 1e-9 * scale / (h * h);
    auto check = [&](double a, double b, double floor, const char* what) {
        const double denom = std::max({std::abs(a), std::abs(b), floor});
        require(std::abs(a - b) <= 1e-4 * denom, ErrorCode::convergence,
                std::string("non-converged ") + what + " derivative for level " +
                    std::to_string(level) + " (Richardson disagreement " +
                    sci(std::abs(a - b) / denom) + ")");
    };
    check(d1_h, d1_h2, floor1, "first");
    check(d2_h, d2_h2, floor2, "second");
    return {d1_h2, d2_h2};
}

} // namespace

std::vector<double> coupling_stencil_offsets() { return {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}; }

std::vector<double> coupling_grid(const SystemModel& model, const FloquetConfig& cfg,
                                  std::span<const double> a_q_values, double fd_step) {
    require(fd_step > 0.0, ErrorCode::invalid_argument, "fd_step must be positive");
    std::vector<double> grid{0.0};
    double a_max = 0.0;
    for (double a : a_q_values) {
        require(a >= 0.0, ErrorCode::invalid_argument, "a_q must be nonnegative");
        for (double off : coupling_stencil_offsets()) grid.push_back(a + off * fd_step);
        a_max = std::max(a_max, a);
    }
    // tracking ramp from zero out to the largest stencil point
    const double qn = std::max(model.charge_norm(), 1e-300);
    const double step = 0.02 * std::min(cfg.omega_d, model.omega_q()) / qn;
    const int n_ramp = std::max(8, static_cast<int>(std::ceil(a_max / std::max(step, 1e-300))));
    for (int k = 1; k < n_ramp; ++k) grid.push_back(a_max * k / n_ramp);
    std::sort(grid.begin(), grid.end());
    // merge only roundoff-level duplicates so every stencil point survives
    // and stays findable by FloquetSpectrum::point_index
    const double merge_tol = 1e-14 * std::max(1.0, a_max);
    std::vector<double> out;
    for (double a : grid)
        if (out.empty() || a - out.back() > merge_tol) out.push_back(a);
    return out;
}

LevelCouplings couplings_at(const SystemModel& model, const FloquetConfig& cfg, double g_perp,
                            double a_q, double fd_step) {
    const std::vector<double> aq{a_q};
    std::vector<double> grid = coupling_grid(model, cfg, aq, fd_step);
    FloquetSpectrum sp = track_branches(model, grid, cfg);
    return level_couplings(sp, g_perp, a_q, fd_step);
}

std::vector<LevelCouplings> sweep_couplings(const SystemModel& model, const FloquetConfig& cfg,
                                            double g_perp, std::span<const double> a_q_values,
                                            double fd_step) {
    std::vector<double> grid = coupling_grid(model, cfg, a_q_values, fd_step);
    FloquetSpectrum sp = track_branches(model, grid, cfg);
    std::vector<LevelCouplings> out;
    out.reserve(a_q_values.size());
    for (double a : a_q_values) out.push_back(level_couplings(sp, g_perp, a, fd_step));
    return out;
}

int LevelCouplings::row_of(int level) const {
    for (size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == level) return static_cast<int>(i);
    return -1;
}

LevelCouplings level_couplings(const FloquetSpectrum& spectrum, double g_perp, double a_q,
                               double fd_step) {
    require(fd_step > 0.0, ErrorCode::invalid_argument, "fd_step must be positive");
    require(a_q >= 0.0, ErrorCode::invalid_argument,
            "a_q must be nonnegative (drive phase is absorbed by convention)");

    std::array<int, 7> cols{};
    {
        int k = 0;
        for (double off : coupling_stencil_offsets()) {
            const double a = a_q + off * fd_step;
            cols[k] = spectrum.point_index(a);
            require(cols[k] >= 0, ErrorCode::invalid_argument,
                    "spectrum grid does not cover stencil point A = " + std::to_string(a));
            ++k;
        }
    }

    // derivative extraction is meaningless when the drive sits on the
    // one-photon qubit resonance and the logical branches hybridize at O(A)
    if (spectrum.level_row(0) >= 0 && spectrum.level_row(1) >= 0) {
        const double e0 = spectrum.quasi_energies(spectrum.level_row(0), cols[3]);
        const double e1 = spectrum.quasi_energies(spectrum.level_row(1), cols[3]);
        const double bare = spectrum.bare_energies[spectrum.level_row(1)] -
                            spectrum.bare_energies[spectrum.level_row(0)];
        const double limit = 10.0 * fd_step * spectrum.slope_bound;
        const double dist =
            std::min(std::abs(bare - spectrum.omega_d), std::abs(e1 - e0 - spectrum.omega_d));
        require(dist >= limit, ErrorCode::near_resonance,
                "drive within " + sci(dist) + " of the qubit transition; below the refusal limit " +
                    sci(limit));
    }

    const double a_switch = 10.0 * fd_step;
    LevelCouplings lc;
    lc.levels = spectrum.levels;
    lc.bare_energies = spectrum.bare_energies;
    lc.a_q = a_q;
    lc.fd_step = fd_step;
    lc.g_perp = g_perp;
    const int m = static_cast<int>(spectrum.levels.size());
    lc.g_par.resize(m);
    lc.chi.resize(m);
    lc.epsilon.resize(m);
    for (int i = 0; i < m; ++i) {
        std::array<double, 7> e{};
        double scale = spectrum.omega_d;
        for (int k = 0; k < 7; ++k) {
            e[k] = spectrum.quasi_energies(i, cols[k]);
            scale = std::max(scale, std::abs(e[k]));
        }
        Derivatives d = stencil_derivatives(e, fd_step, scale, spectrum.levels[i]);
        lc.epsilon[i] = e[3];
        lc.g_par[i] = g_perp * d.d1;
        // the 1/|A| term tends to eps'' as A -> 0; switch to that limit at
        // small drive to avoid the 0/0
        const double radial = (a_q < a_switch) ? d.d2 : d.d1 / a_q;
        lc.chi[i] = g_perp * g_perp * (d.d2 + radial);
    }
    return lc;
}

ReadoutCouplings reduce_two_level(const LevelCouplings& lc, std::pair<int, int> levels,
                                  double g_perp, double kappa, double omega_d, double omega_r) {
    const int r0 = lc.row_of(levels.first);
    const int r1 = lc.row_of(levels.second);
    require(r0 >= 0 && r1 >= 0, ErrorCode::invalid_argument,
            "reduce_two_level: requested levels not present in the coupling set");
    ReadoutCouplings rc;
    rc.g_par = 0.5 * (lc.g_par[r1] - lc.g_par[r0]);
    rc.g_bar = 0.5 * (lc.g_par[r1] + lc.g_par[r0]);
    rc.chi = 0.5 * (lc.chi[r1] - lc.chi[r0]);
    rc.chi_bar = 0.5 * (lc.chi[r1] + lc.chi[r0]);
    rc.epsilon = 0.5 * (lc.epsilon[r1] - lc.epsilon[r0]);
    const double omega_q = lc.bare_energies[r1] - lc.bare_energies[r0]; // bare splitting
    const double det = omega_q - omega_r;
    require(det != 0.0, ErrorCode::near_resonance,
            "Purcell rate diverges at omega_r = omega_q");
    rc.gamma = kappa * g_perp * g_perp / (det * det);
    rc.g_perp = g_perp;
    rc.kappa = kappa;
    rc.omega_d = omega_d;
    rc.omega_r = omega_r;
    rc.a_q = lc.a_q;
    return rc;
}

std::pair<double, double> small_drive_couplings(double omega_q, double omega_d, double g_perp,
                                                double a_q) {
    require(omega_q > 0.0 && omega_d > 0.0, ErrorCode::invalid_argument,
            "small_drive_couplings: frequencies must be positive");
    require(std::abs(omega_q - omega_d) > 1e-12 * omega_q, ErrorCode::near_resonance,
            "small_drive_couplings: omega_d = omega_q is resonant");
    const double chi0 = 2.0 * g_perp * g_perp * omega_q / (omega_q * omega_q - omega_d * omega_d);
    const double g0 = chi0 * a_q / (2.0 * g_perp);
    return {g0, chi0};
}

DrivePlan compensation_tone(const ReadoutCouplings& rc, double omega_r) {
    DrivePlan plan;
    plan.a_q = rc.a_q;
    plan.a_r = -2.0 * rc.g_bar;
    plan.phi = 0.0;
    plan.omega_d = omega_r + rc.chi_bar;
    return plan;
}

std::pair<double, double> transmon_small_drive_reference(double e_c, double n01_abs,
                                                         double g_perp, double a_q,
                                                         double omega_q, double omega_d,
                                                         bool rwa) {
    const double d01 = omega_q - omega_d;
    const double d12 = (omega_q - e_c) - omega_d; // 1->2 transition detuning
    require(std::abs(d01) > 1e-12 * omega_q && std::abs(d12) > 1e-12 * omega_q,
            ErrorCode::near_resonance,
            "transmon_small_drive_reference: drive resonant with a transition");
    const double n2 = n01_abs * n01_abs;
    double chi0;
    if (rwa) {
        chi0 = -g_perp * g_perp * n2 * e_c / (d01 * (omega_q - omega_d - e_c));
    } else {
        chi0 = g_perp * g_perp * n2 *
               (1.0 / d01 + 1.0 / (omega_q + omega_d) - 1.0 / d12 -
                1.0 / ((omega_q - e_c) + omega_d));
    }
    const double g0 = chi0 * a_q / (2.0 * g_perp);
    return {g0, chi0};
}

} // namespace flqr
