#include "flqr/cavity.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "flqr/error.hpp"

namespace flqr {

using cd = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::Vector2cd;

namespace {

constexpr cd kI{0.0, 1.0};

// (e^{mu t} - 1)/mu, series-safe
cd psi1(cd mu, double t) {
    if (std::abs(mu) * t < 1e-6)
        return t * (1.0 + mu * t / 2.0 + mu * mu * t * t / 6.0);
    return (std::exp(mu * t) - 1.0) / mu;
}

// int_0^t tau e^{mu tau} dtau, series-safe
cd psi2(cd mu, double t) {
    if (std::abs(mu) * t < 1e-6)
        return t * t * (0.5 + mu * t / 3.0 + mu * mu * t * t / 8.0);
    return (t * std::exp(mu * t)) / mu - (std::exp(mu * t) - 1.0) / (mu * mu);
}

// (e^{lambda t} - e^{-gamma t})/(lambda + gamma), series-safe
cd phi1(cd lambda, double gamma, double t) {
    const cd mu = lambda + gamma;
    if (std::abs(mu) * t < 1e-6)
        return std::exp(-gamma * t) * t * (1.0 + mu * t / 2.0 + mu * mu * t * t / 6.0);
    return (std::exp(lambda * t) - std::exp(-gamma * t)) / mu;
}

struct EffectiveModel {
    double g_par, g_bar, chi, chi_bar, gamma, kappa, detuning; // detuning = omega_r - omega_d
    cd drive; // g_bar + (A_r/2) e^{-i phi}
    double s0;
};

EffectiveModel effective_model(const TrajectoryParams& p) {
    require(p.kappa > 0.0, ErrorCode::invalid_argument, "kappa must be positive");
    require(!p.t_grid.empty() && p.t_grid.front() == 0.0, ErrorCode::invalid_argument,
            "t_grid must start at 0 (empty cavity initial condition)");
    for (size_t k = 1; k < p.t_grid.size(); ++k)
        require(p.t_grid[k] > p.t_grid[k - 1], ErrorCode::invalid_argument,
                "t_grid must be ascending");
    EffectiveModel m;
    m.g_par = p.rc.g_par;
    m.g_bar = p.rc.g_bar;
    m.chi = p.rc.chi;
    m.chi_bar = p.rc.chi_bar;
    m.gamma = p.rc.gamma;
    m.kappa = p.kappa;
    m.detuning = p.rc.omega_r - p.plan.omega_d;
    m.drive = m.g_bar + 0.5 * p.plan.a_r * std::exp(-kI * p.plan.phi);
    m.s0 = p.sigma_z0;
    return m;
}

// Equations of motion for x = (<a>, <a sigma_z>):
//   dx/dt = M x + u + v e^{-gamma t}
Matrix2cd motion_matrix(const EffectiveModel& m) {
    Matrix2cd mm;
    mm(0, 0) = -(kI * m.chi_bar + 0.5 * m.kappa + kI * m.detuning);
    mm(0, 1) = -kI * m.chi;
    mm(1, 0) = -(kI * m.chi + m.gamma);
    mm(1, 1) = -(kI * m.chi_bar + 0.5 * m.kappa + m.gamma + kI * m.detuning);
    return mm;
}

void motion_inhomogeneity(const EffectiveModel& m, Vector2cd& u, Vector2cd& v) {
    u[0] = -kI * (m.drive - m.g_par);
    u[1] = -kI * (m.g_par - m.drive);
    v[0] = -kI * (m.s0 + 1.0) * m.g_par;
    v[1] = -kI * (m.s0 + 1.0) * m.drive;
}

// Exact solution of the linear system with x(0) = 0 through the spectral
// decomposition of M. Used when the normal-mode recombination breaks down.
Trajectory integrate_linear_system(const EffectiveModel& m, std::span<const double> t_grid) {
    const Matrix2cd mm = motion_matrix(m);
    Vector2cd u, v;
    motion_inhomogeneity(m, u, v);

    const cd tr = mm.trace();
    const cd det = mm.determinant();
    const cd disc = std::sqrt(tr * tr - 4.0 * det);
    const cd l1 = 0.5 * (tr + disc);
    const cd l2 = 0.5 * (tr - disc);
    const double scale = mm.cwiseAbs().maxCoeff();

    Trajectory out;
    out.times.assign(t_grid.begin(), t_grid.end());
    out.a.resize(t_grid.size());
    out.a_sigma_z.resize(t_grid.size());

    if (std::abs(l1 - l2) > 1e-10 * scale) {
        const Matrix2cd id = Matrix2cd::Identity();
        const Matrix2cd p1 = (mm - l2 * id) / (l1 - l2);
        const Matrix2cd p2 = (mm - l1 * id) / (l2 - l1);
        const Vector2cd p1u = p1 * u, p2u = p2 * u, p1v = p1 * v, p2v = p2 * v;
        for (size_t k = 0; k < t_grid.size(); ++k) {
            const double t = t_grid[k];
            Vector2cd x = psi1(l1, t) * p1u + psi1(l2, t) * p2u + phi1(l1, m.gamma, t) * p1v +
                          phi1(l2, m.gamma, t) * p2v;
            out.a[k] = x[0];
            out.a_sigma_z[k] = x[1];
        }
    } else {
        // near-defective: M = lbar I + N with N^2 ~ 0 (exact for 2x2)
        const cd lbar = 0.5 * (l1 + l2);
        const Matrix2cd n = mm - lbar * Matrix2cd::Identity();
        for (size_t k = 0; k < t_grid.size(); ++k) {
            const double t = t_grid[k];
            Vector2cd x = psi1(lbar, t) * u + psi2(lbar, t) * (n * u) +
                          phi1(lbar, m.gamma, t) * v +
                          std::exp(-m.gamma * t) * psi2(lbar + m.gamma, t) * (n * v);
            out.a[k] = x[0];
            out.a_sigma_z[k] = x[1];
        }
    }
    return out;
}

} // namespace

Trajectory analytic_trajectory(const TrajectoryParams& p) {
    const EffectiveModel m = effective_model(p);

    const cd gc = m.gamma + kI * m.chi;        // gamma + i chi
    const cd gc2 = m.gamma + 2.0 * kI * m.chi; // gamma + 2 i chi
    const cd d_alpha = kI * (m.chi_bar - m.chi) + kI * m.detuning + 0.5 * m.kappa;
    const cd d_beta = kI * (m.chi_bar + m.chi) + kI * m.detuning + 0.5 * m.kappa;
    require(std::abs(d_alpha) > 0.0 && std::abs(d_beta) > 0.0, ErrorCode::invalid_argument,
            "resonant normal-mode denominator; kappa > 0 excludes this");

    const double scale = 0.5 * m.kappa + std::abs(m.chi) + std::abs(m.chi_bar) + m.gamma;
    const cd d_alpha_g = d_alpha - m.gamma;
    if (std::abs(gc2) <= 1e-14 * scale || std::abs(d_alpha_g) <= 1e-14 * scale)
        return integrate_linear_system(m, p.t_grid);

    const cd ratio = gc2 / gc;
    const cd c1 = (m.drive - m.g_par) * ratio;
    const cd c2 = (m.s0 + 1.0) * (m.g_par - (kI * m.chi / gc) * m.drive);
    const cd c3 = (m.s0 + 1.0) * (m.drive + m.g_par);

    Trajectory out;
    out.times = p.t_grid;
    out.a.resize(p.t_grid.size());
    out.a_sigma_z.resize(p.t_grid.size());
    for (size_t k = 0; k < p.t_grid.size(); ++k) {
        const double t = p.t_grid[k];
        const cd e_alpha = std::exp(-d_alpha * t);
        const cd e_beta = std::exp(-d_beta * t);
        const double e_gamma = std::exp(-m.gamma * t);
        const cd alpha =
            -kI * (c1 * (1.0 - e_alpha) / d_alpha + c2 * (e_gamma - e_alpha) / d_alpha_g);
        const cd beta = -kI * c3 * (1.0 - e_beta) / d_beta * e_gamma;
        const cd a = (gc * alpha + kI * m.chi * beta) / gc2;
        out.a[k] = a;
        out.a_sigma_z[k] = beta - a;
    }
    return out;
}

Trajectory dispersive_trajectory(double a_r, double chi, double kappa, double sigma_z0,
                                 std::span<const double> t_grid) {
    require(kappa > 0.0, ErrorCode::invalid_argument, "kappa must be positive");
    Trajectory out;
    out.times.assign(t_grid.begin(), t_grid.end());
    out.a.resize(t_grid.size());
    out.label = "dispersive";
    for (size_t k = 0; k < t_grid.size(); ++k) {
        const double t = t_grid[k];
        cd acc = 0.0;
        for (int s = -1; s <= 1; s += 2) {
            const cd den = kI * static_cast<double>(s) * chi + 0.5 * kappa;
            acc += static_cast<double>(s) * (sigma_z0 + s) * (1.0 - std::exp(-den * t)) / den;
        }
        out.a[k] = 0.25 * a_r * acc;
    }
    return out;
}

std::complex<double> steady_state_pointer(const ReadoutCouplings& rc, const DrivePlan& plan,
                                          double sigma_z) {
    require(rc.kappa > 0.0, ErrorCode::invalid_argument, "kappa must be positive");
    const double detuning = rc.omega_r - plan.omega_d;
    const cd numerator = -kI * (rc.g_par * sigma_z + rc.g_bar + 0.5 * plan.a_r * std::exp(-kI * plan.phi));
    const cd denominator = kI * (rc.chi * sigma_z + rc.chi_bar + detuning) + 0.5 * rc.kappa;
    return numerator / denominator;
}

SnrCurve snr(const Trajectory& up, const Trajectory& down, double kappa) {
    require(up.times.size() == down.times.size(), ErrorCode::invalid_argument,
            "snr: trajectory grids differ");
    for (size_t k = 0; k < up.times.size(); ++k)
        require(up.times[k] == down.times[k], ErrorCode::invalid_argument,
                "snr: trajectory grids differ");
    SnrCurve out;
    out.times = up.times;
    out.snr.resize(up.times.size());
    double acc = 0.0;
    double prev = std::norm(up.a[0] - down.a[0]);
    out.snr[0] = 0.0;
    for (size_t k = 1; k < up.times.size(); ++k) {
        const double cur = std::norm(up.a[k] - down.a[k]);
        acc += 0.5 * (prev + cur) * (up.times[k] - up.times[k - 1]);
        out.snr[k] = std::sqrt(2.0 * kappa * acc);
        prev = cur;
    }
    return out;
}

double match_dispersive_amplitude(const ReadoutCouplings& rc_long, const DrivePlan& plan_long,
                                  double chi_disp, double kappa) {
    const cd up = steady_state_pointer(rc_long, plan_long, 1.0);
    const cd down = steady_state_pointer(rc_long, plan_long, -1.0);
    const double target = std::abs(up - down);
    if (target == 0.0) return 0.0;
    // dispersive steady splitting is linear in A_r
    const cd den_up = kI * chi_disp + 0.5 * kappa;
    const cd den_down = -kI * chi_disp + 0.5 * kappa;
    const double per_unit = std::abs(0.5 / den_up - 0.5 / den_down);
    require(per_unit > 0.0, ErrorCode::invalid_argument,
            "match_dispersive_amplitude: zero dispersive shift cannot match a finite splitting");
    return target / per_unit;
}

std::vector<double> make_time_grid(double t_max, int points) {
    require(t_max > 0.0 && points >= 2, ErrorCode::invalid_argument, "bad time grid spec");
    std::vector<double> t(points);
    for (int k = 0; k < points; ++k) t[k] = t_max * static_cast<double>(k) / (points - 1);
    return t;
}

} // namespace flqr
