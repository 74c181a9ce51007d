#include "flqr/lindblad.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "flqr/eigh.hpp"
#include "flqr/error.hpp"
#include "flqr/parallel.hpp"
#include "flqr/cavity.hpp"

namespace flqr {

using cd = std::complex<double>;

namespace {

constexpr cd kI{0.0, 1.0};
constexpr long kDefaultMaxDim = 40000;

long resolve_max_dim(const SimConfig& cfg) {
    if (cfg.max_dim > 0) return cfg.max_dim;
    if (const char* env = std::getenv("FLOQUET_READOUT_MAX_DIM")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return kDefaultMaxDim;
}

// Workspace for the structure-aware Liouvillian application. The Hamiltonian
// is never assembled in the full space; its Kronecker factors act as
// left/right matrix products on rho:
//   H(t) = S(t) (x) 1  +  Q (x) M(t)  +  1 (x) C(t)
// with S(t) = diag(E) + A_q cos(w_d t) Q acting on the system, M(t) the
// coupling g_perp (a e^{-i w_d t} + h.c.) (lab: g_perp (a + a^dag)), and
// C(t) the cavity detuning plus drive.
class Liouvillian {
  public:
    Liouvillian(const SystemModel& model, double g_perp, double omega_r, double kappa,
                const DrivePlan& plan, const SimConfig& cfg)
        : model_(model), cfg_(cfg), d_(model.dim()), f_(cfg.fock_dim), n_(d_ * f_),
          g_perp_(g_perp), omega_r_(omega_r), kappa_(kappa), plan_(plan) {
        sq_.resize(f_);
        for (int p = 0; p < f_; ++p) sq_[p] = std::sqrt(p + 1.0);
        q_ = model.charge_op;
        tmp_.resize(n_, n_);
        tmp2_.resize(n_, n_);
    }

    int dim() const { return n_; }

    // out = -i [H(t), rho] + kappa D_a[rho]
    void apply(double t, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) {
        const bool rotating = cfg_.frame == Frame::rotating;
        const double cos_wd = std::cos(plan_.omega_d * t);

        // cavity single-particle operator C(t): detuning + drive (tridiagonal)
        cd c_lower; // coefficient of a   (element (p, p+1) ... annihilation)
        double c_diag_coeff;
        if (rotating) {
            c_diag_coeff = omega_r_ - plan_.omega_d;
            if (cfg_.drop_counter_rotating_cavity_drive) {
                c_lower = 0.5 * plan_.a_r * std::exp(kI * plan_.phi);
            } else {
                // full A_r cos(w_d t + phi)(a e^{-i w_d t} + a^dag e^{i w_d t})
                c_lower = plan_.a_r * std::cos(plan_.omega_d * t + plan_.phi) *
                          std::exp(-kI * plan_.omega_d * t);
            }
        } else {
            c_diag_coeff = omega_r_;
            c_lower = plan_.a_r * std::cos(plan_.omega_d * t + plan_.phi);
        }

        // coupling M(t) coefficient of a
        const cd m_lower = rotating ? g_perp_ * std::exp(-kI * plan_.omega_d * t) : cd(g_perp_);

        // tmp = H(t) rho, assembled term by term
        // 1) diagonal system energies + cavity diag: scale rows
        if (row_scale_.size() != n_) row_scale_.resize(n_);
        for (int s = 0; s < d_; ++s)
            for (int p = 0; p < f_; ++p)
                row_scale_[s * f_ + p] = model_.energies[s] + c_diag_coeff * p;
        tmp_ = row_scale_.asDiagonal() * rho;
        // 2) qubit drive A_q cos(w_d t) (Q (x) 1) rho
        if (plan_.a_q != 0.0) left_sys(q_, rho, tmp2_), tmp_ += (plan_.a_q * cos_wd) * tmp2_;
        // 3) coupling (Q (x) M(t)) rho
        left_cav(m_lower, std::conj(m_lower), rho, tmp2_);
        left_sys_inplace_add(q_, tmp2_, tmp_);
        // 4) cavity drive (1 (x) drive) rho
        if (plan_.a_r != 0.0) {
            left_cav(c_lower, std::conj(c_lower), rho, tmp2_);
            tmp_ += tmp2_;
        }

        // out = -i (tmp - tmp^dag)  [rho Hermitian => rho H = (H rho)^dag]
        out = -kI * (tmp_ - tmp_.adjoint().eval());

        // dissipator kappa (a rho a^dag - 1/2 {n, rho})
        lower_shift(rho, tmp_);      // (1 (x) a) rho
        upper_shift_cols(tmp_, tmp2_); // ... a^dag on the right
        out += kappa_ * tmp2_;
        for (int i = 0; i < n_; ++i) {
            const double np_i = static_cast<double>(i % f_);
            for (int j = 0; j < n_; ++j) {
                const double np_j = static_cast<double>(j % f_);
                out(j, i) -= 0.5 * kappa_ * (np_i + np_j) * rho(j, i);
            }
        }
    }

  private:
    // (B (x) 1) rho
    void left_sys(const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& rho,
                  Eigen::MatrixXcd& out) const {
        out.setZero();
        for (int s = 0; s < d_; ++s)
            for (int s2 = 0; s2 < d_; ++s2) {
                const cd c = b(s, s2);
                if (c != 0.0) out.middleRows(s * f_, f_) += c * rho.middleRows(s2 * f_, f_);
            }
    }

    void left_sys_inplace_add(const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& src,
                              Eigen::MatrixXcd& acc) const {
        for (int s = 0; s < d_; ++s)
            for (int s2 = 0; s2 < d_; ++s2) {
                const cd c = b(s, s2);
                if (c != 0.0) acc.middleRows(s * f_, f_) += c * src.middleRows(s2 * f_, f_);
            }
    }

    // (1 (x) T) rho with T = lo * a + hi * a^dag, tridiagonal in each block
    void left_cav(cd lo, cd hi, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
        out.setZero();
        for (int s = 0; s < d_; ++s) {
            const int base = s * f_;
            for (int p = 0; p < f_; ++p) {
                if (p + 1 < f_ && lo != 0.0)
                    out.row(base + p) += (lo * sq_[p]) * rho.row(base + p + 1);
                if (p > 0 && hi != 0.0) out.row(base + p) += (hi * sq_[p - 1]) * rho.row(base + p - 1);
            }
        }
    }

    // (1 (x) a) rho
    void lower_shift(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
        out.setZero();
        for (int s = 0; s < d_; ++s) {
            const int base = s * f_;
            for (int p = 0; p + 1 < f_; ++p) out.row(base + p) = sq_[p] * rho.row(base + p + 1);
        }
    }

    // X (1 (x) a^dag): column p of the result takes column p+1 scaled
    void upper_shift_cols(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& out) const {
        out.setZero();
        for (int s = 0; s < d_; ++s) {
            const int base = s * f_;
            for (int p = 0; p + 1 < f_; ++p) out.col(base + p) = sq_[p] * x.col(base + p + 1);
        }
    }

    const SystemModel& model_;
    const SimConfig& cfg_;
    int d_, f_, n_;
    double g_perp_, omega_r_, kappa_;
    DrivePlan plan_;
    std::vector<double> sq_;
    Eigen::VectorXd row_scale_;
    Eigen::MatrixXcd q_;
    Eigen::MatrixXcd tmp_, tmp2_;
};

double frame_max_frequency(const SystemModel& model, double g_perp, double omega_r,
                           const DrivePlan& plan, const SimConfig& cfg) {
    const double spread = model.energies[model.dim() - 1] - model.energies[0];
    const double qn = model.charge_norm();
    double w = std::max({spread, plan.omega_d, std::abs(plan.a_q) * qn, std::abs(plan.a_r)});
    if (cfg.frame == Frame::lab)
        w = std::max(w, omega_r);
    else
        w = std::max(w, std::abs(omega_r - plan.omega_d));
    w = std::max(w, 2.0 * g_perp * qn * std::sqrt(static_cast<double>(cfg.fock_dim)));
    return w;
}

// RK4 stability also caps dt through the full generator spectral radius,
// which includes the cavity ladder in the lab frame.
double stability_radius(const SystemModel& model, double g_perp, double omega_r,
                        const DrivePlan& plan, const SimConfig& cfg) {
    const double spread = model.energies[model.dim() - 1] - model.energies[0];
    const double qn = model.charge_norm();
    const double cav = (cfg.frame == Frame::lab ? omega_r : std::abs(omega_r - plan.omega_d)) *
                       (cfg.fock_dim - 1);
    return spread + cav +
           2.0 * (std::abs(plan.a_q) * qn + std::abs(plan.a_r) +
                  2.0 * g_perp * qn * std::sqrt(static_cast<double>(cfg.fock_dim)));
}

} // namespace

SimResult simulate(const SystemModel& model, double g_perp, double omega_r, double kappa,
                   const DrivePlan& plan, int initial_level, std::span<const double> t_grid,
                   const SimConfig& cfg) {
    require(cfg.fock_dim >= 6, ErrorCode::invalid_argument, "fock_dim must be >= 6");
    require(kappa > 0.0 && omega_r > 0.0 && plan.omega_d > 0.0, ErrorCode::invalid_argument,
            "rates and frequencies must be positive");
    require(initial_level >= 0 && initial_level < model.dim(), ErrorCode::invalid_argument,
            "initial level out of range");
    require(t_grid.size() >= 2 && t_grid.front() == 0.0, ErrorCode::invalid_argument,
            "t_grid must start at 0 and contain at least two points");
    const int n = model.dim() * cfg.fock_dim;
    const long cap = resolve_max_dim(cfg);
    require(static_cast<long>(n) * n <= cap, ErrorCode::dimension_limit,
            "vectorized density matrix size " + std::to_string(static_cast<long>(n) * n) +
                " exceeds limit " + std::to_string(cap));

    const double w_max = frame_max_frequency(model, g_perp, omega_r, plan, cfg);
    const double dt_rule = (2.0 * std::numbers::pi / w_max) / 50.0;
    double dt_max = cfg.dt;
    if (dt_max <= 0.0) {
        dt_max = dt_rule;
    } else {
        require(dt_max <= dt_rule * (1.0 + 1e-12), ErrorCode::invalid_argument,
                "dt = " + std::to_string(cfg.dt) + " exceeds (2 pi / omega_max)/50 = " +
                    std::to_string(dt_rule));
    }
    const double radius = stability_radius(model, g_perp, omega_r, plan, cfg);
    if (radius > 0.0) dt_max = std::min(dt_max, 2.5 / radius);

    Liouvillian liouville(model, g_perp, omega_r, kappa, plan, cfg);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    rho(initial_level * cfg.fock_dim, initial_level * cfg.fock_dim) = 1.0;

    SimResult res;
    res.times.assign(t_grid.begin(), t_grid.end());
    const int nrec = static_cast<int>(t_grid.size());
    res.expect_a.resize(nrec);
    res.populations.resize(model.dim(), nrec);
    res.photon_number.resize(nrec);

    Eigen::MatrixXcd k1(n, n), k2(n, n), k3(n, n), k4(n, n), stage(n, n);
    std::vector<int> spot; // positivity spot checks
    for (int k = 0; k < 5; ++k) spot.push_back(k * (nrec - 1) / 4);

    double used_dt = dt_max;
    auto record = [&](int idx, double t) {
        cd ea = 0.0;
        for (int s = 0; s < model.dim(); ++s)
            for (int p = 0; p + 1 < cfg.fock_dim; ++p)
                ea += std::sqrt(p + 1.0) * rho(s * cfg.fock_dim + p + 1, s * cfg.fock_dim + p);
        if (cfg.frame == Frame::lab) ea *= std::exp(kI * plan.omega_d * t);
        res.expect_a[idx] = ea;
        double trace = 0.0, photon = 0.0;
        for (int s = 0; s < model.dim(); ++s) {
            double pop = 0.0;
            for (int p = 0; p < cfg.fock_dim; ++p) {
                const double v = rho(s * cfg.fock_dim + p, s * cfg.fock_dim + p).real();
                pop += v;
                photon += p * v;
            }
            res.populations(s, idx) = pop;
            trace += pop;
        }
        res.photon_number[idx] = photon;
        res.trace_error = std::max(res.trace_error, std::abs(trace - 1.0));
        res.hermiticity_error =
            std::max(res.hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        res.nphoton_max = std::max(res.nphoton_max, photon);
        for (int sp : spot)
            if (sp == idx) {
                Eigen::VectorXd ev = eigvalsh(rho);
                res.min_eigenvalue = std::min(res.min_eigenvalue, ev.minCoeff());
            }
        require(photon < 0.8 * cfg.fock_dim, ErrorCode::truncation,
                "photon number " + std::to_string(photon) + " hit the truncation guard at t = " +
                    std::to_string(t) + "; increase fock_dim");
        require(res.trace_error < 1e-8, ErrorCode::convergence,
                "trace drift " + std::to_string(res.trace_error) + " beyond tolerance");
    };

    record(0, 0.0);
    double t = 0.0;
    for (int seg = 0; seg + 1 < nrec; ++seg) {
        const double t_target = res.times[seg + 1];
        const double span = t_target - t;
        int steps = std::max(1, static_cast<int>(std::ceil(span / dt_max)));
        if (cfg.record_stride > 0) steps = std::max(steps, cfg.record_stride);
        const double dt = span / steps;
        used_dt = dt;
        for (int k = 0; k < steps; ++k) {
            const double tk = t + k * dt;
            liouville.apply(tk, rho, k1);
            stage = rho + (0.5 * dt) * k1;
            liouville.apply(tk + 0.5 * dt, stage, k2);
            stage = rho + (0.5 * dt) * k2;
            liouville.apply(tk + 0.5 * dt, stage, k3);
            stage = rho + dt * k3;
            liouville.apply(tk + dt, stage, k4);
            rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        t = t_target;
        record(seg + 1, t);
    }
    res.dt = used_dt;
    return res;
}

std::vector<double> sweep_snr_numeric(const SystemModel& model, double g_perp, double omega_r,
                                      double kappa, std::span<const DrivePlan> plans,
                                      std::span<const double> t_grid, const SimConfig& cfg,
                                      int jobs) {
    std::vector<double> out(plans.size(), 0.0);
    parallel_for(static_cast<int>(plans.size()), jobs, [&](int i) {
        SimResult up = simulate(model, g_perp, omega_r, kappa, plans[i], 1, t_grid, cfg);
        SimResult down = simulate(model, g_perp, omega_r, kappa, plans[i], 0, t_grid, cfg);
        Trajectory tu, td;
        tu.times.assign(t_grid.begin(), t_grid.end());
        td.times = tu.times;
        tu.a = up.expect_a;
        td.a = down.expect_a;
        out[i] = snr(tu, td, kappa).snr.back();
    });
    return out;
}

} // namespace flqr
