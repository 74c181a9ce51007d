#include "flqr/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "flqr/eigh.hpp"
#include "flqr/error.hpp"

namespace flqr {

using std::complex;
using cd = complex<double>;

namespace {

constexpr double kRealTol = 1e-14;

// Fix the global phase of each eigenvector so its largest-magnitude
// component is real positive. Makes Q_ij deterministic across runs.
void fix_gauge(Eigen::MatrixXcd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index imax = 0;
        vectors.col(c).cwiseAbs().maxCoeff(&imax);
        cd pivot = vectors(imax, c);
        if (std::abs(pivot) > 0.0) vectors.col(c) *= std::conj(pivot) / std::abs(pivot);
    }
}

// Reorder exactly-degenerate eigenvalue groups by descending |<0|Q|j>|.
void sort_degenerate(Eigen::VectorXd& values, Eigen::MatrixXcd& vectors,
                     const Eigen::MatrixXcd& q_full) {
    const Eigen::Index n = values.size();
    const double scale = std::max(values.cwiseAbs().maxCoeff(), 1.0);
    Eigen::VectorXcd ground = vectors.col(0);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i + 1;
        while (j < n && std::abs(values[j] - values[i]) < 1e-12 * scale) ++j;
        if (j - i > 1) {
            std::vector<Eigen::Index> order(j - i);
            std::vector<double> weight(j - i);
            for (Eigen::Index k = i; k < j; ++k) {
                order[k - i] = k;
                weight[k - i] = std::abs(cd(ground.adjoint() * q_full * vectors.col(k)));
            }
            std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                return weight[a - i] > weight[b - i];
            });
            Eigen::MatrixXcd block(vectors.rows(), j - i);
            Eigen::VectorXd vals(j - i);
            for (Eigen::Index k = 0; k < j - i; ++k) {
                block.col(k) = vectors.col(order[k]);
                vals[k] = values[order[k]];
            }
            vectors.middleCols(i, j - i) = block;
            values.segment(i, j - i) = vals;
        }
        i = j;
    }
}

SystemModel from_dense(std::string label, const Eigen::MatrixXd& h, const Eigen::MatrixXcd& q,
                       int levels) {
    require(levels >= 2 && levels <= h.rows(), ErrorCode::invalid_argument,
            label + ": retained level count must be in [2, basis size]");
    EighResult e = eigh(h);
    sort_degenerate(e.values, e.vectors, q);
    fix_gauge(e.vectors);
    SystemModel m;
    m.label = std::move(label);
    m.energies = e.values.head(levels);
    Eigen::MatrixXcd kept = e.vectors.leftCols(levels);
    m.charge_op = kept.adjoint() * q * kept;
    // scrub roundoff so Hermiticity holds exactly
    m.charge_op = 0.5 * (m.charge_op + m.charge_op.adjoint()).eval();
    return m;
}

struct TransmonMatrices {
    Eigen::MatrixXd h;
    Eigen::MatrixXcd q;
};

TransmonMatrices transmon_matrices(const TransmonParams& p, int n_max) {
    const int dim = 2 * n_max + 1;
    const double ej_eff = transmon_effective_ej(p.e_j, p.flux);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double n = k - n_max;
        h(k, k) = 4.0 * p.e_c * n * n;
        q(k, k) = n;
        if (k + 1 < dim) {
            h(k, k + 1) = -0.5 * ej_eff; // cos(phi) hopping
            h(k + 1, k) = -0.5 * ej_eff;
        }
    }
    return {std::move(h), std::move(q)};
}

struct FluxoniumMatrices {
    Eigen::MatrixXd h;
    Eigen::MatrixXcd q;
};

FluxoniumMatrices fluxonium_matrices(const FluxoniumParams& p, int basis) {
    const double phi_zpf = std::pow(2.0 * p.e_c / p.e_l, 0.25);
    const double n_zpf = std::pow(p.e_l / (32.0 * p.e_c), 0.25);
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(basis, basis);
    Eigen::MatrixXcd n_op = Eigen::MatrixXcd::Zero(basis, basis);
    for (int k = 0; k + 1 < basis; ++k) {
        const double s = std::sqrt(k + 1.0);
        phi(k, k + 1) = phi_zpf * s;
        phi(k + 1, k) = phi_zpf * s;
        n_op(k, k + 1) = cd(0.0, n_zpf * s); // n = i*n_zpf (b - b^dag)
        n_op(k + 1, k) = cd(0.0, -n_zpf * s);
    }
    // cos / sin of phi through its spectral decomposition
    EighResult pe = eigh(phi);
    Eigen::MatrixXd w = pe.vectors.real();
    Eigen::MatrixXd cos_phi = w * pe.values.array().cos().matrix().asDiagonal() * w.transpose();
    Eigen::MatrixXd sin_phi = w * pe.values.array().sin().matrix().asDiagonal() * w.transpose();

    const double theta = 2.0 * std::numbers::pi * p.flux;
    Eigen::MatrixXd h = 4.0 * p.e_c * (n_op * n_op).real() -
                        p.e_j * (std::cos(theta) * cos_phi + std::sin(theta) * sin_phi) +
                        0.5 * p.e_l * phi * phi;
    h = 0.5 * (h + h.transpose()).eval();
    return {std::move(h), std::move(n_op)};
}

void check_cutoff_convergence(const SystemModel& coarse, const SystemModel& fine,
                              const std::string& what) {
    const double wq = fine.omega_q();
    for (int j = 0; j < coarse.dim(); ++j) {
        const double scale = std::max(std::abs(fine.energies[j]), wq);
        require(std::abs(coarse.energies[j] - fine.energies[j]) <= 1e-9 * scale,
                ErrorCode::convergence,
                what + ": cutoff too small, E_" + std::to_string(j) +
                    " not converged under cutoff doubling");
    }
    const double n01_c = std::abs(coarse.charge_op(0, 1));
    const double n01_f = std::abs(fine.charge_op(0, 1));
    require(std::abs(n01_c - n01_f) <= 1e-9 * std::max(n01_f, 1e-300), ErrorCode::convergence,
            what + ": cutoff too small, |n_01| not converged under cutoff doubling");
}

} // namespace

bool SystemModel::charge_op_is_real() const {
    return charge_op.imag().cwiseAbs().maxCoeff() <= kRealTol * charge_op.cwiseAbs().maxCoeff();
}

double SystemModel::charge_norm() const {
    return eigvalsh(charge_op).cwiseAbs().maxCoeff();
}

SystemModel SystemModel::truncated(int m) const {
    require(m >= 2 && m <= dim(), ErrorCode::invalid_argument,
            "truncated: level count out of range");
    SystemModel out;
    out.label = label;
    out.energies = energies.head(m);
    out.charge_op = charge_op.topLeftCorner(m, m);
    return out;
}

SystemModel build_charge_qubit(double omega_q) {
    require(omega_q > 0.0, ErrorCode::invalid_argument, "charge qubit: omega_q must be positive");
    SystemModel m;
    m.label = "charge_qubit";
    m.energies.resize(2);
    m.energies << -0.5 * omega_q, 0.5 * omega_q;
    m.charge_op = Eigen::MatrixXcd::Zero(2, 2);
    m.charge_op(0, 1) = 1.0; // sigma_x exactly
    m.charge_op(1, 0) = 1.0;
    return m;
}

SystemModel build_flopping_mode(const FloppingParams& p) {
    require(p.delta > 0.0, ErrorCode::invalid_argument, "flopping mode: Delta must be positive");
    // product basis {L up, L down, R up, R down}; sigma acts on spin, tau on L/R
    Eigen::Matrix2d sz, sx, sy_i, id;
    id.setIdentity();
    sz << 1, 0, 0, -1;
    sx << 0, 1, 1, 0;
    sy_i << 0, 1, -1, 0; // i * sigma_y, real
    auto kron = [](const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
        Eigen::Matrix4d k;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        return k;
    };
    // tau_y sigma_y = (i tau_y)(i sigma_y) * (-1), both factors real
    Eigen::Matrix4d tysy = -kron(sy_i, sy_i);
    Eigen::Matrix4d h = 0.5 * p.delta * kron(id, sz) + 0.5 * p.epsilon0 * kron(sz, id) +
                        p.t_sc * kron(sx, id) - p.t_sf * tysy;
    Eigen::Matrix4d tau_z = kron(sz, id);
    return from_dense("flopping_mode", h, tau_z.cast<cd>(), 4);
}

double transmon_effective_ej(double e_j, double flux) {
    return e_j * std::abs(std::cos(std::numbers::pi * flux));
}

SystemModel build_transmon(const TransmonParams& p) {
    require(p.e_c > 0.0 && p.e_j > 0.0, ErrorCode::invalid_argument,
            "transmon: E_C and E_J must be positive");
    require(p.levels >= 2 && p.levels <= 2 * p.n_max + 1, ErrorCode::invalid_argument,
            "transmon: retained levels must be in [2, 2*n_max+1]");
    TransmonMatrices c = transmon_matrices(p, p.n_max);
    SystemModel coarse = from_dense("transmon", c.h, c.q, p.levels);
    TransmonMatrices f = transmon_matrices(p, 2 * p.n_max);
    SystemModel fine = from_dense("transmon", f.h, f.q, p.levels);
    check_cutoff_convergence(coarse, fine, "transmon");
    return coarse;
}

SystemModel build_fluxonium(const FluxoniumParams& p) {
    require(p.e_c > 0.0 && p.e_l > 0.0 && p.e_j >= 0.0, ErrorCode::invalid_argument,
            "fluxonium: E_C, E_L must be positive and E_J nonnegative");
    require(p.levels >= 2 && p.levels <= p.basis_size, ErrorCode::invalid_argument,
            "fluxonium: retained levels must be in [2, basis_size]");
    FluxoniumMatrices c = fluxonium_matrices(p, p.basis_size);
    SystemModel coarse = from_dense("fluxonium", c.h, c.q, p.levels);
    FluxoniumMatrices f = fluxonium_matrices(p, 2 * p.basis_size);
    SystemModel fine = from_dense("fluxonium", f.h, f.q, p.levels);
    check_cutoff_convergence(coarse, fine, "fluxonium");
    return coarse;
}

double TransmonAsymptotics::energy(int j) const {
    return -e_j_eff + std::sqrt(8.0 * e_j_eff * e_c) * (j + 0.5) -
           e_c / 12.0 * (6.0 * j * j + 6.0 * j + 3.0);
}

double TransmonAsymptotics::n_element(int j) const {
    return std::sqrt((j + 1.0) / 2.0) * std::pow(e_j_eff / (8.0 * e_c), 0.25);
}

double TransmonAsymptotics::omega_q() const { return std::sqrt(8.0 * e_j_eff * e_c) - e_c; }

TransmonAsymptotics transmon_asymptotics(double e_c, double e_j_eff) {
    require(e_c > 0.0 && e_j_eff > 0.0, ErrorCode::invalid_argument,
            "transmon_asymptotics: energies must be positive");
    TransmonAsymptotics a;
    a.e_c = e_c;
    a.e_j_eff = e_j_eff;
    return a;
}

} // namespace flqr
