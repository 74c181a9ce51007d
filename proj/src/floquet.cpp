#include "flqr/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>

#include "flqr/eigh.hpp"
#include "flqr/error.hpp"

namespace flqr {

using cd = std::complex<double>;

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

constexpr double kAmplitudeMatchTol = 1e-12;
constexpr long kDefaultMaxDim = 40000;

long resolve_max_dim(const FloquetConfig& cfg) {
    if (cfg.max_dim > 0) return cfg.max_dim;
    if (const char* env = std::getenv("FLOQUET_READOUT_MAX_DIM")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return kDefaultMaxDim;
}

std::vector<int> resolve_levels(const SystemModel& model, const FloquetConfig& cfg) {
    std::vector<int> levels = cfg.track_levels;
    if (levels.empty()) {
        levels.resize(model.dim());
        std::iota(levels.begin(), levels.end(), 0);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    require(!levels.empty() && levels.front() >= 0 && levels.back() < model.dim(),
            ErrorCode::invalid_argument, "track_levels out of range");
    return levels;
}

struct BranchState {
    double eps = 0.0;
    Eigen::VectorXcd vec;
    double last_overlap = 1.0;
};

// One (model, omega_d, n_rep) extended-space problem.
class Engine {
  public:
    Engine(const SystemModel& model, const FloquetConfig& cfg, int n_rep)
        : model_(model), cfg_(cfg), n_rep_(n_rep), reps_(2 * n_rep + 1),
          dim_(model.dim() * (2 * n_rep + 1)), q_real_(model.charge_op_is_real()) {
        require(cfg.n_rep >= 5, ErrorCode::invalid_argument, "n_rep must be >= 5");
        require(cfg.omega_d > 0.0, ErrorCode::invalid_argument, "omega_d must be positive");
        const long cap = resolve_max_dim(cfg);
        require(static_cast<long>(dim_) <= cap, ErrorCode::dimension_limit,
                "Floquet matrix dimension " + std::to_string(dim_) + " exceeds limit " +
                    std::to_string(cap));
    }

    int dim() const { return dim_; }
    int zero_block() const { return n_rep_; } // block row carrying replica p = 0
    int replica_of_block(int r) const { return n_rep_ - r; }

    Eigen::MatrixXcd matrix(cd amplitude) const {
        const int d = model_.dim();
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim_, dim_);
        const Eigen::MatrixXcd upper = 0.5 * std::conj(amplitude) * model_.charge_op;
        const Eigen::MatrixXcd lower = 0.5 * amplitude * model_.charge_op;
        for (int r = 0; r < reps_; ++r) {
            const int p = replica_of_block(r);
            for (int s = 0; s < d; ++s)
                h(r * d + s, r * d + s) = model_.energies[s] + p * cfg_.omega_d;
            if (r + 1 < reps_) {
                h.block(r * d, (r + 1) * d, d, d) = upper;
                h.block((r + 1) * d, r * d, d, d) = lower;
            }
        }
        return h;
    }

    EighResult solve(double amplitude) const {
        if (q_real_) {
            const int d = model_.dim();
            Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
            const Eigen::MatrixXd coup = 0.5 * amplitude * model_.charge_op.real();
            for (int r = 0; r < reps_; ++r) {
                const int p = replica_of_block(r);
                for (int s = 0; s < d; ++s)
                    h(r * d + s, r * d + s) = model_.energies[s] + p * cfg_.omega_d;
                if (r + 1 < reps_) {
                    h.block(r * d, (r + 1) * d, d, d) = coup;
                    h.block((r + 1) * d, r * d, d, d) = coup;
                }
            }
            return eigh(h);
        }
        return eigh(Eigen::MatrixXcd(matrix(cd(amplitude, 0.0))));
    }

    std::vector<BranchState> initial_states(const std::vector<int>& levels) const {
        std::vector<BranchState> states;
        states.reserve(levels.size());
        for (int lvl : levels) {
            BranchState s;
            s.eps = model_.energies[lvl];
            s.vec = Eigen::VectorXcd::Zero(dim_);
            s.vec[zero_block() * model_.dim() + lvl] = 1.0;
            states.push_back(std::move(s));
        }
        return states;
    }

    // Permutation assignment by descending eigenvector overlap within a
    // +-1 replica eigenvalue window. Returns nullopt when the best overlap
    // of some branch falls below the threshold.
    std::optional<std::vector<BranchState>> assign(const std::vector<BranchState>& prev,
                                                   const EighResult& sol, double da) const {
        const int m = static_cast<int>(prev.size());
        const int n = dim_;
        const double window =
            cfg_.omega_d + std::abs(da) * model_.charge_norm() + 1e-9 * cfg_.omega_d;
        Eigen::MatrixXd overlap(m, n); // |<prev_i | v_c>|
        for (int i = 0; i < m; ++i)
            overlap.row(i) = (sol.vectors.adjoint() * prev[i].vec).cwiseAbs().transpose();

        struct Entry {
            double o;
            int i, c;
        };
        std::vector<Entry> entries;
        entries.reserve(static_cast<size_t>(m) * 64);
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < n; ++c)
                if (std::abs(sol.values[c] - prev[i].eps) <= window &&
                    overlap(i, c) >= cfg_.overlap_threshold)
                    entries.push_back({overlap(i, c), i, c});
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.o != b.o) return a.o > b.o;
            return std::tie(a.i, a.c) < std::tie(b.i, b.c);
        });

        std::vector<int> pick(m, -1);
        std::vector<char> used(n, 0);
        int assigned = 0;
        for (const Entry& e : entries) {
            if (pick[e.i] >= 0 || used[e.c]) continue;
            pick[e.i] = e.c;
            used[e.c] = 1;
            if (++assigned == m) break;
        }
        if (assigned < m) return std::nullopt;

        std::vector<BranchState> next(m);
        for (int i = 0; i < m; ++i) {
            BranchState s;
            s.eps = sol.values[pick[i]];
            s.vec = sol.vectors.col(pick[i]);
            cd phase = prev[i].vec.dot(s.vec); // <prev|new>
            if (std::abs(phase) > 0.0) s.vec *= std::conj(phase) / std::abs(phase);
            s.last_overlap = overlap(i, pick[i]);
            next[i] = std::move(s);
        }
        return next;
    }

    std::vector<BranchState> step(const std::vector<BranchState>& from, double a_from, double a_to,
                                  int depth) const {
        EighResult sol = solve(a_to);
        if (auto next = assign(from, sol, a_to - a_from)) return std::move(*next);
        if (depth >= cfg_.max_bisections)
            fail(ErrorCode::ambiguous_branch,
                 "ambiguous branch assignment near A = " + std::to_string(a_to) +
                     " (best overlap < threshold after " + std::to_string(depth) +
                     " bisections); refine the amplitude grid");
        const double mid = 0.5 * (a_from + a_to);
        std::vector<BranchState> half = step(from, a_from, mid, depth + 1);
        return step(half, mid, a_to, depth + 1);
    }

    double block_weight(const Eigen::VectorXcd& v, int r) const {
        return v.segment(r * model_.dim(), model_.dim()).squaredNorm();
    }

    double edge_weight(const Eigen::VectorXcd& v) const {
        double w = block_weight(v, 0) + block_weight(v, reps_ - 1);
        if (reps_ >= 4) w += block_weight(v, 1) + block_weight(v, reps_ - 2);
        return w;
    }

    int dominant_replica(const Eigen::VectorXcd& v) const {
        int best = 0;
        double wbest = -1.0;
        for (int r = 0; r < reps_; ++r) {
            double w = block_weight(v, r);
            if (w > wbest) {
                wbest = w;
                best = r;
            }
        }
        return replica_of_block(best);
    }

  private:
    const SystemModel& model_;
    const FloquetConfig& cfg_;
    int n_rep_;
    int reps_;
    int dim_;
    bool q_real_;
};

} // namespace

int FloquetSpectrum::point_index(double a) const {
    const double tol = kAmplitudeMatchTol * std::max(1.0, std::abs(a));
    for (size_t k = 0; k < amplitudes.size(); ++k)
        if (std::abs(amplitudes[k] - a) <= tol) return static_cast<int>(k);
    return -1;
}

int FloquetSpectrum::level_row(int level) const {
    for (size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == level) return static_cast<int>(i);
    return -1;
}

double FloquetSpectrum::quasi_energy(int level, double a) const {
    const int row = level_row(level);
    const int col = point_index(a);
    require(row >= 0 && col >= 0, ErrorCode::invalid_argument,
            "quasi_energy: requested level/amplitude not in spectrum");
    return quasi_energies(row, col);
}

Eigen::VectorXcd FloquetSpectrum::mode_at_t0(int level, double a) const {
    const int row = level_row(level);
    const int col = point_index(a);
    require(row >= 0 && col >= 0, ErrorCode::invalid_argument,
            "mode_at_t0: requested level/amplitude not in spectrum");
    const Eigen::VectorXcd& v = modes[col][row];
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sys_dim);
    const int reps = 2 * n_rep + 1;
    for (int r = 0; r < reps; ++r) out += v.segment(r * sys_dim, sys_dim);
    return out;
}

Eigen::MatrixXcd build_floquet_matrix(const SystemModel& model, cd amplitude,
                                      const FloquetConfig& cfg) {
    require(std::isfinite(amplitude.real()) && std::isfinite(amplitude.imag()),
            ErrorCode::invalid_argument, "amplitude must be finite");
    Engine engine(model, cfg, cfg.n_rep);
    return engine.matrix(amplitude);
}

FloquetSpectrum track_branches(const SystemModel& model, std::span<const double> a_grid,
                               const FloquetConfig& cfg) {
    require(!a_grid.empty(), ErrorCode::invalid_argument, "amplitude grid is empty");
    for (size_t k = 1; k < a_grid.size(); ++k)
        require(a_grid[k] > a_grid[k - 1], ErrorCode::invalid_argument,
                "amplitude grid must be strictly ascending");
    int zero_idx = -1;
    for (size_t k = 0; k < a_grid.size(); ++k)
        if (a_grid[k] == 0.0) zero_idx = static_cast<int>(k);
    require(zero_idx >= 0, ErrorCode::invalid_argument,
            "amplitude grid must contain A = 0 (branches are continued from the bare states)");

    Engine engine(model, cfg, cfg.n_rep);
    const std::vector<int> levels = resolve_levels(model, cfg);
    const int m = static_cast<int>(levels.size());
    const int np = static_cast<int>(a_grid.size());

    FloquetSpectrum out;
    out.amplitudes.assign(a_grid.begin(), a_grid.end());
    out.levels = levels;
    out.bare_energies.resize(m);
    for (int i = 0; i < m; ++i) out.bare_energies[i] = model.energies[levels[i]];
    out.quasi_energies.resize(m, np);
    out.p0_weight.resize(m, np);
    out.replica_index.resize(m, np);
    out.modes.assign(np, {});
    out.crossing_flag.assign(m, std::vector<bool>(std::max(np - 1, 0), false));
    out.omega_d = cfg.omega_d;
    out.n_rep = cfg.n_rep;
    out.sys_dim = model.dim();
    out.slope_bound = 0.5 * model.charge_norm();

    auto record = [&](int col, const std::vector<BranchState>& states) {
        out.modes[col].resize(m);
        for (int i = 0; i < m; ++i) {
            const BranchState& s = states[i];
            const double ew = engine.edge_weight(s.vec);
            require(ew < cfg.edge_weight_tol, ErrorCode::convergence,
                    "mode weight " + sci(ew) + " on the outermost replicas at A = " +
                        sci(out.amplitudes[col]) + "; increase n_rep");
            out.quasi_energies(i, col) = s.eps;
            out.p0_weight(i, col) = engine.block_weight(s.vec, engine.zero_block());
            out.replica_index(i, col) = engine.dominant_replica(s.vec);
            out.modes[col][i] = s.vec;
        }
    };

    auto flag_crossings = [&](int interval, const std::vector<BranchState>& prev,
                              const std::vector<BranchState>& next, double da) {
        for (int i = 0; i < m; ++i) {
            const bool fast = std::abs(next[i].eps - prev[i].eps) >
                              out.slope_bound * std::abs(da) * (1.0 + 1e-9);
            if (fast || next[i].last_overlap < 0.9) out.crossing_flag[i][interval] = true;
        }
    };

    std::vector<BranchState> origin = engine.initial_states(levels);
    record(zero_idx, origin);

    std::vector<BranchState> cur = origin;
    for (int k = zero_idx + 1; k < np; ++k) {
        std::vector<BranchState> next = engine.step(cur, a_grid[k - 1], a_grid[k], 0);
        flag_crossings(k - 1, cur, next, a_grid[k] - a_grid[k - 1]);
        record(k, next);
        cur = std::move(next);
    }
    cur = origin;
    for (int k = zero_idx - 1; k >= 0; --k) {
        std::vector<BranchState> next = engine.step(cur, a_grid[k + 1], a_grid[k], 0);
        flag_crossings(k, next, cur, a_grid[k + 1] - a_grid[k]);
        record(k, next);
        cur = std::move(next);
    }
    return out;
}

namespace {

std::vector<double> auto_grid(const SystemModel& model, const FloquetConfig& cfg, double a) {
    if (a == 0.0) return {0.0};
    const double qn = std::max(model.charge_norm(), 1e-300);
    const double step = 0.02 * std::min(cfg.omega_d, model.omega_q()) / qn;
    const int n = std::max(8, static_cast<int>(std::ceil(std::abs(a) / step)));
    std::vector<double> grid(n + 1);
    for (int k = 0; k <= n; ++k) grid[k] = a * static_cast<double>(k) / n;
    if (a < 0.0) std::reverse(grid.begin(), grid.end());
    return grid;
}

} // namespace

FloquetSpectrum spectrum_at(const SystemModel& model, double amplitude, const FloquetConfig& cfg,
                            bool check_replica_convergence) {
    std::vector<double> grid = auto_grid(model, cfg, amplitude);
    FloquetSpectrum sp = track_branches(model, grid, cfg);
    if (check_replica_convergence) {
        const double shift = replica_doubling_shift(model, sp, amplitude, cfg);
        require(shift <= cfg.convergence_tol, ErrorCode::convergence,
                "quasi-energies moved by relative " + sci(shift) +
                    " under replica doubling; increase n_rep");
    }
    return sp;
}

double replica_doubling_shift(const SystemModel& model, const FloquetSpectrum& spectrum, double a,
                              const FloquetConfig& cfg) {
    const int col = spectrum.point_index(a);
    require(col >= 0, ErrorCode::invalid_argument, "replica_doubling_shift: amplitude not tracked");
    FloquetConfig big = cfg;
    big.n_rep = 2 * cfg.n_rep;
    Engine engine(model, big, big.n_rep);
    EighResult sol = engine.solve(a);
    const int d = model.dim();
    const int pad = cfg.n_rep * d; // small matrix sits centered in the doubled one
    const int small_dim = d * (2 * cfg.n_rep + 1);

    double worst = 0.0;
    for (size_t i = 0; i < spectrum.levels.size(); ++i) {
        Eigen::VectorXcd embedded = Eigen::VectorXcd::Zero(engine.dim());
        embedded.segment(pad, small_dim) = spectrum.modes[col][i];
        Eigen::VectorXd ov = (sol.vectors.adjoint() * embedded).cwiseAbs();
        int best = 0;
        ov.maxCoeff(&best);
        const double eps_small = spectrum.quasi_energies(static_cast<int>(i), col);
        const double shift =
            std::abs(sol.values[best] - eps_small) / std::max(std::abs(eps_small), cfg.omega_d);
        worst = std::max(worst, shift);
    }
    return worst;
}

double dressed_polarization_from(const FloquetSpectrum& spectrum, double amplitude,
                                 int bare_state) {
    require(bare_state >= 0 && bare_state < spectrum.sys_dim, ErrorCode::invalid_argument,
            "bare_state out of range");
    Eigen::VectorXcd u0 = spectrum.mode_at_t0(0, amplitude);
    Eigen::VectorXcd u1 = spectrum.mode_at_t0(1, amplitude);
    return std::norm(u1[bare_state]) - std::norm(u0[bare_state]);
}

double dressed_initial_polarization(const SystemModel& model, double amplitude,
                                    const FloquetConfig& cfg, int bare_state) {
    require(bare_state >= 0 && bare_state < model.dim(), ErrorCode::invalid_argument,
            "bare_state out of range");
    FloquetConfig local = cfg;
    local.track_levels = {0, 1};
    FloquetSpectrum sp = spectrum_at(model, amplitude, local, false);
    return dressed_polarization_from(sp, amplitude, bare_state);
}

Eigen::VectorXd static_spectrum(const SystemModel& model, double amplitude) {
    Eigen::MatrixXcd h = model.charge_op * amplitude;
    h += model.energies.cast<cd>().asDiagonal();
    return eigvalsh(h);
}

} // namespace flqr
