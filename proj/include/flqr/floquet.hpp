#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "flqr/system_model.hpp"

namespace flqr {

struct FloquetConfig {
    int n_rep = 41;     // replica half-width; matrix spans p in [-n_rep, n_rep]
    double omega_d = 1.0;
    double convergence_tol = 1e-6; // relative quasi-energy tolerance under n_rep doubling
    double edge_weight_tol = 1e-6; // max mode weight on the two outermost replicas
    double overlap_threshold = 0.5;
    int max_bisections = 6;        // internal grid refinement on ambiguous assignment
    std::vector<int> track_levels; // empty: all system levels
    long max_dim = 0;              // 0: FLOQUET_READOUT_MAX_DIM env or 40000
};

// Branch-tracked quasi-energies and Floquet modes on a real amplitude grid.
// Quasi-energies are the raw (unfolded) eigenvalues of the tracked branches,
// equal to the bare E_j at A = 0.
struct FloquetSpectrum {
    std::vector<double> amplitudes; // ascending, contains 0
    std::vector<int> levels;        // tracked system levels
    Eigen::VectorXd bare_energies;  // per tracked level
    Eigen::MatrixXd quasi_energies; // (level, grid point)
    Eigen::MatrixXd p0_weight;      // mode weight on the zero replica
    Eigen::MatrixXi replica_index;  // dominant replica per (level, grid point)
    std::vector<std::vector<Eigen::VectorXcd>> modes; // [point][level], extended space
    std::vector<std::vector<bool>> crossing_flag;     // [level][interval]
    double omega_d = 0.0;
    int n_rep = 0;
    int sys_dim = 0;
    double slope_bound = 0.0; // 0.5 * ||Q||

    int point_index(double a) const;              // -1 if absent
    int level_row(int level) const;               // -1 if untracked
    double quasi_energy(int level, double a) const;
    // System-space mode at t = 0 (Fourier sum of the replica blocks).
    Eigen::VectorXcd mode_at_t0(int level, double a) const;
};

// Extended-space Floquet matrix: diagonal blocks H_sys + p*omega_d, coupling
// blocks (A*/2) Q above and (A/2) Q below the diagonal, replica label
// descending from +n_rep in the first block row.
Eigen::MatrixXcd build_floquet_matrix(const SystemModel& model, std::complex<double> amplitude,
                                      const FloquetConfig& cfg);

FloquetSpectrum track_branches(const SystemModel& model, std::span<const double> a_grid,
                               const FloquetConfig& cfg);

// Single-point slice, continued from A = 0 on an internally generated grid.
// With check_replica_convergence the point is re-solved at 2*n_rep and the
// tracked quasi-energies are required to agree within convergence_tol.
FloquetSpectrum spectrum_at(const SystemModel& model, double amplitude, const FloquetConfig& cfg,
                            bool check_replica_convergence = true);

// Max relative shift of the tracked quasi-energies at `a` when the replica
// count is doubled.
double replica_doubling_shift(const SystemModel& model, const FloquetSpectrum& spectrum, double a,
                              const FloquetConfig& cfg);

// <sigma_z~(0)> of a bare initial state against the two tracked logical
// branches: |<u_1(0)|j>|^2 - |<u_0(0)|j>|^2.
double dressed_initial_polarization(const SystemModel& model, double amplitude,
                                    const FloquetConfig& cfg, int bare_state);

// Same, from an already tracked spectrum containing levels 0 and 1.
double dressed_polarization_from(const FloquetSpectrum& spectrum, double amplitude,
                                 int bare_state);

// Static (omega_d -> 0) reference: eigenvalues of H_sys + A*Q.
Eigen::VectorXd static_spectrum(const SystemModel& model, double amplitude);

} // namespace flqr
