#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "flqr/couplings.hpp"
#include "flqr/system_model.hpp"

namespace flqr {

enum class Frame { rotating, lab };

struct SimConfig {
    int fock_dim = 30;
    double dt = 0.0; // 0: derived from the largest frequency in the frame
    Frame frame = Frame::rotating;
    bool drop_counter_rotating_cavity_drive = true; // rotating frame only
    int record_stride = 0; // 0: record exactly on the requested t_grid
    long max_dim = 0;      // caps the vectorized density-matrix size
};

struct SimResult {
    std::vector<double> times;
    std::vector<std::complex<double>> expect_a; // reported in the omega_d frame
    Eigen::MatrixXd populations;                // (system level, time)
    std::vector<double> photon_number;
    double trace_error = 0.0;       // max |tr(rho) - 1|
    double hermiticity_error = 0.0; // max |rho - rho^dag|
    double nphoton_max = 0.0;
    double min_eigenvalue = 0.0; // most negative rho eigenvalue seen in spot checks
    double dt = 0.0;

    double sigma_z(int k) const { return populations(1, k) - populations(0, k); }
};

// Fixed-step RK4 evolution of the system (x) cavity density matrix under
//   drho/dt = -i[H(t), rho] + kappa (a rho a^dag - {a^dag a, rho}/2),
// starting from |initial_level> (x) vacuum. Deterministic for a given
// configuration.
SimResult simulate(const SystemModel& model, double g_perp, double omega_r, double kappa,
                   const DrivePlan& plan, int initial_level, std::span<const double> t_grid,
                   const SimConfig& cfg);

// SNR(t_grid.back()) per drive plan, both initial states simulated per point.
std::vector<double> sweep_snr_numeric(const SystemModel& model, double g_perp, double omega_r,
                                      double kappa, std::span<const DrivePlan> plans,
                                      std::span<const double> t_grid, const SimConfig& cfg,
                                      int jobs = 1);

} // namespace flqr
