#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "flqr/couplings.hpp"

namespace flqr {

struct TrajectoryParams {
    ReadoutCouplings rc;
    DrivePlan plan;
    double sigma_z0 = 1.0; // dressed initial polarization
    double kappa = 0.0;
    std::vector<double> t_grid; // ascending from 0
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::complex<double>> a;         // <a(t)> in the omega_d frame
    std::vector<std::complex<double>> a_sigma_z; // <a sigma_z~(t)>, empty if not computed
    std::string label;
};

struct SnrCurve {
    std::vector<double> times;
    std::vector<double> snr; // nonnegative, nondecreasing, snr[0] = 0
};

// Normal-mode closed form of the pointer-state motion, including cavity
// tone, frame detuning and Purcell decay. Falls back to an exact
// exponential integrator of the underlying linear system when the normal-
// mode recombination degenerates (|gamma + 2i chi| ~ 0).
Trajectory analytic_trajectory(const TrajectoryParams& p);

// Dispersive protocol closed form (qubit undriven, cavity driven with
// phi = 3pi/2 at omega_d = omega_r, Purcell neglected).
Trajectory dispersive_trajectory(double a_r, double chi, double kappa, double sigma_z0,
                                 std::span<const double> t_grid);

// Stationary pointer neglecting qubit-cavity entanglement.
std::complex<double> steady_state_pointer(const ReadoutCouplings& rc, const DrivePlan& plan,
                                          double sigma_z);

// SNR(t) = sqrt(2 kappa int_0^t |<a>_up - <a>_down|^2 dtau), trapezoidal.
SnrCurve snr(const Trajectory& up, const Trajectory& down, double kappa);

// Cavity drive amplitude such that the dispersive steady-state splitting
// matches the longitudinal one.
double match_dispersive_amplitude(const ReadoutCouplings& rc_long, const DrivePlan& plan_long,
                                  double chi_disp, double kappa);

std::vector<double> make_time_grid(double t_max, int points);

} // namespace flqr
