#pragma once

#include <string>

#include <Eigen/Dense>

namespace flqr {

// A diagonalized device: eigenenergies plus the charge-operator matrix
// elements in the energy eigenbasis. Energies are in the model's natural
// unit (omega_q for the charge qubit, Delta for the double dot, E_J for
// transmon/fluxonium), hbar = 1. Immutable after construction.
struct SystemModel {
    std::string label;
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXcd charge_op;

    int dim() const { return static_cast<int>(energies.size()); }
    double omega_q() const { return energies[1] - energies[0]; }
    bool charge_op_is_real() const;
    // Spectral norm of the charge operator; bounds |d eps/d A| by 1/2 * this.
    double charge_norm() const;
    // Lowest-m submodel, used by the master-equation oracle.
    SystemModel truncated(int m) const;
};

struct ChargeQubitParams {
    double omega_q = 1.0;
};

struct FloppingParams {
    double delta = 1.0; // Zeeman splitting, the energy unit
    double epsilon0 = 0.0;
    double t_sc = 1.0;
    double t_sf = 0.0;
};

struct TransmonParams {
    double e_c = 0.0077; // units of E_J
    double e_j = 1.0;
    double flux = 0.128; // Phi_ext / Phi_0
    int n_max = 30;      // charge-basis cutoff, basis dim = 2*n_max+1
    int levels = 25;     // retained level count
};

struct FluxoniumParams {
    double e_c = 0.25; // units of E_J
    double e_j = 1.0;
    double e_l = 0.25;
    double flux = 0.5;    // Phi_ext / Phi_0
    int basis_size = 120; // oscillator basis
    int levels = 10;
};

SystemModel build_charge_qubit(double omega_q);
SystemModel build_flopping_mode(const FloppingParams& p);
SystemModel build_transmon(const TransmonParams& p);
SystemModel build_fluxonium(const FluxoniumParams& p);

// Large-E_J/E_C reference values, validation only.
struct TransmonAsymptotics {
    double energy(int j) const;            // E_j
    double n_element(int j) const;         // |<j+1|n|j>|
    double omega_q() const;                // sqrt(8 E_J_eff E_C) - E_C
    double e_c = 0.0, e_j_eff = 0.0;
};

TransmonAsymptotics transmon_asymptotics(double e_c, double e_j_eff);

double transmon_effective_ej(double e_j, double flux);

} // namespace flqr
