/* C interface to the Floquet readout toolkit.
 *
 * All functions return flqr_status; on failure flqr_last_error() carries a
 * thread-local description. Objects returned through out-parameters are
 * owned by the caller and released with the matching *_free function.
 * Energies are in the model's natural unit (hbar = 1).
 */
#ifndef FLOQUET_READOUT_H
#define FLOQUET_READOUT_H

#include <stddef.h>

#if defined(_WIN32)
#define FLQR_API __declspec(dllexport)
#else
#define FLQR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum flqr_status {
    FLQR_OK = 0,
    FLQR_ERR_INVALID_ARGUMENT = 1,
    FLQR_ERR_CONVERGENCE = 2,
    FLQR_ERR_NEAR_RESONANCE = 3,
    FLQR_ERR_AMBIGUOUS_BRANCH = 4,
    FLQR_ERR_DIMENSION_LIMIT = 5,
    FLQR_ERR_TRUNCATION = 6,
    FLQR_ERR_IO = 7,
    FLQR_ERR_INTERNAL = 8
} flqr_status;

typedef struct flqr_model flqr_model;
typedef struct flqr_spectrum flqr_spectrum;

FLQR_API const char* flqr_version(void);
FLQR_API const char* flqr_last_error(void);

/* ---- device models ---------------------------------------------------- */

FLQR_API flqr_status flqr_model_charge_qubit(double omega_q, flqr_model** out);
FLQR_API flqr_status flqr_model_flopping(double delta, double epsilon0, double t_sc, double t_sf,
                                         flqr_model** out);
FLQR_API flqr_status flqr_model_transmon(double e_c_over_e_j, double flux, int n_max, int levels,
                                         flqr_model** out);
FLQR_API flqr_status flqr_model_fluxonium(double e_c_over_e_j, double e_l_over_e_j, double flux,
                                          int basis_size, int levels, flqr_model** out);
FLQR_API void flqr_model_free(flqr_model* model);

FLQR_API int flqr_model_dim(const flqr_model* model);
FLQR_API double flqr_model_energy(const flqr_model* model, int level);
FLQR_API flqr_status flqr_model_charge_element(const flqr_model* model, int i, int j, double* re,
                                               double* im);

/* ---- Floquet spectrum -------------------------------------------------- */

/* Branch-tracked quasi-energies over a_grid (ascending, containing 0). */
FLQR_API flqr_status flqr_spectrum_track(const flqr_model* model, double omega_d, int n_rep,
                                         const double* a_grid, size_t n_points,
                                         flqr_spectrum** out);
FLQR_API void flqr_spectrum_free(flqr_spectrum* spectrum);
FLQR_API flqr_status flqr_spectrum_quasi_energy(const flqr_spectrum* spectrum, int level,
                                                double a, double* out);

/* <sigma_z~(0)> of a bare initial state at drive amplitude a. */
FLQR_API flqr_status flqr_dressed_polarization(const flqr_model* model, double omega_d, int n_rep,
                                               double a, int bare_state, double* out);

/* ---- couplings --------------------------------------------------------- */

typedef struct flqr_couplings {
    double g_par;   /* (g_par_1 - g_par_0)/2 */
    double g_bar;   /* (g_par_1 + g_par_0)/2 */
    double chi;     /* (chi_1 - chi_0)/2 */
    double chi_bar; /* (chi_1 + chi_0)/2 */
    double epsilon; /* (eps_1 - eps_0)/2 at a_q */
    double gamma;   /* Purcell rate */
    double g_perp, kappa, omega_d, omega_r, a_q;
} flqr_couplings;

typedef struct flqr_drive_plan {
    double a_q, a_r, phi, omega_d;
} flqr_drive_plan;

FLQR_API flqr_status flqr_couplings_compute(const flqr_model* model, double omega_d, double a_q,
                                            double g_perp, double kappa, double omega_r,
                                            double fd_step, int n_rep, flqr_couplings* out);
FLQR_API flqr_status flqr_compensation_tone(const flqr_couplings* couplings, double omega_r,
                                            flqr_drive_plan* out);
FLQR_API flqr_status flqr_small_drive_couplings(double omega_q, double omega_d, double g_perp,
                                                double a_q, double* g_par0, double* chi0);

/* ---- cavity dynamics --------------------------------------------------- */

FLQR_API flqr_status flqr_trajectory_analytic(const flqr_couplings* couplings,
                                              const flqr_drive_plan* plan, double sigma_z0,
                                              double kappa, const double* t, size_t n,
                                              double* re_a, double* im_a);
FLQR_API flqr_status flqr_steady_state_pointer(const flqr_couplings* couplings,
                                               const flqr_drive_plan* plan, double sigma_z,
                                               double* re_a, double* im_a);
FLQR_API flqr_status flqr_snr(const double* t, const double* re_up, const double* im_up,
                              const double* re_dn, const double* im_dn, size_t n, double kappa,
                              double* snr_out);

/* ---- master-equation oracle -------------------------------------------- */

typedef struct flqr_sim_config {
    int fock_dim;                    /* photon levels, >= 6 */
    double dt;                       /* integrator step; 0 selects it */
    int lab_frame;                   /* 0: frame rotating at omega_d */
    int keep_counter_rotating_drive; /* rotating frame only */
} flqr_sim_config;

FLQR_API flqr_status flqr_simulate(const flqr_model* model, double g_perp, double omega_r,
                                   double kappa, const flqr_drive_plan* plan, int initial_level,
                                   const double* t, size_t n, const flqr_sim_config* config,
                                   double* re_a, double* im_a, double* sigma_z, double* photon);

/* ---- configuration-driven commands ------------------------------------- */

/* subcommand: spectrum | couplings | trajectory | snr | models.
 * oracle_mode: "" (use config) | "off" | "on" | "subset". */
FLQR_API flqr_status flqr_run_command(const char* subcommand, const char* config_path,
                                      const char* out_dir, int jobs, const char* oracle_mode,
                                      char* summary, size_t summary_len);

/* Acceptance suite; prints one line per criterion to stdout. */
FLQR_API flqr_status flqr_validate(int jobs, int* n_failed);

#ifdef __cplusplus
}
#endif

#endif /* FLOQUET_READOUT_H */
