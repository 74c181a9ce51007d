#include "flqr/runner.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "flqr/csv.hpp"
#include "flqr/error.hpp"
#include "flqr/lindblad.hpp"
#include "flqr/parallel.hpp"

namespace flqr {

namespace fs = std::filesystem;

namespace {

std::string out_path(const RunContext& ctx, const std::string& name) {
    fs::path dir = ctx.out_dir.empty() ? fs::path(".") : fs::path(ctx.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, ErrorCode::io, "cannot create output directory " + dir.string());
    return (dir / name).string();
}

std::string resolved_oracle_mode(const RunContext& ctx) {
    if (!ctx.oracle_mode.empty()) return ctx.oracle_mode;
    return ctx.cfg.oracle_mode;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
    return v;
}

std::vector<double> axis_or(const std::vector<double>& axis, double fallback) {
    if (!axis.empty()) return axis;
    return {fallback};
}

} // namespace

PointSolution solve_point(const RunConfig& cfg, double omega_d, double a_q, bool compensation) {
    FloquetConfig fcfg = cfg.floquet_config(omega_d);
    std::vector<double> one{a_q};
    std::vector<double> grid = coupling_grid(cfg.model, fcfg, one, cfg.fd_step);
    FloquetSpectrum sp = track_branches(cfg.model, grid, fcfg);
    LevelCouplings lc = level_couplings(sp, cfg.g_perp, a_q, cfg.fd_step);
    PointSolution out;
    out.rc = reduce_two_level(lc, {0, 1}, cfg.g_perp, cfg.kappa, omega_d, cfg.omega_r);
    if (compensation) {
        out.plan = compensation_tone(out.rc, cfg.omega_r);
    } else {
        out.plan.a_q = a_q;
        out.plan.a_r = cfg.a_r_set ? cfg.a_r : 0.0;
        out.plan.phi = 0.0;
        out.plan.omega_d = omega_d;
    }
    if (cfg.dressed_sigma_z0) {
        out.s0_up = dressed_polarization_from(sp, a_q, 1);
        out.s0_dn = dressed_polarization_from(sp, a_q, 0);
    }
    return out;
}

std::string cmd_spectrum(const RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    FloquetConfig fcfg = cfg.floquet_config(cfg.omega_d);
    std::vector<double> grid = linspace(0.0, cfg.spectrum_a_max, cfg.spectrum_points);
    FloquetSpectrum sp = track_branches(cfg.model, grid, fcfg);

    std::vector<std::string> cols{"A", "level", "quasi_energy", "replica_weight_p0"};
    if (cfg.spectrum_static_column) cols.push_back("static_energy");
    CsvWriter csv(out_path(ctx, "spectrum.csv"), cols);
    for (size_t k = 0; k < grid.size(); ++k) {
        Eigen::VectorXd stat;
        if (cfg.spectrum_static_column) stat = static_spectrum(cfg.model, grid[k]);
        for (size_t i = 0; i < sp.levels.size(); ++i) {
            std::vector<std::string> row{
                csv_float(grid[k]),
                csv_int(sp.levels[i]),
                csv_float(sp.quasi_energies(static_cast<int>(i), static_cast<int>(k))),
                csv_float(sp.p0_weight(static_cast<int>(i), static_cast<int>(k))),
            };
            if (cfg.spectrum_static_column) row.push_back(csv_float(stat[sp.levels[i]]));
            csv.row(row);
        }
    }
    return "spectrum: " + std::to_string(grid.size()) + " amplitudes x " +
           std::to_string(sp.levels.size()) + " levels -> spectrum.csv";
}

std::string cmd_couplings(const RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const double wq = cfg.model.omega_q();
    const std::vector<double> omegas = axis_or(cfg.sweep_omega_r, cfg.omega_d);
    const std::vector<double> aqs = axis_or(cfg.sweep_a_q, cfg.a_q);

    struct Row {
        double omega_d, a_q;
        double g_par = 0, g_bar = 0, chi = 0, chi_bar = 0, gamma = 0, g0 = 0, chi0 = 0;
        std::string reason;
    };
    std::vector<std::vector<Row>> rows(omegas.size());

    parallel_for(static_cast<int>(omegas.size()), ctx.jobs, [&](int iw) {
        const double omega_d = omegas[iw];
        FloquetConfig fcfg = cfg.floquet_config(omega_d);
        rows[iw].resize(aqs.size());
        // one tracked spectrum per drive frequency covers every stencil
        std::vector<double> grid = coupling_grid(cfg.model, fcfg, aqs, cfg.fd_step);
        FloquetSpectrum sp = track_branches(cfg.model, grid, fcfg);
        for (size_t ia = 0; ia < aqs.size(); ++ia) {
            Row& r = rows[iw][ia];
            r.omega_d = omega_d;
            r.a_q = aqs[ia];
            const double nan = std::nan("");
            try {
                LevelCouplings lc = level_couplings(sp, cfg.g_perp, aqs[ia], cfg.fd_step);
                ReadoutCouplings rc =
                    reduce_two_level(lc, {0, 1}, cfg.g_perp, cfg.kappa, omega_d, cfg.omega_r);
                r.g_par = rc.g_par;
                r.g_bar = rc.g_bar;
                r.chi = rc.chi;
                r.chi_bar = rc.chi_bar;
                r.gamma = rc.gamma;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::near_resonance) throw;
                r.g_par = r.g_bar = r.chi = r.chi_bar = r.gamma = nan;
                r.reason = e.what();
                for (char& ch : r.reason)
                    if (ch == ',') ch = ';';
            }
            try {
                auto [g0, chi0] = small_drive_couplings(wq, omega_d, cfg.g_perp, aqs[ia]);
                r.g0 = g0;
                r.chi0 = chi0;
            } catch (const Error&) {
                r.g0 = r.chi0 = nan;
                if (r.reason.empty()) r.reason = "small-drive reference resonant";
            }
        }
    });

    CsvWriter csv(out_path(ctx, "couplings.csv"),
                  {"omega_d_over_omega_q", "A_q", "g_par", "g_bar", "chi", "chi_bar", "gamma",
                   "g_par_0th", "chi_0th", "reason"});
    for (const auto& block : rows)
        for (const Row& r : block)
            csv.row({csv_float(r.omega_d / wq), csv_float(r.a_q), csv_float(r.g_par),
                     csv_float(r.g_bar), csv_float(r.chi), csv_float(r.chi_bar),
                     csv_float(r.gamma), csv_float(r.g0), csv_float(r.chi0), r.reason});
    return "couplings: " + std::to_string(omegas.size() * aqs.size()) + " points -> couplings.csv";
}

namespace {

struct TrajectoryBundle {
    Trajectory up, dn;
    SnrCurve snr_curve;
};

TrajectoryBundle analytic_bundle(const RunConfig& cfg, const PointSolution& sol,
                                 const std::vector<double>& t_grid) {
    TrajectoryParams p;
    p.rc = sol.rc;
    p.plan = sol.plan;
    p.kappa = cfg.kappa;
    p.t_grid = t_grid;
    TrajectoryBundle b;
    p.sigma_z0 = sol.s0_up;
    b.up = analytic_trajectory(p);
    p.sigma_z0 = sol.s0_dn;
    b.dn = analytic_trajectory(p);
    b.snr_curve = snr(b.up, b.dn, cfg.kappa);
    return b;
}

// dispersive protocol: qubit undriven, cavity tone at phi = 3pi/2 matched to
// the longitudinal steady splitting unless an explicit a_r is configured
PointSolution dispersive_point(const RunConfig& cfg, const PointSolution& longitudinal) {
    PointSolution disp = solve_point(cfg, cfg.omega_r, 0.0, false);
    double a_r = cfg.a_r;
    if (!cfg.a_r_set)
        a_r = match_dispersive_amplitude(longitudinal.rc, longitudinal.plan, disp.rc.chi,
                                         cfg.kappa);
    disp.plan.a_q = 0.0;
    disp.plan.a_r = a_r;
    disp.plan.phi = 1.5 * std::numbers::pi;
    disp.plan.omega_d = cfg.omega_r;
    disp.s0_up = 1.0;
    disp.s0_dn = -1.0;
    return disp;
}

} // namespace

std::string cmd_trajectory(const RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const std::vector<double> t_grid = make_time_grid(cfg.t_max_kappa / cfg.kappa, cfg.t_points);

    PointSolution sol = solve_point(cfg, cfg.omega_d, cfg.a_q, cfg.compensation);
    if (cfg.dispersive) sol = dispersive_point(cfg, sol);
    TrajectoryBundle b = analytic_bundle(cfg, sol, t_grid);

    {
        CsvWriter csv(out_path(ctx, "trajectory.csv"),
                      {"t", "re_a_up", "im_a_up", "re_a_down", "im_a_down", "snr"});
        for (size_t k = 0; k < t_grid.size(); ++k)
            csv.row({csv_float(t_grid[k]), csv_float(b.up.a[k].real()),
                     csv_float(b.up.a[k].imag()), csv_float(b.dn.a[k].real()),
                     csv_float(b.dn.a[k].imag()), csv_float(b.snr_curve.snr[k])});
    }
    {
        CsvWriter csv(out_path(ctx, "phase_space.csv"),
                      {"re_a_up", "im_a_up", "re_a_down", "im_a_down"});
        for (size_t k = 0; k < t_grid.size(); ++k)
            csv.row({csv_float(b.up.a[k].real()), csv_float(b.up.a[k].imag()),
                     csv_float(b.dn.a[k].real()), csv_float(b.dn.a[k].imag())});
    }

    std::string summary = "trajectory: analytic -> trajectory.csv";
    if (resolved_oracle_mode(ctx) != "off") {
        SystemModel om = cfg.oracle_model();
        SimConfig sim = cfg.sim_config();
        SimResult up, dn;
        parallel_for(2, std::min(ctx.jobs, 2), [&](int i) {
            SimResult r = simulate(om, cfg.g_perp, cfg.omega_r, cfg.kappa, sol.plan, i == 0 ? 1 : 0,
                                   t_grid, sim);
            (i == 0 ? up : dn) = std::move(r);
        });
        Trajectory ou, od;
        ou.times = t_grid;
        od.times = t_grid;
        ou.a = up.expect_a;
        od.a = dn.expect_a;
        SnrCurve osnr = snr(ou, od, cfg.kappa);
        const double trace_err = std::max(up.trace_error, dn.trace_error);
        const double nmax = std::max(up.nphoton_max, dn.nphoton_max);
        CsvWriter csv(out_path(ctx, "trajectory_oracle.csv"),
                      {"t", "re_a_up", "im_a_up", "re_a_down", "im_a_down", "snr", "trace_error",
                       "nphoton_max"});
        for (size_t k = 0; k < t_grid.size(); ++k)
            csv.row({csv_float(t_grid[k]), csv_float(up.expect_a[k].real()),
                     csv_float(up.expect_a[k].imag()), csv_float(dn.expect_a[k].real()),
                     csv_float(dn.expect_a[k].imag()), csv_float(osnr.snr[k]),
                     csv_float(trace_err), csv_float(nmax)});

        // deviation summary: max |analytic - oracle| over the steady splitting
        double dev = 0.0;
        for (size_t k = 0; k < t_grid.size(); ++k)
            dev = std::max({dev, std::abs(b.up.a[k] - up.expect_a[k]),
                            std::abs(b.dn.a[k] - dn.expect_a[k])});
        const double steady = std::abs(steady_state_pointer(sol.rc, sol.plan, sol.s0_up) -
                                       steady_state_pointer(sol.rc, sol.plan, sol.s0_dn));
        CsvWriter sum(out_path(ctx, "trajectory_summary.csv"),
                      {"max_abs_deviation", "steady_splitting", "deviation_over_splitting"});
        sum.row({csv_float(dev), csv_float(steady),
                 csv_float(steady > 0.0 ? dev / steady : std::nan(""))});
        summary += " + oracle overlay (deviation/splitting = " +
                   csv_float(steady > 0.0 ? dev / steady : std::nan("")) + ")";
    }
    return summary;
}

std::string cmd_snr(const RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const double wq = cfg.model.omega_q();
    const double t_star = cfg.snr_time_kappa / cfg.kappa;
    const std::vector<double> t_grid = make_time_grid(t_star, cfg.t_points);
    const std::vector<double> omegas = axis_or(cfg.sweep_omega_r, cfg.omega_r);
    const std::vector<double> aqs = axis_or(cfg.sweep_a_q, cfg.a_q);
    const std::string oracle = resolved_oracle_mode(ctx);

    struct Row {
        std::string protocol = "longitudinal";
        double omega_r = 0, a_q = 0;
        double snr_analytic = std::nan("");
        double snr_oracle = std::nan("");
        PointSolution sol;
        bool ok = false;
    };
    std::vector<Row> rows(omegas.size() * aqs.size());

    parallel_for(static_cast<int>(omegas.size()), ctx.jobs, [&](int iw) {
        RunConfig local = cfg;
        local.omega_r = omegas[iw];
        FloquetConfig fcfg = cfg.floquet_config(omegas[iw]);
        std::vector<double> grid = coupling_grid(cfg.model, fcfg, aqs, cfg.fd_step);
        FloquetSpectrum sp = track_branches(cfg.model, grid, fcfg);
        for (size_t ia = 0; ia < aqs.size(); ++ia) {
            Row& r = rows[iw * aqs.size() + ia];
            r.omega_r = omegas[iw];
            r.a_q = aqs[ia];
            try {
                LevelCouplings lc = level_couplings(sp, cfg.g_perp, aqs[ia], cfg.fd_step);
                r.sol.rc = reduce_two_level(lc, {0, 1}, cfg.g_perp, cfg.kappa, omegas[iw],
                                            omegas[iw]);
                r.sol.plan = cfg.compensation ? compensation_tone(r.sol.rc, omegas[iw])
                                              : DrivePlan{aqs[ia], 0.0, 0.0, omegas[iw]};
                if (cfg.dressed_sigma_z0) {
                    r.sol.s0_up = dressed_polarization_from(sp, aqs[ia], 1);
                    r.sol.s0_dn = dressed_polarization_from(sp, aqs[ia], 0);
                }
                TrajectoryBundle b = analytic_bundle(local, r.sol, t_grid);
                r.snr_analytic = b.snr_curve.snr.back();
                r.ok = true;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::near_resonance) throw;
            }
        }
    });

    if (oracle != "off") {
        std::vector<int> picks;
        const int stride = oracle == "on" ? 1 : std::max(1, cfg.oracle_subset_stride);
        for (size_t k = 0; k < rows.size(); k += stride)
            if (rows[k].ok) picks.push_back(static_cast<int>(k));
        SystemModel om = cfg.oracle_model();
        SimConfig sim = cfg.sim_config();
        parallel_for(static_cast<int>(picks.size()), ctx.jobs, [&](int ip) {
            Row& r = rows[picks[ip]];
            std::vector<DrivePlan> plans{r.sol.plan};
            std::vector<double> snrs = sweep_snr_numeric(om, cfg.g_perp, r.omega_r, cfg.kappa,
                                                         plans, t_grid, sim, 1);
            r.snr_oracle = snrs[0];
        });
    }

    std::vector<Row> extra;
    if (cfg.dispersive) {
        // matched-amplitude dispersive baseline at the configured point
        PointSolution longitudinal = solve_point(cfg, cfg.omega_r, cfg.a_q, cfg.compensation);
        PointSolution disp = dispersive_point(cfg, longitudinal);
        Row r;
        r.protocol = "dispersive";
        r.omega_r = cfg.omega_r;
        r.a_q = 0.0;
        r.sol = disp;
        TrajectoryBundle b = analytic_bundle(cfg, disp, t_grid);
        r.snr_analytic = b.snr_curve.snr.back();
        if (oracle != "off") {
            std::vector<DrivePlan> plans{disp.plan};
            r.snr_oracle = sweep_snr_numeric(cfg.oracle_model(), cfg.g_perp, cfg.omega_r,
                                             cfg.kappa, plans, t_grid, cfg.sim_config(),
                                             ctx.jobs)[0];
        }
        extra.push_back(std::move(r));
    }

    CsvWriter csv(out_path(ctx, "snr.csv"),
                  {"protocol", "omega_r_over_omega_q", "A_q", "snr", "snr_oracle"});
    for (const Row& r : rows)
        csv.row({r.protocol, csv_float(r.omega_r / wq), csv_float(r.a_q),
                 csv_float(r.snr_analytic), csv_float(r.snr_oracle)});
    for (const Row& r : extra)
        csv.row({r.protocol, csv_float(r.omega_r / wq), csv_float(r.a_q),
                 csv_float(r.snr_analytic), csv_float(r.snr_oracle)});
    return "snr: " + std::to_string(rows.size() + extra.size()) + " points -> snr.csv";
}

std::string cmd_models(const RunContext& ctx) {
    const SystemModel& m = ctx.cfg.model;
    CsvWriter csv(out_path(ctx, "models.csv"), {"level", "energy", "abs_q_0j"});
    for (int j = 0; j < m.dim(); ++j)
        csv.row({csv_int(j), csv_float(m.energies[j]), csv_float(std::abs(m.charge_op(0, j)))});
    return m.label + ": dim " + std::to_string(m.dim()) + ", omega_q " + csv_float(m.omega_q()) +
           ", |Q_01| " + csv_float(std::abs(m.charge_op(0, 1))) + " -> models.csv";
}

std::string run_command(const std::string& name, const std::string& config_path,
                        const std::string& out_dir, int jobs, const std::string& oracle_mode) {
    RunContext ctx;
    ctx.cfg = load_run_config(config_path);
    ctx.out_dir = out_dir;
    ctx.jobs = jobs;
    ctx.oracle_mode = oracle_mode;
    if (name == "spectrum") return cmd_spectrum(ctx);
    if (name == "couplings") return cmd_couplings(ctx);
    if (name == "trajectory") return cmd_trajectory(ctx);
    if (name == "snr") return cmd_snr(ctx);
    if (name == "models") return cmd_models(ctx);
    fail(ErrorCode::invalid_argument, "unknown subcommand '" + name + "'");
}

} // namespace flqr
