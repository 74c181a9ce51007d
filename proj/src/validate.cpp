#include "flqr/validate.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "flqr/cavity.hpp"
#include "flqr/couplings.hpp"
#include "flqr/csv.hpp"
#include "flqr/error.hpp"
#include "flqr/floquet.hpp"
#include "flqr/lindblad.hpp"
#include "flqr/parallel.hpp"
#include "flqr/system_model.hpp"

namespace flqr {

using cd = std::complex<double>;

namespace {

constexpr cd kI{0.0, 1.0};

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) ok = false;
        if (detail.tellp() > 0) detail << "; ";
        detail << (cond ? "" : "FAILED: ") << what;
    }
};

std::string fmt(double v) { return csv_float(v); }

FloquetConfig charge_cfg(double omega_d, int n_rep = 41) {
    FloquetConfig cfg;
    cfg.omega_d = omega_d;
    cfg.n_rep = n_rep;
    return cfg;
}

struct Pipeline {
    ReadoutCouplings rc;
    DrivePlan plan;
    double s0_up = 1.0, s0_dn = -1.0;
    FloquetSpectrum spectrum;
};

Pipeline solve(const SystemModel& model, FloquetConfig fcfg, double g_perp, double kappa,
               double omega_r, double a_q, double fd_step, bool compensation) {
    std::vector<double> one{a_q};
    std::vector<double> grid = coupling_grid(model, fcfg, one, fd_step);
    Pipeline p;
    p.spectrum = track_branches(model, grid, fcfg);
    LevelCouplings lc = level_couplings(p.spectrum, g_perp, a_q, fd_step);
    p.rc = reduce_two_level(lc, {0, 1}, g_perp, kappa, fcfg.omega_d, omega_r);
    p.plan = compensation ? compensation_tone(p.rc, omega_r)
                          : DrivePlan{a_q, 0.0, 0.0, fcfg.omega_d};
    p.s0_up = dressed_polarization_from(p.spectrum, a_q, 1);
    p.s0_dn = dressed_polarization_from(p.spectrum, a_q, 0);
    return p;
}

Trajectory run_analytic(const Pipeline& p, double kappa, const std::vector<double>& t, double s0) {
    TrajectoryParams tp;
    tp.rc = p.rc;
    tp.plan = p.plan;
    tp.kappa = kappa;
    tp.t_grid = t;
    tp.sigma_z0 = s0;
    return analytic_trajectory(tp);
}

// ---- criterion 1: closed-form dispersive shift ------------------------------

CriterionResult criterion_closed_form_chi(int jobs) {
    Check c;
    SystemModel q = build_charge_qubit(1.0);
    const double g_perp = 1e-2, h = 1e-4, a_q = 1e-4;
    const std::vector<double> ratios{0.5, 0.9, 1.1, 1.5};
    std::vector<double> measured(ratios.size()), expected(ratios.size());
    parallel_for(static_cast<int>(ratios.size()), jobs, [&](int i) {
        LevelCouplings lc = couplings_at(q, charge_cfg(ratios[i]), g_perp, a_q, h);
        ReadoutCouplings rc = reduce_two_level(lc, {0, 1}, g_perp, 2e-3, ratios[i], ratios[i]);
        measured[i] = rc.chi;
        expected[i] = 2.0 * g_perp * g_perp / (1.0 - ratios[i] * ratios[i]);
    });
    for (size_t i = 0; i < ratios.size(); ++i) {
        const double rel = std::abs(measured[i] - expected[i]) / std::abs(expected[i]);
        c.expect(rel < 1e-3, "omega_r/omega_q=" + fmt(ratios[i]) + " rel=" + fmt(rel));
    }
    return {1, "finite-difference chi matches 2 g^2 wq/(wq^2-wr^2) to 1e-3", c.ok,
            c.detail.str(), 0.0};
}

// ---- criterion 2: |chi0| vs kappa/2 -----------------------------------------

CriterionResult criterion_chi_matches_kappa() {
    Check c;
    const double g_perp = 1e-2, kappa = 2e-3;
    auto [g0, chi0] = small_drive_couplings(1.0, 1.1, g_perp, 0.05);
    const double rel = std::abs(std::abs(chi0) - 0.5 * kappa) / (0.5 * kappa);
    c.expect(rel < 0.05, "|chi0|=" + fmt(std::abs(chi0)) + " kappa/2=" + fmt(0.5 * kappa) +
                             " rel=" + fmt(rel));
    return {2, "|chi0| = kappa/2 within 5% at omega_r/omega_q = 1.1", c.ok, c.detail.str(), 0.0};
}

// ---- criterion 3: analytic vs oracle trajectories ---------------------------

struct TrajectoryAgreement {
    double deviation = 0.0; // max |analytic - oracle| / steady splitting
    double trace_error = 0.0, herm_error = 0.0, min_eig = 0.0, nphoton_max = 0.0;
    double com_ratio = 0.0; // compensated runs: max|com| / max|diff| (halved amplitudes)
};

TrajectoryAgreement compare_with_oracle(const SystemModel& model, const Pipeline& p,
                                        double g_perp, double omega_r, double kappa,
                                        const std::vector<double>& t, const SimConfig& sim,
                                        int jobs) {
    Trajectory au = run_analytic(p, kappa, t, p.s0_up);
    Trajectory ad = run_analytic(p, kappa, t, p.s0_dn);
    SimResult ou, od;
    parallel_for(2, std::min(jobs, 2), [&](int i) {
        SimResult r = simulate(model, g_perp, omega_r, kappa, p.plan, i == 0 ? 1 : 0, t, sim);
        (i == 0 ? ou : od) = std::move(r);
    });
    TrajectoryAgreement out;
    const double steady = std::abs(steady_state_pointer(p.rc, p.plan, p.s0_up) -
                                   steady_state_pointer(p.rc, p.plan, p.s0_dn));
    double dev = 0.0, com_a = 0.0, diff_a = 0.0;
    for (size_t k = 0; k < t.size(); ++k) {
        dev = std::max({dev, std::abs(au.a[k] - ou.expect_a[k]),
                        std::abs(ad.a[k] - od.expect_a[k])});
        com_a = std::max(com_a, 0.5 * std::abs(ou.expect_a[k] + od.expect_a[k]));
        diff_a = std::max(diff_a, 0.5 * std::abs(ou.expect_a[k] - od.expect_a[k]));
    }
    out.deviation = dev / steady;
    out.trace_error = std::max(ou.trace_error, od.trace_error);
    out.herm_error = std::max(ou.hermiticity_error, od.hermiticity_error);
    out.min_eig = std::min(ou.min_eigenvalue, od.min_eigenvalue);
    out.nphoton_max = std::max(ou.nphoton_max, od.nphoton_max);
    out.com_ratio = diff_a > 0.0 ? com_a / diff_a : 0.0;
    return out;
}

CriterionResult criterion_oracle_trajectories(int jobs) {
    Check c;
    SystemModel q = build_charge_qubit(1.0);
    const double g_perp = 1e-2, kappa = 2e-3, a_q = 0.05;
    const std::vector<double> t = make_time_grid(5.0 / kappa, 401);
    SimConfig sim;
    sim.fock_dim = 15;
    const std::vector<double> ratios{1.1, 1.15, 1.5};
    std::vector<double> devs(ratios.size());
    parallel_for(static_cast<int>(ratios.size()), jobs, [&](int i) {
        Pipeline p = solve(q, charge_cfg(ratios[i]), g_perp, kappa, ratios[i], a_q, 1e-4, false);
        TrajectoryAgreement agr = compare_with_oracle(q, p, g_perp, ratios[i], kappa, t, sim, 1);
        devs[i] = agr.deviation;
    });
    for (size_t i = 0; i < ratios.size(); ++i)
        c.expect(devs[i] <= 0.05,
                 "omega_r/omega_q=" + fmt(ratios[i]) + " deviation/splitting=" + fmt(devs[i]));
    return {3, "master-equation trajectories within 5% of the analytic ones", c.ok,
            c.detail.str(), 0.0};
}

// ---- criterion 4: longitudinal beats dispersive -----------------------------

CriterionResult criterion_snr_advantage(int jobs) {
    Check c;
    SystemModel q = build_charge_qubit(1.0);
    const double g_perp = 1e-2, kappa = 2e-3, omega_r = 1.1, a_q = 0.05;
    const std::vector<double> t = make_time_grid(0.5 / kappa, 301);

    Pipeline lng = solve(q, charge_cfg(omega_r), g_perp, kappa, omega_r, a_q, 1e-4, false);
    Trajectory lu = run_analytic(lng, kappa, t, lng.s0_up);
    Trajectory ld = run_analytic(lng, kappa, t, lng.s0_dn);
    const double snr_long = snr(lu, ld, kappa).snr.back();

    Pipeline disp = solve(q, charge_cfg(omega_r), g_perp, kappa, omega_r, 0.0, 1e-4, false);
    const double a_r = match_dispersive_amplitude(lng.rc, lng.plan, disp.rc.chi, kappa);
    disp.plan = DrivePlan{0.0, a_r, 1.5 * std::numbers::pi, omega_r};
    disp.s0_up = 1.0;
    disp.s0_dn = -1.0;
    Trajectory du = run_analytic(disp, kappa, t, 1.0);
    Trajectory dd = run_analytic(disp, kappa, t, -1.0);
    const double snr_disp = snr(du, dd, kappa).snr.back();

    const double ratio = snr_long / snr_disp;
    c.expect(ratio >= 3.5 && ratio <= 6.5, "analytic SNR ratio=" + fmt(ratio));

    // oracle spot check
    SimConfig sim;
    sim.fock_dim = 15;
    std::vector<DrivePlan> plans{lng.plan, disp.plan};
    std::vector<double> snrs = sweep_snr_numeric(q, g_perp, omega_r, kappa, plans, t, sim, jobs);
    const double oratio = snrs[0] / snrs[1];
    c.expect(oratio >= 3.5 && oratio <= 6.5, "oracle SNR ratio=" + fmt(oratio));
    return {4, "longitudinal/dispersive SNR at t = 0.5/kappa lands near 5", c.ok, c.detail.str(),
            0.0};
}

// ---- criterion 5: LZS suppression -------------------------------------------

CriterionResult criterion_lzs_dip(int jobs) {
    Check c;
    SystemModel q = build_charge_qubit(1.0);
    const double g_perp = 1e-2, kappa = 2e-3, omega_r = 0.42;
    FloquetConfig fcfg = charge_cfg(omega_r);
    std::vector<double> aqs;
    for (int k = 0; k <= 28; ++k) aqs.push_back(0.30 + 0.0125 * k);
    std::vector<LevelCouplings> lcs = sweep_couplings(q, fcfg, g_perp, aqs, 1e-4);
    std::vector<double> grid = coupling_grid(q, fcfg, aqs, 1e-4);
    FloquetSpectrum sp = track_branches(q, grid, fcfg);

    const std::vector<double> t = make_time_grid(0.5 / kappa, 201);
    std::vector<double> gmag(aqs.size()), snrs(aqs.size());
    parallel_for(static_cast<int>(aqs.size()), jobs, [&](int i) {
        ReadoutCouplings rc =
            reduce_two_level(lcs[i], {0, 1}, g_perp, kappa, omega_r, omega_r);
        gmag[i] = std::abs(rc.g_par);
        Pipeline p;
        p.rc = rc;
        p.plan = DrivePlan{aqs[i], 0.0, 0.0, omega_r};
        p.s0_up = dressed_polarization_from(sp, aqs[i], 1);
        p.s0_dn = dressed_polarization_from(sp, aqs[i], 0);
        Trajectory u = run_analytic(p, kappa, t, p.s0_up);
        Trajectory d = run_analytic(p, kappa, t, p.s0_dn);
        snrs[i] = snr(u, d, kappa).snr.back();
    });

    size_t ig = 0, is = 0;
    for (size_t k = 1; k < aqs.size(); ++k) {
        if (gmag[k] < gmag[ig]) ig = k;
        if (snrs[k] < snrs[is]) is = k;
    }
    c.expect(aqs[ig] >= 0.40 && aqs[ig] <= 0.60, "g dip at A_q=" + fmt(aqs[ig]));
    c.expect(gmag[ig] <= 0.1 * gmag[0],
             "dip depth " + fmt(gmag[ig]) + " vs " + fmt(gmag[0]) + " at A_q=0.3");
    c.expect(std::abs(static_cast<long>(ig) - static_cast<long>(is)) <= 1,
             "SNR dip at A_q=" + fmt(aqs[is]) + ", g dip at A_q=" + fmt(aqs[ig]));
    return {5, "replica-crossing dip suppresses g_par and the SNR together", c.ok,
            c.detail.str(), 0.0};
}

// ---- criterion 6: sign flips across the resonance ---------------------------

CriterionResult criterion_sign_flip(int jobs) {
    Check c;
    SystemModel q = build_charge_qubit(1.0);
    const double g_perp = 1e-2, kappa = 2e-3, a_q = 0.05;
    Pipeline below, above;
    parallel_for(2, jobs, [&](int i) {
        const double ratio = i == 0 ? 0.9 : 1.1;
        Pipeline p = solve(q, charge_cfg(ratio), g_perp, kappa, ratio, a_q, 1e-4, false);
        (i == 0 ? below : above) = std::move(p);
    });
    c.expect(below.rc.g_par * above.rc.g_par < 0.0, "sign(g_par) flip: " +
                                                        fmt(below.rc.g_par) + " vs " +
                                                        fmt(above.rc.g_par));
    c.expect(below.rc.chi * above.rc.chi < 0.0,
             "sign(chi) flip: " + fmt(below.rc.chi) + " vs " + fmt(above.rc.chi));
    const std::vector<double> t = make_time_grid(2.0 / kappa, 101);
    Trajectory ub = run_analytic(below, kappa, t, below.s0_up);
    Trajectory ua = run_analytic(above, kappa, t, above.s0_up);
    c.expect(std::signbit(ub.a.back().imag()) != std::signbit(ua.a.back().imag()),
             "Im<a>_up flips: " + fmt(ub.a.back().imag()) + " vs " + fmt(ua.a.back().imag()));
    return {6, "g_par, chi and the up-trajectory invert across omega_r = omega_q", c.ok,
            c.detail.str(), 0.0};
}

// ---- criterion 7: cavity-induced qubit decay --------------------------------

CriterionResult criterion_purcell() {
    Check c;
    SystemModel q = build_charge_qubit(1.0);
    const double g_perp = 1e-2, kappa = 2e-3, omega_r = 1.1;
    const double gamma = kappa * g_perp * g_perp / ((1.0 - omega_r) * (1.0 - omega_r));
    DrivePlan plan{0.0, 0.0, 0.0, omega_r};
    SimConfig sim;
    sim.fock_dim = 8;
    sim.frame = Frame::lab; // no drives: time-independent generator
    const std::vector<double> t = make_time_grid(2.0 / gamma, 81);
    SimResult res = simulate(q, g_perp, omega_r, kappa, plan, 1, t, sim);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(t.size());
    for (int k = 0; k < n; ++k) {
        const double y = std::log(std::max(res.populations(1, k), 1e-300));
        sx += t[k];
        sy += y;
        sxx += t[k] * t[k];
        sxy += t[k] * y;
    }
    const double rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double rel = std::abs(rate - gamma) / gamma;
    c.expect(rel < 0.15,
             "fitted rate=" + fmt(rate) + " expected=" + fmt(gamma) + " rel=" + fmt(rel));
    return {7, "excited population decays at kappa g^2/(wq-wr)^2 within 15%", c.ok,
            c.detail.str(), 0.0};
}

// ---- criterion 8: device-model energies -------------------------------------

CriterionResult criterion_device_energies(int jobs) {
    Check c;
    double wq_tr = 0, wq_fx = 0, wq_fl = 0;
    parallel_for(3, jobs, [&](int i) {
        if (i == 0) wq_tr = build_transmon(TransmonParams{}).omega_q();
        if (i == 1) wq_fx = build_fluxonium(FluxoniumParams{}).omega_q();
        if (i == 2) wq_fl = build_flopping_mode({1.0, 0.0, 1.0, 1.3}).omega_q();
    });
    c.expect(std::abs(wq_tr - 0.23) <= 0.015 * 0.23, "transmon wq/E_J=" + fmt(wq_tr));
    c.expect(std::abs(wq_fx - 0.15) <= 0.03 * 0.15, "fluxonium wq/E_J=" + fmt(wq_fx));
    c.expect(std::abs(wq_fl - 0.6) <= 0.02 * 0.6, "flopping wq/Delta=" + fmt(wq_fl));
    return {8, "device splittings match the catalog values", c.ok, c.detail.str(), 0.0};
}

// ---- criterion 9: compensation tone -----------------------------------------

struct DeviceSetup {
    std::string name;
    SystemModel model;
    SystemModel oracle;
    double g_perp, kappa, omega_r, a_q;
    int n_rep, fock;
};

CriterionResult criterion_compensation(int jobs) {
    Check c;
    std::vector<DeviceSetup> devices;
    {
        SystemModel fl = build_flopping_mode({1.0, 0.0, 1.0, 1.3});
        const double wq = fl.omega_q();
        devices.push_back(
            {"flopping", fl, fl, 2e-2, 2e-3, 1.4 * wq, 0.2 * wq, 31, 10});
    }
    {
        SystemModel tr = build_transmon(TransmonParams{});
        const double wq = tr.omega_q();
        devices.push_back({"transmon", tr, tr.truncated(4), 2.7e-3, 5e-5, 0.77 * wq, 0.04 * wq,
                           51, 12});
    }
    {
        SystemModel fx = build_fluxonium(FluxoniumParams{});
        const double wq = fx.omega_q();
        devices.push_back({"fluxonium", fx, fx.truncated(5), 5e-3, 2.5e-4, 1.92 * wq, 0.6 * wq,
                           31, 10});
    }

    for (const DeviceSetup& dev : devices) {
        FloquetConfig fcfg;
        fcfg.omega_d = dev.omega_r;
        fcfg.n_rep = dev.n_rep;
        fcfg.track_levels = {0, 1};
        Pipeline p = solve(dev.model, fcfg, dev.g_perp, dev.kappa, dev.omega_r, dev.a_q, 1e-4,
                           true);
        const std::vector<double> t = make_time_grid(5.0 / dev.kappa, 401);
        // analytic ratio
        Trajectory au = run_analytic(p, dev.kappa, t, p.s0_up);
        Trajectory ad = run_analytic(p, dev.kappa, t, p.s0_dn);
        double com = 0.0, diff = 0.0;
        for (size_t k = 0; k < t.size(); ++k) {
            com = std::max(com, 0.5 * std::abs(au.a[k] + ad.a[k]));
            diff = std::max(diff, 0.5 * std::abs(au.a[k] - ad.a[k]));
        }
        const double analytic_ratio = com / diff;
        SimConfig sim;
        sim.fock_dim = dev.fock;
        TrajectoryAgreement agr =
            compare_with_oracle(dev.oracle, p, dev.g_perp, dev.omega_r, dev.kappa, t, sim, jobs);
        c.expect(analytic_ratio < 0.05,
                 dev.name + " analytic com/diff=" + fmt(analytic_ratio));
        c.expect(agr.com_ratio < 0.05, dev.name + " oracle com/diff=" + fmt(agr.com_ratio));
    }
    return {9, "compensation tone suppresses the pointer center of mass below 5%", c.ok,
            c.detail.str(), 0.0};
}

// ---- criterion 10: property suite -------------------------------------------

CriterionResult criterion_properties(int jobs) {
    Check c;
    SystemModel q = build_charge_qubit(1.0);
    const double g_perp = 1e-2, kappa = 2e-3;

    // oracle diagnostics on a canonical driven run
    {
        DrivePlan plan{0.05, 0.0, 0.0, 1.1};
        SimConfig sim;
        sim.fock_dim = 12;
        const std::vector<double> t = make_time_grid(2.0 / kappa, 101);
        SimResult r = simulate(q, g_perp, 1.1, kappa, plan, 1, t, sim);
        c.expect(r.trace_error < 1e-8, "trace error " + fmt(r.trace_error));
        c.expect(r.hermiticity_error < 1e-8, "hermiticity error " + fmt(r.hermiticity_error));
        c.expect(r.min_eigenvalue > -1e-8, "min eigenvalue " + fmt(r.min_eigenvalue));
    }

    // replica doubling on every device at its operating point
    {
        struct Case {
            std::string name;
            SystemModel model;
            double omega_d, a;
            int n_rep;
        };
        std::vector<Case> cases;
        cases.push_back({"charge", q, 1.1, 0.05, 41});
        SystemModel fl = build_flopping_mode({1.0, 0.0, 1.0, 1.3});
        cases.push_back({"flopping", fl, 1.4 * fl.omega_q(), 0.2 * fl.omega_q(), 31});
        SystemModel fx = build_fluxonium(FluxoniumParams{});
        cases.push_back({"fluxonium", fx, 1.92 * fx.omega_q(), 0.6 * fx.omega_q(), 31});
        SystemModel tr = build_transmon(TransmonParams{});
        cases.push_back({"transmon", tr, 0.77 * tr.omega_q(), 0.04 * tr.omega_q(), 51});
        std::vector<double> shifts(cases.size());
        parallel_for(static_cast<int>(cases.size()), jobs, [&](int i) {
            const Case& cs = cases[i];
            FloquetConfig fcfg;
            fcfg.omega_d = cs.omega_d;
            fcfg.n_rep = cs.n_rep;
            fcfg.track_levels = {0, 1};
            FloquetSpectrum sp = spectrum_at(cs.model, cs.a, fcfg, false);
            shifts[i] = replica_doubling_shift(cs.model, sp, cs.a, fcfg);
        });
        for (size_t i = 0; i < cases.size(); ++i)
            c.expect(shifts[i] < 1e-6, cases[i].name + " doubling shift " + fmt(shifts[i]));
    }

    // FD step halving
    {
        LevelCouplings a = couplings_at(q, charge_cfg(1.1), g_perp, 0.05, 1e-4);
        LevelCouplings b = couplings_at(q, charge_cfg(1.1), g_perp, 0.05, 5e-5);
        const double rg = std::abs(a.g_par[1] - b.g_par[1]) / std::abs(b.g_par[1]);
        const double rx = std::abs(a.chi[1] - b.chi[1]) / std::abs(b.chi[1]);
        c.expect(rg < 1e-5, "g_par step-halving shift " + fmt(rg));
        c.expect(rx < 1e-5, "chi step-halving shift " + fmt(rx));
    }

    // closed-form trajectories satisfy the equations of motion
    {
        SystemModel fl = build_flopping_mode({1.0, 0.0, 1.0, 1.3});
        const double wq = fl.omega_q(), fkappa = 2e-3;
        FloquetConfig fcfg;
        fcfg.omega_d = 1.4 * wq;
        fcfg.n_rep = 31;
        fcfg.track_levels = {0, 1};
        Pipeline p = solve(fl, fcfg, 2e-2, fkappa, 1.4 * wq, 0.2 * wq, 1e-4, true);
        const std::vector<double> t = make_time_grid(5.0 / fkappa, 4001);
        Trajectory tr = run_analytic(p, fkappa, t, p.s0_up);
        const double detuning = p.rc.omega_r - p.plan.omega_d;
        const cd drive = p.rc.g_bar + 0.5 * p.plan.a_r * std::exp(-kI * p.plan.phi);
        const double hstep = t[1] - t[0];
        double worst = 0.0;
        for (size_t k = 2; k + 2 < t.size(); k += 5) {
            const double sz = -1.0 + (p.s0_up + 1.0) * std::exp(-p.rc.gamma * t[k]);
            auto d5 = [&](const std::vector<cd>& f) {
                return (-f[k + 2] + 8.0 * f[k + 1] - 8.0 * f[k - 1] + f[k - 2]) / (12.0 * hstep);
            };
            const cd rhs_a = -kI * p.rc.chi * tr.a_sigma_z[k] -
                             (kI * p.rc.chi_bar + 0.5 * fkappa + kI * detuning) * tr.a[k] -
                             kI * p.rc.g_par * sz - kI * drive;
            const cd rhs_az = -(kI * p.rc.chi_bar + 0.5 * fkappa + p.rc.gamma + kI * detuning) *
                                  tr.a_sigma_z[k] -
                              (kI * p.rc.chi + p.rc.gamma) * tr.a[k] - kI * p.rc.g_par -
                              kI * drive * sz;
            worst = std::max({worst, std::abs(d5(tr.a) - rhs_a),
                              std::abs(d5(tr.a_sigma_z) - rhs_az)});
        }
        c.expect(worst < 1e-8, "EOM residual " + fmt(worst));
    }

    // quasi-energy even in the drive for parity-symmetric models
    {
        struct Case {
            std::string name;
            SystemModel model;
            double omega_d, a;
            int n_rep;
        };
        std::vector<Case> cases;
        cases.push_back({"charge", q, 1.1, 0.3, 41});
        SystemModel fx = build_fluxonium(FluxoniumParams{});
        cases.push_back({"fluxonium", fx, 1.92 * fx.omega_q(), 0.3 * fx.omega_q(), 31});
        for (const Case& cs : cases) {
            FloquetConfig fcfg;
            fcfg.omega_d = cs.omega_d;
            fcfg.n_rep = cs.n_rep;
            fcfg.track_levels = {0, 1};
            std::vector<double> grid;
            for (int k = -8; k <= 8; ++k) grid.push_back(cs.a * k / 8.0);
            FloquetSpectrum sp = track_branches(cs.model, grid, fcfg);
            double worst = 0.0;
            for (int k = 1; k <= 8; ++k)
                for (int lvl = 0; lvl < 2; ++lvl)
                    worst = std::max(worst, std::abs(sp.quasi_energy(lvl, cs.a * k / 8.0) -
                                                     sp.quasi_energy(lvl, -cs.a * k / 8.0)));
            c.expect(worst < 1e-10, cs.name + " evenness defect " + fmt(worst));
        }
    }

    // SNR monotonicity
    {
        Pipeline p = solve(q, charge_cfg(1.1), g_perp, kappa, 1.1, 0.05, 1e-4, false);
        const std::vector<double> t = make_time_grid(5.0 / kappa, 801);
        Trajectory u = run_analytic(p, kappa, t, p.s0_up);
        Trajectory d = run_analytic(p, kappa, t, p.s0_dn);
        SnrCurve s = snr(u, d, kappa);
        bool monotone = s.snr.front() == 0.0;
        for (size_t k = 1; k < s.snr.size(); ++k)
            if (s.snr[k] < s.snr[k - 1]) monotone = false;
        c.expect(monotone, "SNR nondecreasing from zero");
    }

    return {10, "property suite (diagnostics, convergence, symmetry, monotonicity)", c.ok,
            c.detail.str(), 0.0};
}

} // namespace

std::vector<CriterionResult> validate_all(int jobs, std::ostream* line_out) {
    std::vector<CriterionResult> results;
    auto timed = [&](auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r = fn();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (line_out) print_criterion_line(*line_out, r), line_out->flush();
        results.push_back(std::move(r));
    };
    timed([&] { return criterion_closed_form_chi(jobs); });
    timed([&] { return criterion_chi_matches_kappa(); });
    timed([&] { return criterion_oracle_trajectories(jobs); });
    timed([&] { return criterion_snr_advantage(jobs); });
    timed([&] { return criterion_lzs_dip(jobs); });
    timed([&] { return criterion_sign_flip(jobs); });
    timed([&] { return criterion_purcell(); });
    timed([&] { return criterion_device_energies(jobs); });
    timed([&] { return criterion_compensation(jobs); });
    timed([&] { return criterion_properties(jobs); });
    return results;
}

void print_criterion_line(std::ostream& out, const CriterionResult& r) {
    out << (r.passed ? "[PASS]" : "[FAIL]") << " criterion " << r.number << ": " << r.name
        << " (" << r.detail << ") [" << static_cast<long>(r.seconds + 0.5) << "s]\n";
}

int count_failures(const std::vector<CriterionResult>& results) {
    int failed = 0;
    for (const CriterionResult& r : results)
        if (!r.passed) ++failed;
    return failed;
}

int validate_report(std::ostream& out, const std::vector<CriterionResult>& results) {
    for (const CriterionResult& r : results) print_criterion_line(out, r);
    const int failed = count_failures(results);
    out << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
        << "\n";
    return failed;
}

} // namespace flqr
