#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "flqr/config.hpp"
#include "flqr/csv.hpp"
#include "flqr/error.hpp"
#include "flqr/runner.hpp"

using namespace flqr;
namespace fs = std::filesystem;

namespace {

const char* kChargeConfig = R"cfg(
# comment line
[model]
device = charge_qubit
omega_q = 1.0

[resonator]
omega_r_over_omega_q = 1.1
kappa_over_omega_q = 2e-3
g_perp_over_omega_q = 1e-2

[drive]
a_q_over_omega_q = 0.05

[floquet]
n_rep = 41

[output]
t_max_over_kappa = 2.0
t_points = 101
)cfg";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("flqr_io_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

RunContext make_ctx(const std::string& text, const fs::path& out, int jobs = 1) {
    RunContext ctx;
    ctx.cfg = parse_run_config(text);
    ctx.out_dir = out.string();
    ctx.jobs = jobs;
    return ctx;
}

} // namespace

TEST_CASE("csv float format") {
    CHECK(csv_float(1.0) == "1.00000000000e+00");
    CHECK(csv_float(-9.5238095238e-4) == "-9.52380952380e-04");
    CHECK(csv_float(std::nan("")) == "nan");
}

TEST_CASE("config parsing") {
    RunConfig cfg = parse_run_config(kChargeConfig);
    CHECK(cfg.device == "charge_qubit");
    CHECK(cfg.model.dim() == 2);
    CHECK(cfg.omega_r == doctest::Approx(1.1));
    CHECK(cfg.kappa == doctest::Approx(2e-3));
    CHECK(cfg.a_q == doctest::Approx(0.05));
    CHECK(cfg.omega_d == doctest::Approx(1.1)); // defaults to omega_r
    CHECK(cfg.n_rep == 41);
    CHECK(cfg.t_points == 101);

    SUBCASE("unknown keys are rejected") {
        std::string bad = std::string(kChargeConfig) + "\n[resonator]\n";
        CHECK_THROWS_AS(parse_run_config(std::string(kChargeConfig) +
                                         "\n[floquet]\nnrep_typo = 3\n"),
                        Error);
    }
    SUBCASE("duplicate keys are rejected") {
        CHECK_THROWS_AS(parse_run_config(std::string(kChargeConfig) + "\n[model]\nomega_q = 2\n"),
                        Error);
    }
    SUBCASE("both spellings of a frequency are rejected") {
        CHECK_THROWS_AS(parse_run_config(std::string(kChargeConfig) +
                                         "\n[resonator]\nomega_r = 1.1\n"),
                        Error);
    }
    SUBCASE("grid specs") {
        RunConfig g = parse_run_config(std::string(kChargeConfig) +
                                       "\n[sweep]\na_q_over_omega_q = lin:0:0.2:5\n"
                                       "omega_r_over_omega_q = list:0.9,1.1\n");
        CHECK(g.sweep_a_q.size() == 5);
        CHECK(g.sweep_a_q[4] == doctest::Approx(0.2));
        CHECK(g.sweep_omega_r.size() == 2);
    }
    SUBCASE("missing required key") {
        CHECK_THROWS_AS(parse_run_config("[model]\ndevice = charge_qubit\n"), Error);
    }
}

TEST_CASE("trajectory command output") {
    fs::path out = temp_dir("traj");
    RunContext ctx = make_ctx(kChargeConfig, out);
    std::string summary = cmd_trajectory(ctx);
    CHECK(summary.find("trajectory.csv") != std::string::npos);

    std::ifstream csv(out / "trajectory.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,re_a_up,im_a_up,re_a_down,im_a_down,snr");
    std::string first;
    std::getline(csv, first);
    // empty-cavity start: first row is all zeros
    CHECK(first == "0.00000000000e+00,0.00000000000e+00,0.00000000000e+00,0.00000000000e+00,"
                   "0.00000000000e+00,0.00000000000e+00");
    CHECK(fs::exists(out / "phase_space.csv"));

    SUBCASE("byte-identical across runs") {
        fs::path out2 = temp_dir("traj2");
        RunContext ctx2 = make_ctx(kChargeConfig, out2);
        cmd_trajectory(ctx2);
        CHECK(slurp(out / "trajectory.csv") == slurp(out2 / "trajectory.csv"));
    }
}

TEST_CASE("couplings command output is independent of the worker count") {
    const std::string cfg = std::string(kChargeConfig) +
                            "\n[sweep]\nomega_r_over_omega_q = list:0.8,0.9,1.1,1.2\n"
                            "a_q_over_omega_q = list:0.01,0.05\n";
    fs::path a = temp_dir("coup1"), b = temp_dir("coup2");
    cmd_couplings(make_ctx(cfg, a, 1));
    cmd_couplings(make_ctx(cfg, b, 4));
    CHECK(slurp(a / "couplings.csv") == slurp(b / "couplings.csv"));

    std::ifstream csv(a / "couplings.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "omega_d_over_omega_q,A_q,g_par,g_bar,chi,chi_bar,gamma,g_par_0th,chi_0th,reason");
}

TEST_CASE("near-resonant sweep rows carry nan and a reason") {
    const std::string cfg = std::string(kChargeConfig) +
                            "\n[sweep]\nomega_r_over_omega_q = list:1.0\n"
                            "a_q_over_omega_q = list:0.05\n";
    fs::path out = temp_dir("res");
    cmd_couplings(make_ctx(cfg, out));
    std::ifstream csv(out / "couplings.csv");
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(row.find("nan") != std::string::npos);
    CHECK(row.find("refusal") != std::string::npos);
}

TEST_CASE("spectrum command with the static reference column") {
    const std::string cfg = std::string(kChargeConfig) +
                            "\n[floquet]\na_max_over_omega_q = 0.2\na_points = 11\n"
                            "static_column = on\n";
    fs::path out = temp_dir("spec");
    cmd_spectrum(make_ctx(cfg, out));
    std::ifstream csv(out / "spectrum.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "A,level,quasi_energy,replica_weight_p0,static_energy");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 11 * 2);
}

TEST_CASE("snr command emits the dispersive baseline row") {
    const std::string cfg = std::string(kChargeConfig) +
                            "\n[sweep]\na_q_over_omega_q = list:0.02,0.05\n"
                            "\n[extra_drive]\n"; // placeholder section rejected below
    CHECK_THROWS_AS(parse_run_config(cfg + "x = 1\n"), Error);

    const std::string good = std::string(kChargeConfig) +
                             "\n[sweep]\na_q_over_omega_q = list:0.02,0.05\n";
    std::string with_disp = good;
    with_disp.replace(with_disp.find("[drive]\n"), 8, "[drive]\ndispersive = on\n");
    fs::path out = temp_dir("snr");
    cmd_snr(make_ctx(with_disp, out));
    std::string text = slurp(out / "snr.csv");
    CHECK(text.find("dispersive") != std::string::npos);
    CHECK(text.find("longitudinal") != std::string::npos);
}

TEST_CASE("single-point spectrum grid is the bare point") {
    const std::string cfg =
        std::string(kChargeConfig) + "\n[floquet]\na_max_over_omega_q = 0.7\na_points = 1\n";
    fs::path out = temp_dir("spec1");
    cmd_spectrum(make_ctx(cfg, out));
    std::ifstream csv(out / "spectrum.csv");
    std::string header, r0, r1, rest;
    std::getline(csv, header);
    std::getline(csv, r0);
    std::getline(csv, r1);
    CHECK(!std::getline(csv, rest));
    CHECK(r0.rfind("0.00000000000e+00,0,-5.00000000000e-01", 0) == 0);
    CHECK(r1.rfind("0.00000000000e+00,1,5.00000000000e-01", 0) == 0);
}

TEST_CASE("models command") {
    fs::path out = temp_dir("models");
    std::string summary = cmd_models(make_ctx(kChargeConfig, out));
    CHECK(summary.find("charge_qubit") != std::string::npos);
    CHECK(fs::exists(out / "models.csv"));
}

TEST_CASE("run_command dispatch") {
    fs::path out = temp_dir("dispatch");
    fs::path cfg_file = out / "run.cfg";
    std::ofstream(cfg_file) << kChargeConfig;
    std::string s = run_command("models", cfg_file.string(), out.string(), 1, "");
    CHECK(s.find("charge_qubit") != std::string::npos);
    CHECK_THROWS_AS(run_command("bogus", cfg_file.string(), out.string(), 1, ""), Error);
    CHECK_THROWS_AS(run_command("models", (out / "missing.cfg").string(), out.string(), 1, ""),
                    Error);
}
