#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "flqr/error.hpp"
#include "flqr/system_model.hpp"

using namespace flqr;

namespace {

// independent oracle for the double-dot spectrum at zero detuning: the
// parity tau_x sigma_z splits the 4x4 into two 2x2 blocks with eigenvalues
// +-sqrt((t_sc +- Delta/2)^2 + t_sf^2)
std::array<double, 4> flopping_block_oracle(double delta, double t_sc, double t_sf) {
    const double ep = std::sqrt(std::pow(std::abs(t_sc) + 0.5 * delta, 2) + t_sf * t_sf);
    const double em = std::sqrt(std::pow(std::abs(t_sc) - 0.5 * delta, 2) + t_sf * t_sf);
    std::array<double, 4> e{-ep, -em, em, ep};
    return e;
}

double hermiticity_defect(const Eigen::MatrixXcd& q) {
    return (q - q.adjoint()).cwiseAbs().maxCoeff() / std::max(q.cwiseAbs().maxCoeff(), 1e-300);
}

} // namespace

TEST_CASE("charge qubit definition") {
    SystemModel m = build_charge_qubit(1.0);
    CHECK(m.dim() == 2);
    CHECK(m.energies[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(m.energies[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(m.charge_op(0, 1)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(m.charge_op(0, 0)) == 0.0);
    CHECK(std::abs(m.charge_op(1, 1)) == 0.0);

    SystemModel m2 = build_charge_qubit(0.6);
    CHECK(m2.omega_q() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(std::abs(m2.charge_op(0, 0)) == 0.0);

    CHECK_THROWS_AS(build_charge_qubit(0.0), Error);
    CHECK_THROWS_AS(build_charge_qubit(-1.0), Error);
}

TEST_CASE("flopping mode spectrum against the block-form oracle") {
    SUBCASE("decoupled sectors at t_sf = 0") {
        SystemModel m = build_flopping_mode({1.0, 0.0, 1.0, 0.0});
        CHECK(m.energies[0] == doctest::Approx(-1.5).epsilon(1e-12));
        CHECK(m.energies[1] == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(m.energies[2] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(m.energies[3] == doctest::Approx(1.5).epsilon(1e-12));
        // same-spin pair behaves as the bare charge qubit
        CHECK(std::abs(m.charge_op(0, 2)) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(m.charge_op(1, 3)) == doctest::Approx(1.0).epsilon(1e-10));
        // spin sectors exactly decouple
        CHECK(std::abs(m.charge_op(0, 1)) < 1e-12);
        CHECK(std::abs(m.charge_op(2, 3)) < 1e-12);
    }
    SUBCASE("spin-like regime") {
        SystemModel m = build_flopping_mode({1.0, 0.0, 1.0, 1.3});
        auto oracle = flopping_block_oracle(1.0, 1.0, 1.3);
        for (int j = 0; j < 4; ++j)
            CHECK(m.energies[j] == doctest::Approx(oracle[j]).epsilon(1e-12));
        // omega_q close to 0.6 Delta (0.592 from the oracle)
        CHECK(m.omega_q() == doctest::Approx(oracle[1] - oracle[0]).epsilon(1e-12));
        CHECK(std::abs(m.omega_q() - 0.6) < 0.02 * 0.6);
    }
    SUBCASE("charge-like regime, four non-degenerate levels") {
        SystemModel m = build_flopping_mode({1.0, 0.0, -0.35, 0.43});
        for (int j = 1; j < 4; ++j) CHECK(m.energies[j] - m.energies[j - 1] > 1e-6);
        auto oracle = flopping_block_oracle(1.0, -0.35, 0.43);
        for (int j = 0; j < 4; ++j)
            CHECK(m.energies[j] == doctest::Approx(oracle[j]).epsilon(1e-12));
    }
    SUBCASE("hermitian charge operator") {
        SystemModel m = build_flopping_mode({1.0, 0.2, 0.7, 0.4});
        CHECK(hermiticity_defect(m.charge_op) < 1e-12);
    }
}

TEST_CASE("transmon at the flux sweet spot of the readout parameter set") {
    TransmonParams p; // E_C/E_J = 0.0077, flux 0.128 defaults
    SystemModel m = build_transmon(p);
    CHECK(m.dim() == 25);
    // splitting quoted as 0.23 E_J for these parameters
    CHECK(std::abs(m.omega_q() - 0.23) < 0.015 * 0.23);
    CHECK(hermiticity_defect(m.charge_op) < 1e-12);
    // charge matrix elements: nearest-neighbor dominated
    const double n01 = std::abs(m.charge_op(0, 1));
    const double n02 = std::abs(m.charge_op(0, 2));
    const double n12 = std::abs(m.charge_op(1, 2));
    CHECK(n02 < 0.05 * n01);
    CHECK(n12 * n12 / (n01 * n01) == doctest::Approx(2.0).epsilon(0.08));

    SUBCASE("asymptotic expressions") {
        const double ej_eff = transmon_effective_ej(1.0, p.flux);
        TransmonAsymptotics a = transmon_asymptotics(p.e_c, ej_eff);
        CHECK(std::abs(a.omega_q() - m.omega_q()) < 0.03 * m.omega_q());
        CHECK(std::abs(a.n_element(0) - n01) < 0.05 * n01);
        CHECK(a.n_element(1) * a.n_element(1) / (a.n_element(0) * a.n_element(0)) ==
              doctest::Approx(2.0).epsilon(1e-12));
        CHECK(a.omega_q() == doctest::Approx(a.energy(1) - a.energy(0)).epsilon(1e-12));
    }
    SUBCASE("deep transmon limit") {
        TransmonParams deep{0.0077, 1.0, 0.0, 30, 5};
        SystemModel md = build_transmon(deep);
        const double approx = std::sqrt(8.0 * 0.0077) - 0.0077;
        CHECK(std::abs(md.omega_q() - approx) < 0.02 * md.omega_q());
    }
    SUBCASE("zero flux equals bare E_J") {
        CHECK(transmon_effective_ej(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
        TransmonParams p0{0.02, 1.0, 0.0, 25, 6};
        SystemModel a = build_transmon(p0);
        CHECK(a.omega_q() > 0.0);
    }
}

TEST_CASE("transmon cutoff-doubling convergence guard") {
    // retaining the entire basis cannot be converged
    TransmonParams bad{0.0077, 1.0, 0.128, 12, 25};
    CHECK_THROWS_AS(build_transmon(bad), Error);
    try {
        build_transmon(bad);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::convergence);
    }
}

TEST_CASE("fluxonium") {
    SUBCASE("readout parameter set") {
        FluxoniumParams p; // E_C = E_L = 0.25 E_J, half flux
        SystemModel m = build_fluxonium(p);
        CHECK(m.dim() == 10);
        // frozen from an independent real-space grid diagonalization of
        // 4 E_C n^2 + E_J cos(phi) + E_L phi^2/2 (half flux)
        CHECK(m.omega_q() == doctest::Approx(0.14546225).epsilon(1e-6));
        CHECK(hermiticity_defect(m.charge_op) < 1e-12);
        // parity at half flux: no diagonal charge elements
        for (int j = 0; j < m.dim(); ++j) CHECK(std::abs(m.charge_op(j, j)) < 1e-10);
    }
    SUBCASE("harmonic limit E_J = 0") {
        FluxoniumParams p{0.25, 0.0, 0.25, 0.0, 100, 6};
        SystemModel m = build_fluxonium(p);
        const double plasma = std::sqrt(8.0 * 0.25 * 0.25);
        for (int k = 0; k < 6; ++k)
            CHECK(m.energies[k] == doctest::Approx(plasma * (k + 0.5)).epsilon(1e-12));
        const double n_zpf = std::pow(0.25 / (32.0 * 0.25), 0.25);
        CHECK(std::abs(m.charge_op(0, 1)) == doctest::Approx(n_zpf).epsilon(1e-10));
    }
    SUBCASE("basis too small") {
        FluxoniumParams p{0.25, 1.0, 0.25, 0.5, 12, 12};
        CHECK_THROWS_AS(build_fluxonium(p), Error);
    }
}

TEST_CASE("deterministic degenerate ordering") {
    // t_sf = 0, Delta = 2 t_sc makes levels 1 and 2 exactly degenerate
    FloppingParams p{2.0, 0.0, 1.0, 0.0};
    SystemModel a = build_flopping_mode(p);
    SystemModel b = build_flopping_mode(p);
    CHECK(a.energies[1] == doctest::Approx(a.energies[2]).epsilon(1e-14));
    CHECK((a.charge_op - b.charge_op).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncated submodel") {
    SystemModel m = build_flopping_mode({1.0, 0.0, 1.0, 1.3});
    SystemModel t = m.truncated(2);
    CHECK(t.dim() == 2);
    CHECK(t.energies[1] == m.energies[1]);
    CHECK(t.charge_op(0, 1) == m.charge_op(0, 1));
    CHECK_THROWS_AS(m.truncated(1), Error);
}
