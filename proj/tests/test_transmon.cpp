#include <doctest.h>

#include "cqed/errors.hpp"
#include "cqed/transmon.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace cqed;

namespace {

TransmonParams params(double ec, double ej, double ng = 0.0, int cutoff = 20,
                      TunnelingSign sign = TunnelingSign::PaperPlus) {
    TransmonParams p;
    p.E_C = ec;
    p.E_J = ej;
    p.n_g = ng;
    p.n_cutoff = cutoff;
    p.tunneling_sign = sign;
    return p;
}

}  // namespace

TEST_CASE("charge Hamiltonian layout") {
    const auto h = build_charge_hamiltonian(params(0.3, 0.0, 0.0, 1));
    CHECK(h.dim() == 3);
    CHECK(h(0, 0).real() == doctest::Approx(1.2));
    CHECK(h(1, 1).real() == 0.0);
    CHECK(h(2, 2).real() == doctest::Approx(1.2));
    CHECK(h.max_abs() == doctest::Approx(1.2));

    const auto hp = build_charge_hamiltonian(params(0.3, 2.0, 0.2, 3));
    const auto hk = build_charge_hamiltonian(params(0.3, 2.0, 0.2, 3, TunnelingSign::KochMinus));
    CHECK(hp(2, 3).real() == doctest::Approx(1.0));
    CHECK(hk(2, 3).real() == doctest::Approx(-1.0));
    CHECK(hp.is_hermitian());
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(solve(params(-0.3, 15.0)), ContractViolation);
    CHECK_THROWS_AS(solve(params(0.3, -1.0)), ContractViolation);
    CHECK_THROWS_AS(solve(params(0.3, 1.0, 0.0, 0)), ContractViolation);
}

TEST_CASE("two-level block gap at the charge degeneracy") {
    const double ec = 1.0, ej = 0.1;
    const auto h = build_charge_hamiltonian(params(ec, ej, 0.5, 3));
    // Charges 0 and 1 sit at indices 3 and 4.
    Eigen::Matrix2d block;
    block << h(3, 3).real(), h(3, 4).real(), h(4, 3).real(), h(4, 4).real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
    CHECK(es.eigenvalues()[1] - es.eigenvalues()[0] == doctest::Approx(ej).epsilon(1e-13));
}

TEST_CASE("diagonal spectrum at E_J = 0") {
    const double ec = 0.25;
    const auto s = solve(params(ec, 0.0, 0.0, 4));
    CHECK(s.levels[0] == doctest::Approx(0.0));
    CHECK(s.levels[1] == doctest::Approx(4 * ec));
    CHECK(s.levels[2] == doctest::Approx(4 * ec));
    CHECK(s.levels[3] == doctest::Approx(16 * ec));
    // Levels 1 and 2 are the degenerate pair N = +-1, so the definition gives
    // -4E_C. Over distinct levels {0, 4E_C, 16E_C} the same formula gives 8E_C.
    CHECK(anharmonicity(s) == doctest::Approx(-4 * ec));
    CHECK((s.levels[3] - s.levels[2]) - (s.levels[2] - s.levels[0]) == doctest::Approx(8 * ec));
    CHECK(charge_dispersion(params(ec, 0.0, 0.0, 4), 0) == doctest::Approx(ec).epsilon(1e-12));
}

TEST_CASE("transmon regime diagnostics at E_J/E_C = 50") {
    const auto p = params(0.3, 15.0);
    const auto s = solve(p);
    const double w01 = s.levels[1] - s.levels[0];
    CHECK(std::abs(w01 - (std::sqrt(8 * 0.3 * 15.0) - 0.3)) < 0.03 * 5.7);

    const double alpha = anharmonicity(s);
    CHECK(alpha < 0.0);
    CHECK(std::abs(alpha + p.E_C) < 0.15 * p.E_C);

    const double n01 = charge_matrix_element(s, 0, 1);
    const double n02 = charge_matrix_element(s, 0, 2);
    CHECK(std::abs(std::abs(n01) - asymptotic_charge_element(p)) <
          0.03 * asymptotic_charge_element(p));
    CHECK(std::abs(n02) / std::abs(n01) < 0.05);
    CHECK(charge_matrix_element(s, 0, 0) == doctest::Approx(0.0));
    CHECK(charge_matrix_element(s, 0, 1) == charge_matrix_element(s, 1, 0));
    CHECK(charge_matrix_element(s, 3, 2) == charge_matrix_element(s, 2, 3));

    CHECK(charge_dispersion(p, 0) / w01 < 1e-5);
    CHECK_THROWS_AS(charge_matrix_element(s, 0, 41), IndexError);
}

TEST_CASE("dense oracle at larger cutoff") {
    const auto s20 = solve(params(0.3, 15.0, 0.0, 20));
    const auto s40 = solve(params(0.3, 15.0, 0.0, 40));
    CHECK(std::abs((s20.levels[1] - s20.levels[0]) - (s40.levels[1] - s40.levels[0])) < 1e-10);
}

TEST_CASE("cutoff convergence") {
    const auto s20 = solve(params(0.3, 15.0, 0.3, 20));
    const auto s30 = solve(params(0.3, 15.0, 0.3, 30));
    for (int k = 0; k < 5; ++k) {
        CHECK(std::abs(s20.levels[k] - s30.levels[k]) < 1e-10 * std::abs(s30.levels[k]));
    }
}

TEST_CASE("eigenvectors orthonormal and phase fixed") {
    const auto s = solve(params(0.3, 15.0, 0.17));
    const Eigen::Index n = s.eigvecs.cols();
    CHECK((s.eigvecs.transpose() * s.eigvecs - Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index k;
        s.eigvecs.col(j).cwiseAbs().maxCoeff(&k);
        CHECK(s.eigvecs(k, j) > 0.0);
    }
}

TEST_CASE("anharmonicity negative across the transmon regime") {
    for (double ratio : {20.0, 50.0, 100.0}) {
        CHECK(anharmonicity(solve(params(0.3, ratio * 0.3))) < 0.0);
    }
}

TEST_CASE("spectrum symmetries") {
    for (double ng : {0.0, 0.13, 0.5, 0.77}) {
        const auto a = solve(params(0.3, 15.0, ng));
        const auto b = solve(params(0.3, 15.0, ng, 20, TunnelingSign::KochMinus));
        const auto c = solve(params(0.3, 15.0, -ng));
        const auto d = solve(params(0.3, 15.0, ng + 1.0));
        for (int k = 0; k < 10; ++k) {
            const double scale = std::max(std::abs(a.levels[k]), 1.0);
            CHECK(std::abs(a.levels[k] - b.levels[k]) < 1e-12 * scale);
            CHECK(std::abs(a.levels[k] - c.levels[k]) < 1e-10 * scale);
            CHECK(std::abs(a.levels[k] - d.levels[k]) < 1e-10 * scale);
        }
    }
}

TEST_CASE("gauge flips the sign of odd matrix elements only") {
    const auto a = solve(params(0.3, 15.0, 0.0));
    const auto b = solve(params(0.3, 15.0, 0.0, 20, TunnelingSign::KochMinus));
    CHECK(std::abs(charge_matrix_element(a, 0, 1)) ==
          doctest::Approx(std::abs(charge_matrix_element(b, 0, 1))));
}

TEST_CASE("sin phi operator satisfies the charge equation of motion") {
    for (auto sign : {TunnelingSign::PaperPlus, TunnelingSign::KochMinus}) {
        const auto p = params(0.4, 6.0, 0.1, 8, sign);
        const auto h = build_charge_hamiltonian(p);
        const auto n = charge_operator(p);
        // dn/dt = i[H, n] must equal -E_J sin(phi).
        const CMatrix lhs = cplx(0.0, 1.0) * commutator(h, n).entries();
        const CMatrix rhs = -p.E_J * sin_phi_operator(p).entries();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);

        const CMatrix rebuilt = -p.E_J * cos_phi_operator(p).entries();
        CMatrix off = h.entries();
        off.diagonal().setZero();
        CHECK((rebuilt - off).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("charge operator commutes with H at E_J = 0") {
    const auto p = params(0.3, 0.0, 0.2, 5);
    CHECK(commutator(charge_operator(p), build_charge_hamiltonian(p)).max_abs() == 0.0);
}

TEST_CASE("dispersion decreases with E_J/E_C") {
    const double d10 = charge_dispersion(params(0.3, 3.0), 0);
    const double d50 = charge_dispersion(params(0.3, 15.0), 0);
    CHECK(d50 < d10);
    CHECK(d50 > 0.0);
}
