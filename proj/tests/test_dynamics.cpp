#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cqed;

namespace {

constexpr double pi = std::numbers::pi;

CoupledHamiltonian jc_hamiltonian(double g, double wr = 1.0, std::size_t fock = 6) {
    Eigen::MatrixXd gt(2, 2);
    gt << 0.0, g, g, 0.0;
    return assemble(Eigen::Vector2d(0.0, wr), {wr}, {gt}, {fock});
}

// Times where the series crosses level downward, linearly interpolated.
std::vector<double> downward_crossings(const std::vector<double>& t, const std::vector<double>& x,
                                       double level) {
    std::vector<double> c;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double a = x[i - 1] - level;
        const double b = x[i] - level;
        if (a > 0.0 && b <= 0.0) c.push_back(t[i - 1] + (t[i] - t[i - 1]) * a / (a - b));
    }
    return c;
}

StateVector transmon_superposition(const TransmonParams& p) {
    const auto s = solve(p);
    const Eigen::VectorXd v = (s.eigvecs.col(0) + s.eigvecs.col(1)) / std::sqrt(2.0);
    return StateVector(v.cast<cplx>());
}

}  // namespace

TEST_CASE("uncoupled eigenstate populations stay constant") {
    const auto h = jc_hamiltonian(0.0, 1.3, 4);
    const auto psi = StateVector::basis(h.dim(), h.index_of({1, 2}));
    const auto tr = evolve(h, psi, uniform_grid(0.0, 50.0, 201));
    tr.validate();
    for (const auto& name : tr.names) {
        const auto& s = tr.at(name);
        for (double v : s) CHECK(v == doctest::Approx(s.front()).epsilon(1e-10).scale(1.0));
    }
    CHECK(tr.at("P_q1").front() == doctest::Approx(1.0));
    CHECK(tr.at("n_0").front() == doctest::Approx(2.0));
    CHECK(tr.has("P_1_2"));
}

TEST_CASE("resonant exchange reproduces the vacuum Rabi period") {
    const double g = 0.01;
    const auto h = jc_hamiltonian(g);
    const auto psi = StateVector::basis(h.dim(), h.index_of({1, 0}));
    const auto t = uniform_grid(0.0, 1.5 * pi / g, 10001);
    const auto tr = evolve(h, psi, t);
    const auto c = downward_crossings(tr.times, tr.at("P_q1"), 0.5);
    REQUIRE(c.size() >= 2);
    const double period = c[1] - c[0];
    CHECK(std::abs(period - pi / g) / (pi / g) < 5e-4);

    double drift = 0.0, de = 0.0;
    const auto& nn = tr.at("norm");
    const auto& en = tr.at("energy");
    for (std::size_t i = 0; i < nn.size(); ++i) {
        drift = std::max(drift, std::abs(nn[i] - 1.0));
        de = std::max(de, std::abs(en[i] - en.front()));
    }
    CHECK(drift < 1e-9);
    CHECK(de < 1e-9 * std::abs(en.front()));
    CHECK(tr.metadata.find("substeps=") != std::string::npos);
}

TEST_CASE("step refinement and bad inputs") {
    const auto h = jc_hamiltonian(0.05);
    const auto psi = StateVector::basis(h.dim(), 1);
    CHECK_THROWS_AS(evolve(h.matrix, StateVector::basis(3, 0), uniform_grid(0, 1, 5)), DimensionMismatch);
    CHECK_THROWS_AS(evolve(h, psi, {0.0, 1.0, 0.5}), ContractViolation);
    CMatrix nh = CMatrix::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(evolve(OperatorMatrix(nh), StateVector::basis(2, 0), uniform_grid(0, 1, 3)), ContractViolation);
    EvolveOptions opt;
    opt.population_limit = 0;
    const auto tr = evolve(h.matrix, psi, uniform_grid(0, 10, 11), opt);
    CHECK(tr.names.size() == 2);
}

TEST_CASE("forward then backward evolution returns the initial state") {
    const auto h = jc_hamiltonian(0.05, 1.0, 8);
    CVector a = CVector::Zero(static_cast<Eigen::Index>(h.dim()));
    a[1] = cplx(0.6, 0.0);
    a[3] = cplx(0.0, 0.8);
    StateVector psi(a);
    const StateVector start = psi;
    for (int k = 0; k < 100; ++k) psi = evolve_step(h.matrix, psi, 0.37);
    for (int k = 0; k < 100; ++k) psi = evolve_step(h.matrix, psi, -0.37);
    CHECK((psi.amplitudes() - start.amplitudes()).norm() < 1e-8);
}

TEST_CASE("free rotor") {
    TransmonParams p;
    p.E_C = 0.5;
    p.E_J = 0.0;
    p.n_g = 0.2;
    const auto tr = classical_trajectory(p, {0.1, 1.0}, uniform_grid(0.0, 3.0, 31));
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr.at("n")[i] == 1.0);
        CHECK(tr.at("phi")[i] == doctest::Approx(0.1 + 8 * 0.5 * 0.8 * tr.times[i]).epsilon(1e-12));
    }
}

TEST_CASE("small oscillations run at the plasma frequency") {
    TransmonParams p;
    p.E_C = 1.0;
    p.E_J = 100.0;
    const auto tr = classical_trajectory(p, {0.01, 0.0}, uniform_grid(0.0, 5.0, 20001));
    const double w = 2 * pi / crossing_period(tr.times, tr.at("phi"));
    CHECK(std::abs(w - std::sqrt(800.0)) / std::sqrt(800.0) < 0.01);
}

TEST_CASE("large amplitude softens the pendulum") {
    TransmonParams p;
    p.E_C = 1.0;
    p.E_J = 100.0;
    const auto tr = classical_trajectory(p, {3.0, 0.0}, uniform_grid(0.0, 3.0, 30001));
    const double period = crossing_period(tr.times, tr.at("phi"));
    CHECK(period > 2 * pi / std::sqrt(800.0));
    CHECK(period == doctest::Approx(pendulum_period(p, 3.0)).epsilon(1e-3));
}

TEST_CASE("symplectic energy error is not secular") {
    TransmonParams p;
    p.E_C = 1.0;
    p.E_J = 100.0;
    ClassicalOptions opt;
    const double w = std::sqrt(800.0);
    const double dt = 2 * pi / w / 100.0;
    opt.max_step = dt * (1.0 + 1e-12);
    const std::size_t samples = 10001, per = 100;
    const auto tr = classical_trajectory(p, {0.5, 0.0},
                                         uniform_grid(0.0, dt * per * (samples - 1), samples), opt);
    CHECK(tr.metadata == "leapfrog steps=1000000");
    const auto& e = tr.at("energy");
    std::vector<double> err(e.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        err[i] = e[i] - e.front();
        worst = std::max(worst, std::abs(err[i]));
    }
    CHECK(std::abs(drift_per_sample(err)) / per < 1e-10);
    CHECK(worst < 0.01 * std::abs(e.front()));
}

TEST_CASE("oversized steps raise a step-size error") {
    TransmonParams p;
    p.E_C = 1.0;
    p.E_J = 100.0;
    ClassicalOptions opt;
    opt.max_step = 0.2;
    CHECK_THROWS_AS(classical_trajectory(p, {2.0, 0.0}, uniform_grid(0.0, 10.0, 51), opt), StepSizeError);
    CHECK_THROWS_AS(classical_trajectory(p, {std::nan(""), 0.0}, uniform_grid(0.0, 1.0, 3)), ContractViolation);
}

TEST_CASE("Ehrenfest identity for the charge") {
    const TransmonParams p;
    const auto psi = transmon_superposition(p);
    const auto r = ehrenfest_check(p, psi, uniform_grid(0.0, 1.0, 5001));
    CHECK(r.residual < 1e-6);
    CHECK(r.warnings.empty());
    const double order = std::log2(r.residual_coarse / r.residual);
    CHECK(order == doctest::Approx(2.0).epsilon(0.05));

    const auto r2 = ehrenfest_check(p, psi, uniform_grid(0.0, 1.0, 10001));
    CHECK(std::log2(r.residual / r2.residual) == doctest::Approx(2.0).epsilon(0.05));

    TransmonParams k = p;
    k.tunneling_sign = TunnelingSign::KochMinus;
    k.n_g = 0.3;
    CHECK(ehrenfest_check(k, transmon_superposition(k), uniform_grid(0.0, 1.0, 5001)).residual < 1e-6);
}

TEST_CASE("Ehrenfest eigenstate and coarse grid") {
    const TransmonParams p;
    const auto s = solve(p);
    const StateVector e0(Eigen::VectorXd(s.eigvecs.col(0)).cast<cplx>());
    CHECK(ehrenfest_check(p, e0, uniform_grid(0.0, 1.0, 2001)).residual < 1e-8);

    const auto r = ehrenfest_check(p, transmon_superposition(p), uniform_grid(0.0, 2.0, 41));
    CHECK_FALSE(r.warnings.empty());
    CHECK_THROWS_AS(ehrenfest_check(p, e0, {0.0, 0.1, 0.3, 0.4, 0.5}), ContractViolation);
}
