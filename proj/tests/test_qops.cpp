#include <doctest.h>

#include "cqed/errors.hpp"
#include "cqed/qops.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

using namespace cqed;

namespace {

CMatrix random_matrix(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    const auto m = static_cast<Eigen::Index>(n);
    CMatrix a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) = cplx(dist(rng), dist(rng));
    return a;
}

CMatrix random_hermitian(std::size_t n, std::mt19937& rng) {
    const CMatrix a = random_matrix(n, rng);
    return 0.5 * (a + a.adjoint());
}

CVector random_state(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    CVector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = cplx(dist(rng), dist(rng));
    return v.normalized();
}

}  // namespace

TEST_CASE("annihilation operator entries") {
    const auto a2 = annihilation_op(2);
    CHECK(a2(0, 1) == cplx(1.0));
    CHECK(a2(0, 0) == cplx(0.0));
    CHECK(a2(1, 0) == cplx(0.0));
    CHECK(a2(1, 1) == cplx(0.0));

    const auto a3 = annihilation_op(3);
    CHECK(a3(0, 1).real() == doctest::Approx(1.0));
    CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(a3.entries().cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));

    CHECK_THROWS_AS(annihilation_op(0), InvalidDimension);
    CHECK_THROWS_AS(number_op(0), InvalidDimension);
}

TEST_CASE("truncated ladder commutator") {
    for (std::size_t n : {3u, 6u, 11u}) {
        const auto a = annihilation_op(n);
        const auto c = commutator(a, a.dagger());
        CMatrix expected = CMatrix::Identity(n, n);
        expected(n - 1, n - 1) = -static_cast<double>(n - 1);
        CHECK((c.entries() - expected).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("number operator") {
    const auto n3 = number_op(3);
    CHECK(n3(2, 2).real() == 2.0);
    const auto a = annihilation_op(5);
    CHECK((number_op(5).entries() - (a.dagger() * a).entries()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(number_op(4).entries().trace().real() == 6.0);
}

TEST_CASE("tensor product layout and mixed product") {
    const auto i4 = tensor_product(identity_op(2), identity_op(2));
    CHECK((i4.entries() - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937 rng(7);
    const OperatorMatrix a(random_matrix(2, rng)), b(random_matrix(2, rng));
    const OperatorMatrix c(random_matrix(2, rng)), d(random_matrix(2, rng));
    const auto lhs = tensor_product(a, b) * tensor_product(c, d);
    const auto rhs = tensor_product(a * c, b * d);
    CHECK((lhs.entries() - rhs.entries()).cwiseAbs().maxCoeff() < 1e-12);

    const OperatorMatrix x(random_matrix(3, rng));
    const OperatorMatrix y(random_matrix(2, rng));
    const auto xy = tensor_product(x, y);
    CHECK(xy(1 * 2 + 0, 2 * 2 + 1) == x(1, 2) * y(0, 1));
}

TEST_CASE("tensor product partial expectation") {
    std::mt19937 rng(11);
    const OperatorMatrix a(random_hermitian(3, rng), true);
    const CVector pa = random_state(3, rng);
    const CVector pb = random_state(4, rng);
    CVector joint(12);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 4; ++k) joint[i * 4 + k] = pa[i] * pb[k];
    const auto ai = tensor_product(a, identity_op(4));
    CHECK(std::abs(expectation(ai, joint) - expectation(a, pa)) < 1e-12);
}

TEST_CASE("tensor product capacity") {
    CHECK_THROWS_AS(tensor_product(identity_op(100), identity_op(100)), CapacityError);
    CHECK_NOTHROW(tensor_product(identity_op(100), identity_op(100), 10000));
}

TEST_CASE("commutator identities and mismatch") {
    std::mt19937 rng(3);
    const OperatorMatrix a(random_matrix(4, rng));
    CHECK(commutator(identity_op(4), a).max_abs() < 1e-14);
    CHECK_THROWS_AS(commutator(identity_op(3), a), DimensionMismatch);
}

TEST_CASE("expectation values") {
    const auto n = number_op(4);
    CHECK(std::abs(expectation(n, StateVector::basis(4, 0))) == 0.0);
    CHECK(expectation(n, StateVector::basis(4, 1)).real() == doctest::Approx(1.0));
    std::mt19937 rng(5);
    const StateVector psi(random_state(6, rng));
    CHECK(std::abs(expectation(identity_op(6), psi) - 1.0) < 1e-12);
    const OperatorMatrix h(random_hermitian(6, rng), true);
    CHECK(std::abs(expectation(h, psi).imag()) < 1e-12);
    CHECK_THROWS_AS(expectation(identity_op(5), psi), DimensionMismatch);
}

TEST_CASE("state vector invariants") {
    CVector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(StateVector{v}, ContractViolation);
    CHECK_NOTHROW(StateVector::normalized(v, integer_labels(2)));
    CHECK_THROWS_AS(StateVector(v.normalized(), integer_labels(3)), DimensionMismatch);
}

TEST_CASE("hermitian hint is validated") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(OperatorMatrix(m, true), ContractViolation);
    CHECK_THROWS_AS(OperatorMatrix(CMatrix::Zero(2, 3)), InvalidDimension);
}

TEST_CASE("evolve_step eigenstate phase and identity") {
    const double omega = 1.7, t = 0.9;
    const auto h = omega * number_op(4);
    const auto out = evolve_step(h, StateVector::basis(4, 1), t);
    CHECK(std::abs(out.amplitudes()[1] - std::polar(1.0, -omega * t)) < 1e-14);
    CHECK(std::norm(out.amplitudes()[1]) == doctest::Approx(1.0));

    std::mt19937 rng(1);
    const StateVector psi(random_state(5, rng));
    const OperatorMatrix zero(CMatrix::Zero(5, 5), true);
    CHECK((evolve_step(zero, psi, 3.0).amplitudes() - psi.amplitudes()).norm() < 1e-15);
}

TEST_CASE("evolve_step matches dense matrix exponential") {
    std::mt19937 rng(42);
    const CMatrix hm = random_hermitian(8, rng);
    const OperatorMatrix h(hm, true);
    const StateVector psi(random_state(8, rng));
    const double dt = 0.1;
    const CMatrix u = (cplx(0.0, -dt) * hm).exp();
    const CVector ref = u * psi.amplitudes();
    const CVector got = evolve_step(h, psi, dt).amplitudes();
    CHECK((got - ref).norm() / ref.norm() < 1e-10);
    CHECK(std::abs(got.norm() - 1.0) < 1e-12);

    const Propagator prop(h);
    CHECK((prop.unitary(dt) - u).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("evolve_step composes and matches oracle at dimension 200") {
    std::mt19937 rng(9);
    const CMatrix hm = random_hermitian(200, rng);
    const OperatorMatrix h(hm, true);
    const StateVector psi(random_state(200, rng));
    const double dt = 0.05;
    const auto one = evolve_step(h, psi, dt);
    const auto two = evolve_step(h, evolve_step(h, psi, dt / 2), dt / 2);
    CHECK((one.amplitudes() - two.amplitudes()).norm() < 1e-9);
    const CVector ref = (cplx(0.0, -dt) * hm).exp() * psi.amplitudes();
    CHECK((one.amplitudes() - ref).norm() / ref.norm() < 1e-9);
}

TEST_CASE("evolve_step errors") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    const OperatorMatrix nonherm(m);
    CHECK_THROWS_AS(evolve_step(nonherm, StateVector::basis(2, 0), 0.1), ContractViolation);
    CHECK_THROWS_AS(evolve_step(identity_op(2), StateVector::basis(2, 0), std::nan("")),
                    NumericError);
}
