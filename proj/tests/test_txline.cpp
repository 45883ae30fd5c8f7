#include <doctest.h>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/quadrature.hpp"
#include "cqed/txline.hpp"

#include <cmath>
#include <random>

using namespace cqed;

namespace {

LineParams reference_line(BoundaryCondition bc = BoundaryCondition::OpenOpen) {
    LineParams line;
    line.L_pul = 4.0e-7;
    line.C_pul = 1.6e-10;
    line.length = 0.0125;
    line.bc = bc;
    return line;
}

double overlap(const ModeSet& m, std::size_t a, std::size_t b, bool current = false) {
    const auto rule = quad::composite(0.0, m.line.length, 64, 8);
    return quad::integrate(rule, [&](double z) {
        return current ? m.v(a, z) * m.v(b, z) : m.u(a, z) * m.u(b, z);
    });
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    for (std::size_t n : {1u, 2u, 5u, 8u, 16u}) {
        const auto r = quad::gauss_legendre(n);
        for (std::size_t deg = 0; deg < 2 * n; ++deg) {
            const double got = quad::integrate(r, [&](double x) { return std::pow(x, deg); });
            const double exact = deg % 2 ? 0.0 : 2.0 / static_cast<double>(deg + 1);
            CHECK(std::abs(got - exact) < 1e-14);
        }
    }
    const auto c = quad::composite(0.0, si::pi, 10, 8);
    CHECK(quad::integrate(c, [](double x) { return std::sin(x); }) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("phase velocity and fundamental frequency") {
    const auto m = compute_modes(reference_line(), 4);
    CHECK(reference_line().phase_velocity() == doctest::Approx(1.25e8).epsilon(1e-14));
    CHECK(m.omega[0] / (2 * si::pi) == doctest::Approx(5.0e9).epsilon(1e-13));
    for (std::size_t l = 0; l < m.size(); ++l) {
        CHECK(std::abs(m.omega[l] / static_cast<double>(l + 1) - m.omega[0]) < 1e-12 * m.omega[0]);
    }
    const auto s = compute_modes(reference_line(BoundaryCondition::ShortShort), 3);
    CHECK(std::abs(s.omega[2] / 3.0 - s.omega[0]) < 1e-12 * s.omega[0]);
    const auto q = compute_modes(reference_line(BoundaryCondition::OpenShort), 3);
    CHECK(q.omega[0] == doctest::Approx(0.5 * m.omega[0]).epsilon(1e-14));
    CHECK(q.omega[1] == doctest::Approx(1.5 * m.omega[0]).epsilon(1e-14));
}

TEST_CASE("mode functions, nodes and boundary values") {
    const auto m = compute_modes(reference_line(), 3);
    const double len = m.line.length;
    CHECK(std::abs(m.u(0, len / 2)) < 1e-15);
    CHECK(m.u(0, 0.0) == 1.0);
    CHECK(std::abs(m.v(1, len)) < 1e-15);
    const auto s = compute_modes(reference_line(BoundaryCondition::ShortShort), 3);
    CHECK(s.u(2, 0.0) == 0.0);
    CHECK(std::abs(s.u(2, len)) < 1e-15);
    const auto q = compute_modes(reference_line(BoundaryCondition::OpenShort), 3);
    CHECK(q.u(1, 0.0) == 1.0);
    CHECK(std::abs(q.u(1, len)) < 1e-15);
    CHECK_THROWS_AS(m.u(3, 0.0), IndexError);
}

TEST_CASE("orthogonality and literal normalization") {
    for (auto bc : {BoundaryCondition::OpenOpen, BoundaryCondition::ShortShort,
                    BoundaryCondition::OpenShort}) {
        const auto m = compute_modes(reference_line(bc), 5);
        for (std::size_t a = 0; a < 5; ++a) {
            CHECK(m.N_EL[a] == doctest::Approx(m.line.length / 2));
            CHECK(std::abs(overlap(m, a, a) - m.N_EL[a]) < 1e-10 * m.N_EL[a]);
            CHECK(std::abs(overlap(m, a, a, true) - m.N_HL[a]) < 1e-10 * m.N_HL[a]);
            for (std::size_t b = a + 1; b < 5; ++b) {
                CHECK(std::abs(overlap(m, a, b)) < 1e-12 * m.N_EL[a]);
                CHECK(std::abs(overlap(m, a, b, true)) < 1e-12 * m.N_HL[a]);
            }
        }
    }
    const auto b = compute_modes(reference_line(), 2, Convention::BlaisCompat);
    CHECK(b.N_EL[0] == reference_line().length);
}

TEST_CASE("parallel plate cross-section") {
    const auto x = tem_cross_section(10e-6, 5e-6, 1.0);
    CHECK(x.C_k == doctest::Approx(2 * si::epsilon0).epsilon(1e-14));
    CHECK(x.C_k == doctest::Approx(1.771e-11).epsilon(1e-3));
    CHECK(x.L_k == doctest::Approx(si::mu0 / 2).epsilon(1e-14));
    CHECK(x.C_k * x.L_k == doctest::Approx(si::mu0 * si::epsilon0).epsilon(1e-14));

    const auto x4 = tem_cross_section(10e-6, 5e-6, 4.0);
    const double v1 = 1.0 / std::sqrt(x.C_k * x.L_k);
    const double v4 = 1.0 / std::sqrt(x4.C_k * x4.L_k);
    CHECK(v4 == doctest::Approx(v1 / 2).epsilon(1e-14));

    const auto e = equivalent_cross_section(reference_line());
    CHECK(e.C_k == doctest::Approx(1.6e-10).epsilon(1e-13));
    CHECK(e.L_k == doctest::Approx(4.0e-7).epsilon(1e-13));
    CHECK_THROWS_AS(tem_cross_section(0.0, 1.0, 1.0), ContractViolation);
}

TEST_CASE("voltage and current operator coefficients") {
    const auto line = reference_line();
    const auto xsec = equivalent_cross_section(line);
    const auto blais = mode_operator_coeffs(compute_modes(line, 2, Convention::BlaisCompat), xsec);
    const double c_r = line.C_pul * line.length;
    CHECK(c_r == doctest::Approx(2.0e-12).epsilon(1e-14));
    const double expected = std::sqrt(si::hbar * blais.omega[0] / (2 * c_r));
    CHECK(blais.N_V[0] == doctest::Approx(expected).epsilon(1e-13));
    CHECK(blais.N_V[0] == doctest::Approx(9.1e-7).epsilon(0.01));

    const auto lit = mode_operator_coeffs(compute_modes(line, 2), xsec);
    CHECK(lit.N_V[0] / blais.N_V[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    for (const auto* m : {&blais, &lit}) {
        for (std::size_t l = 0; l < m->size(); ++l) {
            const double ce = xsec.C_k * m->N_V[l] * m->N_V[l] * m->N_EL[l];
            const double le = xsec.L_k * m->N_I[l] * m->N_I[l] * m->N_HL[l];
            CHECK(ce == doctest::Approx(si::hbar * m->omega[l] / 2).epsilon(1e-13));
            CHECK(le == doctest::Approx(ce).epsilon(1e-13));
        }
    }
}

TEST_CASE("energy correspondence") {
    const auto line = reference_line();
    const auto xsec = equivalent_cross_section(line);
    const auto m = compute_modes(line, 5);
    using c = std::complex<double>;

    const auto zero = energy_correspondence(m, xsec, std::vector<c>(5), std::vector<c>(5));
    CHECK(zero.field_energy == 0.0);
    CHECK(zero.line_energy == 0.0);

    const auto one_mode = compute_modes(line, 1);
    const auto e1 = energy_correspondence(one_mode, xsec, {c(1.0)}, {c(0.0)});
    CHECK(std::abs(e1.field_energy - e1.line_energy) < 1e-10 * e1.line_energy);
    CHECK(e1.line_energy == doctest::Approx(one_mode.omega[0] / 2).epsilon(1e-12));
    const auto e2 = energy_correspondence(one_mode, xsec, {c(2.0)}, {c(0.0)});
    CHECK(e2.field_energy == doctest::Approx(4 * e1.field_energy).epsilon(1e-12));
    CHECK(e2.line_energy == doctest::Approx(4 * e1.line_energy).epsilon(1e-12));

    std::mt19937 rng(2024);
    std::normal_distribution<double> dist;
    for (int draw = 0; draw < 5; ++draw) {
        std::vector<c> q(5), p(5);
        double expected = 0.0;
        for (std::size_t l = 0; l < 5; ++l) {
            q[l] = c(dist(rng), dist(rng));
            p[l] = c(dist(rng), dist(rng));
            expected += m.omega[l] / 2 * (std::norm(q[l]) + std::norm(p[l]));
        }
        for (auto conv : {Convention::LiteralIntegral, Convention::BlaisCompat}) {
            const auto mc = compute_modes(line, 5, conv);
            const auto e = energy_correspondence(mc, xsec, q, p);
            CHECK(std::abs(e.field_energy - e.line_energy) < 1e-9 * e.line_energy);
            if (conv == Convention::LiteralIntegral) {
                CHECK(e.line_energy == doctest::Approx(expected).epsilon(1e-11));
            }
        }
    }
    CHECK_THROWS_AS(energy_correspondence(m, xsec, {c(1.0)}, {c(1.0)}), DimensionMismatch);
    CHECK_THROWS_AS(
        energy_correspondence(one_mode, xsec, {c(std::nan(""))}, {c(0.0)}), NumericError);
}
