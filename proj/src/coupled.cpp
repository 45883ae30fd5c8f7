#include "cqed/coupled.hpp"

#include "cqed/errors.hpp"
#include "cqed/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cqed {

namespace {

void require_ready(const TransmonSolution& ts, const ModeSet& modes, const CouplingSpec& cs,
                   std::size_t m, const std::vector<std::size_t>& fock) {
    if (m < 2) throw InvalidDimension("need at least 2 transmon levels");
    if (m > ts.n_levels()) throw IndexError("more transmon levels requested than solved");
    if (!modes.has_coeffs()) throw ContractViolation("mode operator coefficients not filled");
    if (fock.size() != modes.size()) {
        throw DimensionMismatch("need one Fock cutoff per line mode (" +
                                std::to_string(modes.size()) + " modes, " +
                                std::to_string(fock.size()) + " cutoffs)");
    }
    for (auto n : fock) {
        if (n < 2) throw InvalidDimension("each Fock cutoff must be at least 2");
    }
    cs.validate(modes.line.length);
}

CoupledHamiltonian build(const TransmonSolution& ts, const ModeSet& modes, const CouplingSpec& cs,
                         std::size_t m, const std::vector<std::size_t>& fock, double unit,
                         std::size_t max_dim, bool nn) {
    require_ready(ts, modes, cs, m, fock);
    if (!(unit > 0.0)) throw ContractViolation("frequency unit must be positive");
    const Eigen::VectorXd energies = ts.levels.head(static_cast<Eigen::Index>(m));
    std::vector<double> freqs(modes.size());
    std::vector<Eigen::MatrixXd> g(modes.size());
    for (std::size_t l = 0; l < modes.size(); ++l) {
        freqs[l] = modes.omega[l] / unit;
        g[l] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const std::size_t gap = i > j ? i - j : j - i;
                if (nn && gap != 1) continue;
                g[l](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    coupling_strength(ts, modes, cs, i, j, l) / unit;
            }
        }
    }
    CoupledHamiltonian h = assemble(energies, freqs, g, fock, max_dim);
    h.frequency_unit = unit;
    h.nearest_neighbor = nn;
    h.metadata = std::string("tunneling_sign=") + to_string(ts.params.tunneling_sign) +
                 " convention=" + to_string(modes.convention) +
                 " bc=" + to_string(modes.line.bc) +
                 " include_beta=" + (cs.include_beta ? "true" : "false") +
                 " coupling=" + (nn ? "nearest-neighbor" : "full");
    return h;
}

OperatorMatrix position_quadrature(std::size_t n) {
    const auto a = annihilation_op(n);
    return a + a.dagger();
}

OperatorMatrix momentum_quadrature(std::size_t n) {
    const auto a = annihilation_op(n);
    return cplx(0.0, 1.0) * (a.dagger() - a);
}

// Squares computed one Fock level higher, then projected, so the top entry
// is free of the truncation artifact.
CMatrix projected_square(const OperatorMatrix& big, std::size_t n) {
    const CMatrix sq = big.entries() * big.entries();
    const auto k = static_cast<Eigen::Index>(n);
    return sq.topLeftCorner(k, k);
}

}  // namespace

void CouplingSpec::validate(double line_length) const {
    if (!(beta > 0.0) || beta > 1.0) throw ContractViolation("beta must lie in (0, 1]");
    if (!(z0 >= 0.0) || z0 > line_length) {
        throw ContractViolation("z0 must lie on the line [0, " + std::to_string(line_length) + "]");
    }
    if (!std::isfinite(path_gain)) throw ContractViolation("path_gain must be finite");
}

std::size_t CoupledHamiltonian::dim() const {
    std::size_t d = transmon_levels;
    for (auto n : fock_cutoffs) d *= n;
    return d;
}

std::vector<BasisLabel> CoupledHamiltonian::labels() const {
    std::vector<BasisLabel> out;
    out.reserve(dim());
    BasisLabel cur(1 + fock_cutoffs.size(), 0);
    for (std::size_t k = 0; k < dim(); ++k) {
        out.push_back(cur);
        for (std::size_t pos = cur.size(); pos-- > 0;) {
            const std::size_t limit = pos == 0 ? transmon_levels : fock_cutoffs[pos - 1];
            if (static_cast<std::size_t>(++cur[pos]) < limit) break;
            cur[pos] = 0;
        }
    }
    return out;
}

std::size_t CoupledHamiltonian::index_of(const BasisLabel& label) const {
    if (label.size() != 1 + fock_cutoffs.size()) throw DimensionMismatch("basis label length");
    std::size_t idx = 0;
    for (std::size_t pos = 0; pos < label.size(); ++pos) {
        const std::size_t limit = pos == 0 ? transmon_levels : fock_cutoffs[pos - 1];
        if (label[pos] < 0 || static_cast<std::size_t>(label[pos]) >= limit) {
            throw IndexError("basis label entry " + std::to_string(pos) + " out of range");
        }
        idx = idx * limit + static_cast<std::size_t>(label[pos]);
    }
    return idx;
}

OperatorMatrix CoupledHamiltonian::lift_transmon(const OperatorMatrix& op) const {
    if (op.dim() != transmon_levels) throw DimensionMismatch("transmon operator dimension");
    std::vector<OperatorMatrix> f{op};
    for (auto n : fock_cutoffs) f.push_back(identity_op(n));
    return tensor_product(f, std::max(dim(), default_max_dim));
}

OperatorMatrix CoupledHamiltonian::lift_mode(std::size_t l, const OperatorMatrix& op) const {
    if (l >= fock_cutoffs.size()) throw IndexError("mode index out of range");
    if (op.dim() != fock_cutoffs[l]) throw DimensionMismatch("mode operator dimension");
    std::vector<OperatorMatrix> f{identity_op(transmon_levels)};
    for (std::size_t k = 0; k < fock_cutoffs.size(); ++k) {
        f.push_back(k == l ? op : identity_op(fock_cutoffs[k]));
    }
    return tensor_product(f, std::max(dim(), default_max_dim));
}

OperatorMatrix CoupledHamiltonian::excitation_operator() const {
    CMatrix e = lift_transmon(number_op(transmon_levels)).entries();
    for (std::size_t l = 0; l < fock_cutoffs.size(); ++l) {
        e += lift_mode(l, number_op(fock_cutoffs[l])).entries();
    }
    return OperatorMatrix(std::move(e), true);
}

double coupling_strength(const TransmonSolution& ts, const ModeSet& modes, const CouplingSpec& cs,
                         std::size_t i, std::size_t j, std::size_t l) {
    if (!modes.has_coeffs()) throw ContractViolation("mode operator coefficients not filled");
    if (l >= modes.size()) throw IndexError("mode index out of range");
    cs.validate(modes.line.length);
    const double n_ij = charge_matrix_element(ts, i, j);
    return 2.0 * si::electron_charge / si::hbar * cs.beta_eff() * modes.N_V[l] *
           modes.u(l, cs.z0) * cs.path_gain * n_ij;
}

CoupledHamiltonian assemble(const Eigen::VectorXd& transmon_energies,
                            const std::vector<double>& mode_frequencies,
                            const std::vector<Eigen::MatrixXd>& g_table,
                            const std::vector<std::size_t>& fock_cutoffs, std::size_t max_dim) {
    const auto m = static_cast<std::size_t>(transmon_energies.size());
    if (m == 0) throw InvalidDimension("need at least one transmon level");
    if (mode_frequencies.size() != fock_cutoffs.size() || g_table.size() != fock_cutoffs.size()) {
        throw DimensionMismatch("mode frequencies, coupling tables and Fock cutoffs disagree");
    }
    std::size_t dim = m;
    for (auto n : fock_cutoffs) {
        if (n == 0) throw InvalidDimension("Fock cutoff must be positive");
        if (dim > max_dim / n) {
            throw CapacityError("coupled product space exceeds maximum dimension " +
                                std::to_string(max_dim));
        }
        dim *= n;
    }
    for (const auto& g : g_table) {
        if (static_cast<std::size_t>(g.rows()) != m || static_cast<std::size_t>(g.cols()) != m) {
            throw DimensionMismatch("coupling table must be M x M");
        }
        if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(g.cwiseAbs().maxCoeff(), 1e-300)) {
            throw ContractViolation("coupling table must be symmetric");
        }
    }

    CoupledHamiltonian h;
    h.transmon_levels = m;
    h.fock_cutoffs = fock_cutoffs;
    h.transmon_energies = transmon_energies;
    h.mode_frequencies = mode_frequencies;
    h.g_table = g_table;
    CMatrix total = h.lift_transmon(OperatorMatrix(transmon_energies.cast<cplx>().asDiagonal().toDenseMatrix()))
                        .entries();
    for (std::size_t l = 0; l < fock_cutoffs.size(); ++l) {
        total += mode_frequencies[l] * h.lift_mode(l, number_op(fock_cutoffs[l])).entries();
        if (g_table[l].cwiseAbs().maxCoeff() == 0.0) continue;
        std::vector<OperatorMatrix> f{OperatorMatrix(g_table[l].cast<cplx>())};
        for (std::size_t k = 0; k < fock_cutoffs.size(); ++k) {
            f.push_back(k == l ? position_quadrature(fock_cutoffs[k]) : identity_op(fock_cutoffs[k]));
        }
        total += tensor_product(f, max_dim).entries();
    }
    h.matrix = OperatorMatrix(std::move(total), true);
    h.metadata = "assembled";
    return h;
}

CoupledHamiltonian build_full_hamiltonian(const TransmonSolution& ts, const ModeSet& modes,
                                          const CouplingSpec& cs, std::size_t transmon_levels,
                                          const std::vector<std::size_t>& fock_cutoffs,
                                          double frequency_unit, std::size_t max_dim) {
    return build(ts, modes, cs, transmon_levels, fock_cutoffs, frequency_unit, max_dim, false);
}

CoupledHamiltonian build_nn_hamiltonian(const TransmonSolution& ts, const ModeSet& modes,
                                        const CouplingSpec& cs, std::size_t transmon_levels,
                                        const std::vector<std::size_t>& fock_cutoffs,
                                        double frequency_unit, std::size_t max_dim) {
    return build(ts, modes, cs, transmon_levels, fock_cutoffs, frequency_unit, max_dim, true);
}

FieldReduction field_reduction_check(const TransmonSolution& ts, const ModeSet& modes,
                                     const TEMCrossSection& xsec, const CouplingSpec& cs,
                                     std::size_t transmon_levels,
                                     const std::vector<std::size_t>& fock_cutoffs,
                                     const FieldReductionOptions& opt) {
    const CoupledHamiltonian circuit =
        build_full_hamiltonian(ts, modes, cs, transmon_levels, fock_cutoffs, opt.frequency_unit,
                               opt.max_dim);
    const double unit_energy = si::hbar * opt.frequency_unit;
    const double len = modes.line.length;
    const auto m = static_cast<Eigen::Index>(transmon_levels);

    // Transmon block and charge operator projected from the charge basis.
    const Eigen::MatrixXd vm = ts.eigvecs.leftCols(m);
    const Eigen::MatrixXd hq = build_charge_hamiltonian(ts.params).entries().real();
    const Eigen::MatrixXd nq = charge_operator(ts.params).entries().real();
    const Eigen::MatrixXd ht = vm.transpose() * hq * vm;
    const Eigen::MatrixXd nm = vm.transpose() * nq * vm;

    CMatrix total = circuit.lift_transmon(OperatorMatrix(ht.cast<cplx>())).entries();

    // Transverse integrals over the parallel-plate gap.
    const auto xr = quad::composite(0.0, xsec.w, 1, 4);
    const auto yr = quad::composite(0.0, xsec.d, 1, 4);
    double n_et = 0.0;
    for (std::size_t ix = 0; ix < xr.nodes.size(); ++ix)
        for (std::size_t iy = 0; iy < yr.nodes.size(); ++iy)
            n_et += xr.weights[ix] * yr.weights[iy] * xsec.eps_r / (xsec.d * xsec.d);
    const double path = quad::integrate(yr, [&](double) { return 1.0 / xsec.d; }) * cs.path_gain;

    const double sigma = opt.sigma_fraction * len;
    const double z_lo = std::max(0.0, cs.z0 - 8.0 * sigma);
    const double z_hi = std::min(len, cs.z0 + 8.0 * sigma);
    const auto dr = quad::composite(z_lo, z_hi, opt.delta_panels, 8);
    auto gauss = [&](double z) { return std::exp(-0.5 * (z - cs.z0) * (z - cs.z0) / (sigma * sigma)); };
    const double g_norm = quad::integrate(dr, gauss);
    const auto lr = quad::composite(0.0, len, 32 * (modes.size() + 1), 8);

    for (std::size_t l = 0; l < modes.size(); ++l) {
        const std::size_t nf = fock_cutoffs[l];
        const double w = modes.omega[l];
        double n_el = modes.N_EL[l];
        double n_hl = modes.N_HL[l];
        if (modes.convention == Convention::LiteralIntegral) {
            n_el = quad::integrate(lr, [&](double z) { return modes.u(l, z) * modes.u(l, z); });
            n_hl = quad::integrate(lr, [&](double z) { return modes.v(l, z) * modes.v(l, z); });
        }
        // Electric and magnetic energy of the mode, zero-point removed.
        const CMatrix x2 = projected_square(position_quadrature(nf + 1), nf);
        const CMatrix p2 = projected_square(momentum_quadrature(nf + 1), nf);
        const double ce = xsec.C_k * n_el * modes.N_V[l] * modes.N_V[l];
        const double le = xsec.L_k * n_hl * modes.N_I[l] * modes.N_I[l];
        const auto nn = static_cast<Eigen::Index>(nf);
        CMatrix hf = (0.5 * (ce * x2 + le * p2) - 0.5 * si::hbar * w * CMatrix::Identity(nn, nn)) /
                     unit_energy;
        total += circuit.lift_mode(l, OperatorMatrix(hf)).entries();

        // Current density 2 e beta d delta(z - z0) dn/dt against the mode field.
        const double n_e = std::sqrt(si::hbar * w / (2.0 * si::epsilon0 * n_et * n_el));
        const double v_at =
            quad::integrate(dr, [&](double z) { return gauss(z) * modes.u(l, z); }) / g_norm;
        const double k = 2.0 * si::electron_charge * cs.beta_eff() * n_e * path * v_at / unit_energy;
        std::vector<OperatorMatrix> f{OperatorMatrix((k * nm).cast<cplx>())};
        for (std::size_t q = 0; q < fock_cutoffs.size(); ++q) {
            f.push_back(q == l ? position_quadrature(fock_cutoffs[q]) : identity_op(fock_cutoffs[q]));
        }
        total += tensor_product(f, opt.max_dim).entries();
    }

    FieldReduction out;
    out.H_field = std::move(total);
    out.H_circuit = circuit.matrix.entries();
    out.max_diff = (out.H_field - out.H_circuit).cwiseAbs().maxCoeff();
    out.max_abs = circuit.matrix.max_abs();
    return out;
}

}  // namespace cqed
