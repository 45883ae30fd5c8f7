#include "cqed/dynamics.hpp"

#include "cqed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace cqed {

namespace {

void check_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw InvalidDimension("time grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!std::isfinite(t_grid[i])) throw ContractViolation("time grid has a non-finite entry");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ContractViolation("time grid must be ascending");
    }
}

std::string label_name(const BasisLabel& l) {
    std::string s = "P";
    for (int v : l) s += "_" + std::to_string(v);
    return s;
}

struct Recorder {
    const OperatorMatrix& h;
    const EvolveOptions& opt;
    std::vector<std::string> pop_names;

    void record(Trajectory& tr, const CVector& psi, double energy) const {
        tr.record("norm", psi.norm());
        tr.record("energy", energy);
        for (std::size_t k = 0; k < pop_names.size(); ++k) {
            tr.record(pop_names[k], std::norm(psi[static_cast<Eigen::Index>(k)]));
        }
        for (const auto& [name, op] : opt.observables) tr.record(name, expectation(op, psi).real());
    }
};

Trajectory run_substeps(const Propagator& prop, const Recorder& rec, const CVector& psi0,
                        const std::vector<double>& t_grid, std::size_t nsub) {
    const Eigen::VectorXd& e = prop.eigenvalues();
    const CMatrix& v = prop.eigenvectors();
    CVector c = v.adjoint() * psi0;
    std::map<double, CVector> phases;

    Trajectory tr;
    tr.times = t_grid;
    rec.record(tr, psi0, e.dot(c.cwiseAbs2()));
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double dt = (t_grid[i] - t_grid[i - 1]) / static_cast<double>(nsub);
        auto it = phases.find(dt);
        if (it == phases.end()) {
            CVector ph(e.size());
            for (Eigen::Index j = 0; j < e.size(); ++j) ph[j] = std::polar(1.0, -e[j] * dt);
            it = phases.emplace(dt, std::move(ph)).first;
        }
        for (std::size_t s = 0; s < nsub; ++s) {
            const double before = c.norm();
            c = c.cwiseProduct(it->second);
            if (!c.allFinite() || std::abs(c.norm() - before) > 1e-12) {
                throw NumericError("evolution step changed the state norm beyond 1e-12");
            }
        }
        rec.record(tr, v * c, e.dot(c.cwiseAbs2()));
    }
    tr.metadata = "substeps=" + std::to_string(nsub);
    return tr;
}

double final_change(const Trajectory& a, const Trajectory& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.names.size(); ++k) {
        d = std::max(d, std::abs(a.series[k].back() - b.series[k].back()));
    }
    return d;
}

}  // namespace

Trajectory evolve(const OperatorMatrix& h, const StateVector& psi0, const std::vector<double>& t_grid,
                  const EvolveOptions& opt) {
    check_grid(t_grid);
    if (!h.is_hermitian()) throw ContractViolation("evolve needs a hermitian generator");
    if (psi0.dim() != h.dim()) throw DimensionMismatch("initial state and Hamiltonian dimensions differ");
    for (const auto& [name, op] : opt.observables) {
        if (op.dim() != h.dim()) throw DimensionMismatch("observable '" + name + "' has the wrong dimension");
    }
    if (opt.initial_substeps == 0) throw ContractViolation("initial_substeps must be positive");

    Recorder rec{h, opt, {}};
    if (h.dim() <= opt.population_limit) {
        const auto& labels = psi0.labels();
        for (std::size_t k = 0; k < h.dim(); ++k) {
            rec.pop_names.push_back(labels.size() == h.dim() ? label_name(labels[k])
                                                           : "P_" + std::to_string(k));
        }
    }

    const Propagator prop(h);
    std::size_t nsub = opt.initial_substeps;
    Trajectory cur = run_substeps(prop, rec, psi0.amplitudes(), t_grid, nsub);
    if (t_grid.size() < 2) return cur;
    for (std::size_t r = 0; r < opt.max_refinements; ++r) {
        nsub *= 2;
        Trajectory fine = run_substeps(prop, rec, psi0.amplitudes(), t_grid, nsub);
        const double d = final_change(cur, fine);
        cur = std::move(fine);
        if (d < opt.tolerance) return cur;
    }
    cur.warnings.push_back("step refinement did not reach the requested tolerance");
    return cur;
}

Trajectory evolve(const CoupledHamiltonian& h, const StateVector& psi0,
                  const std::vector<double>& t_grid, EvolveOptions opt) {
    const std::size_t m = h.transmon_levels;
    std::vector<std::pair<std::string, OperatorMatrix>> extra;
    for (std::size_t i = 0; i < m; ++i) {
        CMatrix proj = CMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        extra.emplace_back("P_q" + std::to_string(i), h.lift_transmon(OperatorMatrix(proj, true)));
    }
    for (std::size_t l = 0; l < h.fock_cutoffs.size(); ++l) {
        extra.emplace_back("n_" + std::to_string(l), h.lift_mode(l, number_op(h.fock_cutoffs[l])));
    }
    extra.insert(extra.end(), opt.observables.begin(), opt.observables.end());
    opt.observables = std::move(extra);
    if (psi0.dim() != h.dim()) throw DimensionMismatch("initial state and Hamiltonian dimensions differ");
    return evolve(h.matrix, StateVector(psi0.amplitudes(), h.labels()), t_grid, opt);
}

bool ClassicalState::finite() const { return std::isfinite(phi) && std::isfinite(n); }

double classical_energy(const TransmonParams& p, const ClassicalState& s) {
    const double dn = s.n - p.n_g;
    return 4.0 * p.E_C * dn * dn - p.E_J * std::cos(s.phi);
}

Trajectory classical_trajectory(const TransmonParams& p, const ClassicalState& s0,
                                const std::vector<double>& t_grid, const ClassicalOptions& opt) {
    p.validate();
    if (!s0.finite()) throw ContractViolation("classical initial state is not finite");
    check_grid(t_grid);

    double h_max = opt.max_step;
    if (h_max <= 0.0) {
        double w = std::sqrt(8.0 * p.E_C * p.E_J);
        w = std::max(w, 8.0 * p.E_C * std::abs(s0.n - p.n_g));
        h_max = w > 0.0 ? 2.0 * std::numbers::pi / w / 200.0 : 1.0;
    }

    ClassicalState s = s0;
    const double e0 = classical_energy(p, s0);
    const double denom = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
    Trajectory tr;
    tr.times = t_grid;
    auto rec = [&]() {
        tr.record("phi", s.phi);
        tr.record("n", s.n);
        tr.record("energy", classical_energy(p, s));
    };
    rec();
    std::size_t steps = 0;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double span = t_grid[i] - t_grid[i - 1];
        const auto nsub = static_cast<std::size_t>(std::ceil(span / h_max - 1e-9));
        const double dt = span / static_cast<double>(std::max<std::size_t>(nsub, 1));
        for (std::size_t k = 0; k < std::max<std::size_t>(nsub, 1); ++k) {
            s.n -= 0.5 * dt * p.E_J * std::sin(s.phi);
            s.phi += dt * 8.0 * p.E_C * (s.n - p.n_g);
            s.n -= 0.5 * dt * p.E_J * std::sin(s.phi);
            ++steps;
        }
        if (!s.finite()) throw StepSizeError("classical trajectory diverged");
        const double drift = std::abs(classical_energy(p, s) - e0);
        if (drift > 0.01 * denom) {
            throw StepSizeError("classical energy drift " + std::to_string(drift) +
                                " exceeds 1% of the initial energy; reduce the step");
        }
        rec();
    }
    tr.metadata = "leapfrog steps=" + std::to_string(steps);
    return tr;
}

double crossing_period(const std::vector<double>& t, const std::vector<double>& x, double level) {
    if (t.size() != x.size()) throw DimensionMismatch("time and series lengths differ");
    std::vector<double> c;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double a = x[i - 1] - level;
        const double b = x[i] - level;
        if (a < 0.0 && b >= 0.0) c.push_back(t[i - 1] + (t[i] - t[i - 1]) * (-a) / (b - a));
    }
    if (c.size() < 2) return std::nan("");
    return (c.back() - c.front()) / static_cast<double>(c.size() - 1);
}

double drift_per_sample(const std::vector<double>& y) {
    const auto n = static_cast<double>(y.size());
    if (y.size() < 2) throw InvalidDimension("drift fit needs at least 2 samples");
    const double xm = (n - 1.0) / 2.0;
    double ym = 0.0;
    for (double v : y) ym += v;
    ym /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dx = static_cast<double>(i) - xm;
        sxy += dx * (y[i] - ym);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double pendulum_period(const TransmonParams& p, double phi0) {
    if (!(p.E_C > 0.0 && p.E_J > 0.0)) throw ContractViolation("pendulum period needs E_C, E_J > 0");
    if (!(std::abs(phi0) < std::numbers::pi)) throw ContractViolation("amplitude must be below pi");
    return 4.0 * std::comp_ellint_1(std::sin(std::abs(phi0) / 2.0)) / std::sqrt(8.0 * p.E_C * p.E_J);
}

EhrenfestResult ehrenfest_check(const OperatorMatrix& h, const OperatorMatrix& n_op,
                                const OperatorMatrix& sin_op, double E_J, const StateVector& psi0,
                                const std::vector<double>& t_grid) {
    check_grid(t_grid);
    if (t_grid.size() < 5) throw InvalidDimension("Ehrenfest check needs at least 5 grid points");
    if (n_op.dim() != h.dim() || sin_op.dim() != h.dim() || psi0.dim() != h.dim()) {
        throw DimensionMismatch("Ehrenfest operators and state must share the Hamiltonian dimension");
    }
    const double dt = (t_grid.back() - t_grid.front()) / static_cast<double>(t_grid.size() - 1);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (std::abs(t_grid[i] - t_grid[i - 1] - dt) > 1e-9 * dt) {
            throw ContractViolation("Ehrenfest check needs a uniform time grid");
        }
    }

    const Propagator prop(h);
    const std::size_t nt = t_grid.size();
    std::vector<double> n(nt), rhs(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const CVector psi = prop.apply(psi0.amplitudes(), t_grid[i] - t_grid.front());
        n[i] = expectation(n_op, psi).real();
        rhs[i] = -E_J * expectation(sin_op, psi).real();
    }

    EhrenfestResult r;
    double peak = 0.0;
    for (double v : rhs) peak = std::max(peak, std::abs(v));
    // An eigenstate makes both sides vanish; fall back to E_J as the scale.
    r.scale = peak >= 1e-6 * std::abs(E_J) && peak > 0.0 ? peak : std::max(std::abs(E_J), 1.0);

    auto max_residual = [&](std::size_t stride) {
        double m = 0.0;
        const double h2 = 2.0 * dt * static_cast<double>(stride);
        for (std::size_t i = stride; i + stride < nt; ++i) {
            m = std::max(m, std::abs((n[i + stride] - n[i - stride]) / h2 - rhs[i]));
        }
        return m / r.scale;
    };
    r.residual = max_residual(1);
    r.residual_coarse = max_residual(2);
    const double fd_error = std::abs(r.residual_coarse - r.residual) / 3.0;
    if (fd_error > 1e-6) {
        r.warnings.push_back("time grid too coarse: finite-difference error estimate " +
                             std::to_string(fd_error) + " exceeds 1e-6");
    }
    return r;
}

EhrenfestResult ehrenfest_check(const TransmonParams& p, const StateVector& psi0,
                                const std::vector<double>& t_grid) {
    p.validate();
    return ehrenfest_check(build_charge_hamiltonian(p), charge_operator(p), sin_phi_operator(p), p.E_J,
                           psi0, t_grid);
}

}  // namespace cqed
