#include "cqed/transmon.hpp"

#include "cqed/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace cqed {

namespace {

double tunnel_sign(TunnelingSign s) { return s == TunnelingSign::PaperPlus ? 1.0 : -1.0; }

Eigen::MatrixXd real_charge_hamiltonian(const TransmonParams& p) {
    const auto n = static_cast<Eigen::Index>(p.dim());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    const double t = tunnel_sign(p.tunneling_sign) * 0.5 * p.E_J;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double q = static_cast<double>(p.charge(static_cast<std::size_t>(k))) - p.n_g;
        h(k, k) = 4.0 * p.E_C * q * q;
        if (k + 1 < n) {
            h(k, k + 1) = t;
            h(k + 1, k) = t;
        }
    }
    return h;
}

void fix_phase(Eigen::Ref<Eigen::VectorXd> v) {
    const double m = v.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (std::abs(v[k]) >= m * (1.0 - 1e-9)) {
            if (v[k] < 0.0) v = -v;
            return;
        }
    }
}

Eigen::VectorXd levels_only(const TransmonParams& p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_charge_hamiltonian(p),
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("transmon eigensolver did not converge");
    return es.eigenvalues();
}

}  // namespace

const char* to_string(TunnelingSign s) {
    return s == TunnelingSign::PaperPlus ? "PaperPlus" : "KochMinus";
}

void TransmonParams::validate() const {
    if (!std::isfinite(E_C) || !std::isfinite(E_J) || !std::isfinite(n_g)) {
        throw ContractViolation("transmon parameters must be finite");
    }
    if (E_C <= 0.0) throw ContractViolation("E_C must be positive");
    if (E_J < 0.0) throw ContractViolation("E_J must be non-negative");
    if (n_cutoff < 1) throw ContractViolation("n_cutoff must be at least 1");
}

OperatorMatrix build_charge_hamiltonian(const TransmonParams& p) {
    p.validate();
    return OperatorMatrix(real_charge_hamiltonian(p).cast<cplx>(), true);
}

OperatorMatrix charge_operator(const TransmonParams& p) {
    p.validate();
    const auto n = static_cast<Eigen::Index>(p.dim());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) m(k, k) = p.charge(static_cast<std::size_t>(k));
    return OperatorMatrix(std::move(m), true);
}

OperatorMatrix sin_phi_operator(const TransmonParams& p) {
    p.validate();
    const auto n = static_cast<Eigen::Index>(p.dim());
    const cplx c = tunnel_sign(p.tunneling_sign) / cplx(0.0, 2.0);
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        m(k, k + 1) = c;
        m(k + 1, k) = -c;
    }
    return OperatorMatrix(std::move(m), true);
}

OperatorMatrix cos_phi_operator(const TransmonParams& p) {
    p.validate();
    const auto n = static_cast<Eigen::Index>(p.dim());
    const double c = -0.5 * tunnel_sign(p.tunneling_sign);
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        m(k, k + 1) = c;
        m(k + 1, k) = c;
    }
    return OperatorMatrix(std::move(m), true);
}

TransmonSolution solve(const TransmonParams& p) {
    p.validate();
    const Eigen::MatrixXd h = real_charge_hamiltonian(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) {
        throw NumericError("transmon eigensolver did not converge (dim " +
                           std::to_string(p.dim()) + ", E_J/E_C " +
                           std::to_string(p.E_J / p.E_C) + ")");
    }
    TransmonSolution s;
    s.levels = es.eigenvalues();
    s.eigvecs = es.eigenvectors();
    s.params = p;
    s.phase_convention = "largest-magnitude charge component real-positive, lowest index on ties";
    for (Eigen::Index j = 0; j < s.eigvecs.cols(); ++j) fix_phase(s.eigvecs.col(j));

    const double hnorm = std::max(h.norm(), 1e-300);
    for (Eigen::Index j = 0; j < s.eigvecs.cols(); ++j) {
        const double r = (h * s.eigvecs.col(j) - s.levels[j] * s.eigvecs.col(j)).norm();
        if (r > 1e-10 * hnorm) {
            throw NumericError("transmon eigenpair " + std::to_string(j) + " residual " +
                               std::to_string(r / hnorm) + " exceeds 1e-10");
        }
    }
    return s;
}

double charge_matrix_element(const TransmonSolution& s, std::size_t i, std::size_t j) {
    if (i >= s.n_levels() || j >= s.n_levels()) {
        throw IndexError("charge matrix element index out of range (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") with " + std::to_string(s.n_levels()) +
                         " levels");
    }
    const auto a = static_cast<Eigen::Index>(std::min(i, j));
    const auto b = static_cast<Eigen::Index>(std::max(i, j));
    double sum = 0.0;
    for (Eigen::Index k = 0; k < s.eigvecs.rows(); ++k) {
        sum += s.eigvecs(k, a) * s.params.charge(static_cast<std::size_t>(k)) * s.eigvecs(k, b);
    }
    return sum;
}

Eigen::MatrixXd charge_matrix(const TransmonSolution& s, std::size_t m) {
    if (m > s.n_levels()) throw IndexError("requested more levels than the transmon basis holds");
    const auto n = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = charge_matrix_element(s, static_cast<std::size_t>(i),
                                              static_cast<std::size_t>(j));
    return out;
}

double charge_dispersion(const TransmonParams& p, std::size_t level) {
    p.validate();
    if (level >= p.dim()) throw IndexError("dispersion level beyond charge basis");
    auto sweep = [&](std::size_t intervals) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t k = 0; k <= intervals; ++k) {
            TransmonParams q = p;
            q.n_g = static_cast<double>(k) / static_cast<double>(intervals);
            const double w = levels_only(q)[static_cast<Eigen::Index>(level)];
            if (k == 0 || w < lo) lo = w;
            if (k == 0 || w > hi) hi = w;
        }
        return hi - lo;
    };
    std::size_t intervals = 20;
    double prev = sweep(intervals);
    for (int refine = 0; refine < 8; ++refine) {
        intervals *= 2;
        const double cur = sweep(intervals);
        if (std::abs(cur - prev) <= 0.01 * std::abs(cur) || std::abs(cur - prev) < 1e-300) {
            return cur;
        }
        prev = cur;
    }
    return prev;
}

double anharmonicity(const TransmonSolution& s) {
    if (s.n_levels() < 3) throw IndexError("anharmonicity needs at least 3 levels");
    return (s.levels[2] - s.levels[1]) - (s.levels[1] - s.levels[0]);
}

double asymptotic_charge_element(const TransmonParams& p) {
    return std::pow(p.E_J / (8.0 * p.E_C), 0.25) / std::sqrt(2.0);
}

}  // namespace cqed
