#include "cqed/qops.hpp"

#include "cqed/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace cqed {

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error([&] {
          std::string msg = "invalid configuration";
          for (const auto& v : violations) msg += "\n  " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a.dim()) +
                                " and " + std::to_string(b.dim()));
    }
}

bool all_finite(const CVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    }
    return true;
}

}  // namespace

OperatorMatrix::OperatorMatrix(CMatrix entries, bool hermitian_hint)
    : entries_(std::move(entries)), hermitian_hint_(hermitian_hint) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw InvalidDimension("operator matrix must be square and non-empty, got " +
                               std::to_string(entries_.rows()) + "x" +
                               std::to_string(entries_.cols()));
    }
    if (hermitian_hint_ && !is_hermitian()) {
        throw ContractViolation("operator flagged hermitian has defect " +
                                std::to_string(hermiticity_defect()));
    }
}

double OperatorMatrix::hermiticity_defect() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double OperatorMatrix::max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

bool OperatorMatrix::is_hermitian(double rel_tol) const {
    const double scale = max_abs();
    return hermiticity_defect() <= rel_tol * (scale > 0.0 ? scale : 1.0);
}

OperatorMatrix OperatorMatrix::dagger() const {
    return OperatorMatrix(entries_.adjoint(), hermitian_hint_);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a, b, "operator sum");
    return OperatorMatrix(a.entries_ + b.entries_, a.hermitian_hint_ && b.hermitian_hint_);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a, b, "operator difference");
    return OperatorMatrix(a.entries_ - b.entries_, a.hermitian_hint_ && b.hermitian_hint_);
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a, b, "operator product");
    return OperatorMatrix(a.entries_ * b.entries_);
}

OperatorMatrix operator*(double s, const OperatorMatrix& a) {
    return OperatorMatrix(s * a.entries_, a.hermitian_hint_);
}

OperatorMatrix operator*(cplx s, const OperatorMatrix& a) {
    return OperatorMatrix(s * a.entries_, a.hermitian_hint_ && s.imag() == 0.0);
}

StateVector::StateVector(CVector amplitudes, std::vector<BasisLabel> labels)
    : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)) {
    if (amplitudes_.size() == 0) throw InvalidDimension("state vector must be non-empty");
    if (labels_.size() != static_cast<std::size_t>(amplitudes_.size())) {
        throw DimensionMismatch("state vector has " + std::to_string(amplitudes_.size()) +
                                " amplitudes but " + std::to_string(labels_.size()) + " labels");
    }
    if (!all_finite(amplitudes_)) throw NumericError("state vector has non-finite amplitudes");
    const double n = amplitudes_.norm();
    if (std::abs(n - 1.0) > 1e-12) {
        throw ContractViolation("state vector norm " + std::to_string(n) + " is not 1");
    }
}

StateVector::StateVector(CVector amplitudes)
    : StateVector(amplitudes, integer_labels(static_cast<std::size_t>(amplitudes.size()))) {}

StateVector::StateVector(Unchecked, CVector amplitudes, std::vector<BasisLabel> labels)
    : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)) {}

StateVector StateVector::normalized(CVector amplitudes, std::vector<BasisLabel> labels) {
    const double n = amplitudes.norm();
    if (!std::isfinite(n) || n == 0.0) throw NumericError("cannot normalize state vector");
    return StateVector(amplitudes / n, std::move(labels));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw IndexError("basis index out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(v));
}

std::vector<BasisLabel> integer_labels(std::size_t dim) {
    std::vector<BasisLabel> labels;
    labels.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) labels.push_back({static_cast<int>(i)});
    return labels;
}

OperatorMatrix annihilation_op(std::size_t n_max) {
    if (n_max == 0) throw InvalidDimension("ladder operator needs n_max >= 1");
    const auto n = static_cast<Eigen::Index>(n_max);
    CMatrix a = CMatrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return OperatorMatrix(std::move(a));
}

OperatorMatrix creation_op(std::size_t n_max) { return annihilation_op(n_max).dagger(); }

OperatorMatrix number_op(std::size_t n_max) {
    if (n_max == 0) throw InvalidDimension("number operator needs n_max >= 1");
    const auto n = static_cast<Eigen::Index>(n_max);
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
    return OperatorMatrix(std::move(m), true);
}

OperatorMatrix identity_op(std::size_t dim) {
    if (dim == 0) throw InvalidDimension("identity needs dim >= 1");
    const auto n = static_cast<Eigen::Index>(dim);
    return OperatorMatrix(CMatrix::Identity(n, n), true);
}

OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b,
                              std::size_t max_dim) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    if (da > max_dim / db) {
        throw CapacityError("tensor product dimension " + std::to_string(da) + "*" +
                            std::to_string(db) + " exceeds maximum " + std::to_string(max_dim));
    }
    const auto na = static_cast<Eigen::Index>(da);
    const auto nb = static_cast<Eigen::Index>(db);
    CMatrix out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a.entries()(i, j) * b.entries();
        }
    }
    return OperatorMatrix(std::move(out), a.hermitian_hint() && b.hermitian_hint());
}

OperatorMatrix tensor_product(const std::vector<OperatorMatrix>& factors, std::size_t max_dim) {
    if (factors.empty()) throw InvalidDimension("tensor product of no factors");
    OperatorMatrix out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k], max_dim);
    return out;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a, b, "commutator");
    return OperatorMatrix(a.entries() * b.entries() - b.entries() * a.entries());
}

cplx expectation(const OperatorMatrix& a, const CVector& psi) {
    if (a.dim() != static_cast<std::size_t>(psi.size())) {
        throw DimensionMismatch("expectation: operator dim " + std::to_string(a.dim()) +
                                " vs state dim " + std::to_string(psi.size()));
    }
    return psi.dot(a.entries() * psi);
}

cplx expectation(const OperatorMatrix& a, const StateVector& psi) {
    return expectation(a, psi.amplitudes());
}

Propagator::Propagator(const OperatorMatrix& h) {
    if (!h.is_hermitian()) {
        throw ContractViolation("propagator generator is not hermitian (defect " +
                                std::to_string(h.hermiticity_defect()) + ")");
    }
    if (!h.entries().allFinite()) throw NumericError("propagator generator has non-finite entries");
    // Symmetrize so the solver sees an exactly hermitian input.
    const CMatrix sym = 0.5 * (h.entries() + h.entries().adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition did not converge");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

CMatrix Propagator::unitary(double dt) const {
    CVector phases(eigenvalues_.size());
    for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
        phases[k] = std::polar(1.0, -eigenvalues_[k] * dt);
    }
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

CVector Propagator::apply(const CVector& psi, double dt) const {
    if (static_cast<std::size_t>(psi.size()) != dim()) {
        throw DimensionMismatch("propagator applied to state of wrong dimension");
    }
    CVector c = eigenvectors_.adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -eigenvalues_[k] * dt);
    return eigenvectors_ * c;
}

StateVector evolve_step(const OperatorMatrix& h, const StateVector& psi, double dt) {
    if (!std::isfinite(dt)) throw NumericError("time step is not finite");
    if (!all_finite(psi.amplitudes())) throw NumericError("state has non-finite amplitudes");
    if (h.dim() != psi.dim()) throw DimensionMismatch("evolve_step: generator/state dimension");
    const Propagator prop(h);
    CVector out = prop.apply(psi.amplitudes(), dt);
    if (!all_finite(out)) throw NumericError("propagation produced non-finite amplitudes");
    if (std::abs(out.norm() - psi.norm()) > 1e-12) {
        throw NumericError("propagation changed the norm by more than 1e-12");
    }
    return StateVector(StateVector::Unchecked{}, std::move(out), psi.labels());
}

}  // namespace cqed
