// qops.hpp: Dense complex operator algebra for truncated bosonic and qudit spaces
//
// Energies are angular frequencies with hbar = 1; a propagator for generator H
// over time dt is exp(-i H dt).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace cqed {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Composite index tuple of a product basis state, e.g. (transmon level, n_1, n_2).
using BasisLabel = std::vector<int>;

inline constexpr double hermitian_tolerance = 1e-12;

// Largest product-space dimension any builder will allocate.
inline constexpr std::size_t default_max_dim = 4096;

class OperatorMatrix {
public:
    OperatorMatrix() = default;

    // Throws InvalidDimension on a non-square or empty matrix, ContractViolation
    // when hermitian_hint is set but the matrix is not hermitian.
    explicit OperatorMatrix(CMatrix entries, bool hermitian_hint = false);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const CMatrix& entries() const noexcept { return entries_; }
    bool hermitian_hint() const noexcept { return hermitian_hint_; }

    cplx operator()(std::size_t i, std::size_t j) const {
        return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    // max |M - M^dagger|
    double hermiticity_defect() const;
    // max |M_ij|
    double max_abs() const;
    bool is_hermitian(double rel_tol = hermitian_tolerance) const;

    OperatorMatrix dagger() const;

    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(double s, const OperatorMatrix& a);
    friend OperatorMatrix operator*(cplx s, const OperatorMatrix& a);

private:
    CMatrix entries_;
    bool hermitian_hint_ = false;
};

class StateVector {
public:
    StateVector() = default;

    // Requires | ||amplitudes|| - 1 | <= 1e-12 and one label per amplitude.
    StateVector(CVector amplitudes, std::vector<BasisLabel> labels);
    // Plain integer labels {0}, {1}, ...
    explicit StateVector(CVector amplitudes);

    // Normalizes first; throws NumericError on a zero or non-finite vector.
    static StateVector normalized(CVector amplitudes, std::vector<BasisLabel> labels);
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector& amplitudes() const noexcept { return amplitudes_; }
    const std::vector<BasisLabel>& labels() const noexcept { return labels_; }
    double norm() const { return amplitudes_.norm(); }

private:
    friend StateVector evolve_step(const OperatorMatrix&, const StateVector&, double);
    struct Unchecked {};
    StateVector(Unchecked, CVector amplitudes, std::vector<BasisLabel> labels);

    CVector amplitudes_;
    std::vector<BasisLabel> labels_;
};

std::vector<BasisLabel> integer_labels(std::size_t dim);

// a|n> = sqrt(n)|n-1> on {|0>, ..., |n_max-1>}.
OperatorMatrix annihilation_op(std::size_t n_max);
OperatorMatrix creation_op(std::size_t n_max);
OperatorMatrix number_op(std::size_t n_max);
OperatorMatrix identity_op(std::size_t dim);

// (A (x) B)[(i*dB + k), (j*dB + l)] = A[i,j] B[k,l]; CapacityError past max_dim.
OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b,
                              std::size_t max_dim = default_max_dim);
// Left-to-right Kronecker product of all factors.
OperatorMatrix tensor_product(const std::vector<OperatorMatrix>& factors,
                              std::size_t max_dim = default_max_dim);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

cplx expectation(const OperatorMatrix& a, const StateVector& psi);
cplx expectation(const OperatorMatrix& a, const CVector& psi);

// Exact propagator from the spectral decomposition of a hermitian generator.
// Reusable across many steps of the same generator.
class Propagator {
public:
    // ContractViolation if h is not hermitian to 1e-12 relative.
    explicit Propagator(const OperatorMatrix& h);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues_.size()); }
    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
    const CMatrix& eigenvectors() const noexcept { return eigenvectors_; }

    // exp(-i H dt) as a dense matrix.
    CMatrix unitary(double dt) const;
    // exp(-i H dt) psi without forming the matrix.
    CVector apply(const CVector& psi, double dt) const;

private:
    Eigen::VectorXd eigenvalues_;
    CMatrix eigenvectors_;
};

// exp(-i H dt) psi. ContractViolation for non-hermitian H, NumericError for
// non-finite input or a norm change above 1e-12.
StateVector evolve_step(const OperatorMatrix& h, const StateVector& psi, double dt);

}  // namespace cqed
