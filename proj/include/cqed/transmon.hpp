// transmon.hpp: charge-basis transmon Hamiltonian, spectrum and matrix elements

#pragma once

#include "cqed/qops.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>

namespace cqed {

// Sign of the (N, N+1) tunneling entries. The two choices are related by the
// gauge |N> -> (-1)^N |N> and give identical spectra.
enum class TunnelingSign { PaperPlus, KochMinus };

const char* to_string(TunnelingSign s);

struct TransmonParams {
    double E_C = 0.3;
    double E_J = 15.0;
    double n_g = 0.0;
    int n_cutoff = 20;
    TunnelingSign tunneling_sign = TunnelingSign::PaperPlus;

    // ContractViolation unless E_C > 0, E_J >= 0, n_cutoff >= 1, all finite.
    void validate() const;
    std::size_t dim() const { return static_cast<std::size_t>(2 * n_cutoff + 1); }
    // Charge quantum number of basis index k.
    int charge(std::size_t k) const { return static_cast<int>(k) - n_cutoff; }
};

struct TransmonSolution {
    Eigen::VectorXd levels;   // ascending
    Eigen::MatrixXd eigvecs;  // columns in the charge basis N = -n_cutoff..n_cutoff
    TransmonParams params;
    std::string phase_convention;

    std::size_t n_levels() const { return static_cast<std::size_t>(levels.size()); }
};

// Diagonal 4E_C(N - n_g)^2, (N, N+1) entries +-E_J/2.
OperatorMatrix build_charge_hamiltonian(const TransmonParams& p);

// Charge number operator diag(N).
OperatorMatrix charge_operator(const TransmonParams& p);

// sin(phi) as the shift-operator combination whose sign matches the tunneling
// convention, so that d<n>/dt = -E_J <sin phi> holds for either choice.
OperatorMatrix sin_phi_operator(const TransmonParams& p);
// cos(phi) partner; H = 4E_C(n - n_g)^2 - E_J cos(phi).
OperatorMatrix cos_phi_operator(const TransmonParams& p);

// Full eigendecomposition, eigenvalues ascending, largest-magnitude component
// of every eigenvector made positive (lowest charge index wins ties).
TransmonSolution solve(const TransmonParams& p);

// <i|n|j>; exactly symmetric in (i, j).
double charge_matrix_element(const TransmonSolution& s, std::size_t i, std::size_t j);

// M x M matrix of <i|n|j> over the lowest M levels.
Eigen::MatrixXd charge_matrix(const TransmonSolution& s, std::size_t m);

// max - min of level `level` over n_g in [0, 1]. The uniform grid starts at
// 21 points and is refined by interval doubling until the estimate moves by
// less than 1%.
double charge_dispersion(const TransmonParams& p, std::size_t level);

// (w2 - w1) - (w1 - w0)
double anharmonicity(const TransmonSolution& s);

// Asymptotic large E_J/E_C reference (1/sqrt 2)(E_J/8E_C)^(1/4) for |<0|n|1>|.
double asymptotic_charge_element(const TransmonParams& p);

}  // namespace cqed
