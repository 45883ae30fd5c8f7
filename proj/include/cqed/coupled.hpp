// coupled.hpp: transmon (x) multimode Fock Hamiltonians, circuit form and the
// field-integration route

#pragma once

#include "cqed/constants.hpp"
#include "cqed/qops.hpp"
#include "cqed/transmon.hpp"
#include "cqed/txline.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace cqed {

struct CouplingSpec {
    double beta = 1.0;       // C_g / (C_g + C_B)
    double z0 = 0.0;         // m
    bool include_beta = true;
    double path_gain = 1.0;  // transverse voltage-path factor, 1 = full gap

    void validate(double line_length) const;
    double beta_eff() const { return include_beta ? beta : 1.0; }
};

// The Hamiltonian matrix is written in units of frequency_unit rad/s
// (default 2 pi GHz), the same units the transmon energies are given in.
struct CoupledHamiltonian {
    OperatorMatrix matrix;
    std::size_t transmon_levels = 0;
    std::vector<std::size_t> fock_cutoffs;
    Eigen::VectorXd transmon_energies;      // Hamiltonian units
    std::vector<double> mode_frequencies;   // Hamiltonian units
    std::vector<Eigen::MatrixXd> g_table;   // per mode, M x M, Hamiltonian units
    double frequency_unit = si::natural_frequency_unit;
    bool nearest_neighbor = false;
    std::string metadata;

    std::size_t dim() const;
    std::vector<BasisLabel> labels() const;
    std::size_t index_of(const BasisLabel& label) const;

    // Lift an M x M transmon operator or an n_l x n_l mode operator into the product space.
    OperatorMatrix lift_transmon(const OperatorMatrix& op) const;
    OperatorMatrix lift_mode(std::size_t l, const OperatorMatrix& op) const;
    // sum_j j |j><j| + sum_l n_l
    OperatorMatrix excitation_operator() const;
};

// g = (2e/hbar) beta_eff N_V u_L(z0) path_gain <i|n|j>, rad/s.
double coupling_strength(const TransmonSolution& ts, const ModeSet& modes, const CouplingSpec& cs,
                         std::size_t i, std::size_t j, std::size_t l);

// H = sum_j w_j |j><j| + sum_l w_l n_l + sum_l sum_ij g_ij,l |i><j| (a_l + a_l^dagger),
// all inputs already in Hamiltonian units. Basis order transmon (x) mode_1 (x) ...
CoupledHamiltonian assemble(const Eigen::VectorXd& transmon_energies,
                            const std::vector<double>& mode_frequencies,
                            const std::vector<Eigen::MatrixXd>& g_table,
                            const std::vector<std::size_t>& fock_cutoffs,
                            std::size_t max_dim = default_max_dim);

CoupledHamiltonian build_full_hamiltonian(const TransmonSolution& ts, const ModeSet& modes,
                                          const CouplingSpec& cs, std::size_t transmon_levels,
                                          const std::vector<std::size_t>& fock_cutoffs,
                                          double frequency_unit = si::natural_frequency_unit,
                                          std::size_t max_dim = default_max_dim);

// Same, with coupling kept only between neighbouring transmon levels.
CoupledHamiltonian build_nn_hamiltonian(const TransmonSolution& ts, const ModeSet& modes,
                                        const CouplingSpec& cs, std::size_t transmon_levels,
                                        const std::vector<std::size_t>& fock_cutoffs,
                                        double frequency_unit = si::natural_frequency_unit,
                                        std::size_t max_dim = default_max_dim);

struct FieldReductionOptions {
    // Width of the Gaussian standing in for delta(z - z0), as a fraction of the line length.
    double sigma_fraction = 1e-6;
    std::size_t delta_panels = 16;
    double frequency_unit = si::natural_frequency_unit;
    std::size_t max_dim = default_max_dim;
};

struct FieldReduction {
    CMatrix H_field;
    CMatrix H_circuit;
    double max_diff = 0.0;
    double max_abs = 0.0;  // max |H_circuit|
};

// Rebuilds the Hamiltonian from the charge-basis transmon, the field energy
// quadratic form and the spatially integrated current-field coupling, then
// compares against build_full_hamiltonian.
FieldReduction field_reduction_check(const TransmonSolution& ts, const ModeSet& modes,
                                     const TEMCrossSection& xsec, const CouplingSpec& cs,
                                     std::size_t transmon_levels,
                                     const std::vector<std::size_t>& fock_cutoffs,
                                     const FieldReductionOptions& opt = {});

}  // namespace cqed
