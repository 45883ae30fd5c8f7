// bath.hpp: two-region 1D cavity + port model with a discretized continuum
//
// The cavity occupies [0, l] with a PEC physical end at z = 0; the port is
// [l, inf). Both regions share the wave speed c. Mode functions are electric
// field profiles.

#pragma once

#include "cqed/trajectory.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace cqed {

enum class InterfaceBC { PMCclosesDomain_PECclosesPort, PECclosesDomain_PMCclosesPort };

const char* to_string(InterfaceBC bc);

struct RegionPartition {
    double cavity_length = 1.0;
    double wave_speed = 1.0;
    InterfaceBC interface_bc = InterfaceBC::PMCclosesDomain_PECclosesPort;
    double oracle_total_length = 10.0;

    void validate() const;
    double port_length() const { return oracle_total_length - cavity_length; }
};

struct CavityModes {
    RegionPartition part;
    std::vector<double> omega;

    std::size_t size() const { return omega.size(); }
    // Orthonormal on [0, l].
    double u(std::size_t k, double z) const;
    // Mode value and z-derivative at the interface; the one forced to vanish
    // by the closing condition is returned as exactly 0.
    double interface_value(std::size_t k) const;
    double interface_derivative(std::size_t k) const;
};

// PMC interface: w_k = (2k - 1) pi c / 2l. PEC interface: w_k = k pi c / l.
CavityModes cavity_modes_1d(const RegionPartition& part, std::size_t n_modes);

struct BathDiscretization {
    RegionPartition part;
    std::vector<double> omega;    // p dw, p = 1..n_bins
    std::vector<double> weights;  // dw each
    Eigen::MatrixXd W;            // cavity mode x bin, filled by coupling_coefficients
    Eigen::MatrixXd V;            // counter-rotating partner, V = -W
    bool coupled = false;

    std::size_t size() const { return omega.size(); }
    double delta_omega() const { return weights.empty() ? 0.0 : weights.front(); }
    // Delta-normalized continuum standing waves on [l, inf).
    double u(std::size_t p, double z) const;
    double interface_value(std::size_t p) const;
    double interface_derivative(std::size_t p) const;
};

BathDiscretization port_continuum(const RegionPartition& part, double omega_max,
                                  std::size_t n_bins);

// (c^2 / 2) / sqrt(w_k w_p)
double coupling_prefactor(double wave_speed, double omega_k, double omega_p);

struct InterfacePairing {
    double retained = 0.0;   // the product the closing conditions leave nonzero
    double forbidden = 0.0;  // the product they force to zero
};

// Boundary product u_k du_p - du_k u_p at the interface, split into its two terms.
InterfacePairing interface_pairing(const CavityModes& cav, const BathDiscretization& bath,
                                   std::size_t k, std::size_t p);

// W_kp = -K_kp (u_k du_p - du_k u_p)|_interface sqrt(dw), V = -W.
BathDiscretization coupling_coefficients(const RegionPartition& part, const CavityModes& cav,
                                         BathDiscretization bath);

// Interface: first-order form whose rows are electric and columns magnetic
// modes of both regions, including the zero-frequency endpoint of the
// continuum; frequencies are its nonzero singular values.
// BilinearMomentum: the Hamiltonian read as sum w (x^2 + p^2)/2 + 2W p_k p_p;
// throws ModelError when its kinetic matrix is not positive definite.
enum class NormalModeForm { Interface, BilinearMomentum };

const char* to_string(NormalModeForm f);

Eigen::VectorXd normal_mode_spectrum(const CavityModes& cav, const BathDiscretization& bath,
                                     NormalModeForm form = NormalModeForm::Interface);

// Standing-wave frequencies of the closed universe [0, oracle_total_length]
// with the same physical end and the far end implied by the port continuum.
Eigen::VectorXd closed_universe_frequencies(const RegionPartition& part, std::size_t n);

// Bin spacing that makes the uniform grid coincide with the finite oracle port.
double oracle_bin_spacing(const RegionPartition& part);

// 2 pi |W_kp|^2 / dw at the bin nearest w_k.
double golden_rule_rate(const CavityModes& cav, const BathDiscretization& bath, std::size_t k);

struct SingleExcitation {
    // Keep every cavity mode in the sector, not just the excited one.
    bool all_cavity_modes = false;
    // Relative rise above the fitted envelope that counts as a recurrence.
    double recurrence_tolerance = 0.10;
};

struct DecayResult {
    Trajectory trajectory;  // "P_cavity", "P_bath", "norm"
    double fitted_rate = 0.0;
    double golden_rule = 0.0;
    std::size_t resonant_bin = 0;
    std::size_t fit_points = 0;
    bool recurrence = false;
};

// Rotating-wave single-excitation evolution from one quantum in cavity mode k.
DecayResult decay_simulation(const CavityModes& cav, const BathDiscretization& bath,
                             std::size_t k, const SingleExcitation& excitation,
                             const std::vector<double>& t_grid);

}  // namespace cqed
