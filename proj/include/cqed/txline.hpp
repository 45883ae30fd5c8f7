// txline.hpp: 1D transmission-line resonator modes, TEM cross-section and
// quantized voltage/current coefficients. Everything here is SI.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace cqed {

// Voltage boundary conditions at (z = 0, z = length).
enum class BoundaryCondition { OpenOpen, ShortShort, OpenShort };

// LiteralIntegral: N_EL = N_HL = integral of the squared mode function.
// BlaisCompat: both forced to the line length.
enum class Convention { LiteralIntegral, BlaisCompat };

const char* to_string(BoundaryCondition bc);
const char* to_string(Convention c);

struct LineParams {
    double L_pul = 4.0e-7;   // H/m
    double C_pul = 1.6e-10;  // F/m
    double length = 0.0125;  // m
    BoundaryCondition bc = BoundaryCondition::OpenOpen;

    void validate() const;
    double phase_velocity() const;
};

// Idealized parallel plate: width w, gap d, uniform dielectric.
struct TEMCrossSection {
    double w = 0.0;
    double d = 0.0;
    double eps_r = 1.0;
    double N_ET = 0.0;  // integral of eps_r |u_T|^2 over the gap, u_T = 1/d
    double N_HT = 0.0;  // integral of |v_T|^2 over the gap, v_T = 1/w
    double C_k = 0.0;   // eps0 * N_ET
    double L_k = 0.0;   // mu0 * N_HT
};

TEMCrossSection tem_cross_section(double w, double d, double eps_r);

// Parallel plate of width w whose C_k, L_k reproduce the line's C_pul, L_pul.
TEMCrossSection equivalent_cross_section(const LineParams& line, double w = 1.0e-5);

struct ModeSet {
    LineParams line;
    Convention convention = Convention::LiteralIntegral;
    std::vector<double> omega;  // rad/s, ascending
    std::vector<double> N_EL;   // m
    std::vector<double> N_HL;   // m
    std::vector<double> N_V;    // V, filled by mode_operator_coeffs
    std::vector<double> N_I;    // A, filled by mode_operator_coeffs
    std::optional<TEMCrossSection> xsec;

    std::size_t size() const { return omega.size(); }
    bool has_coeffs() const { return xsec.has_value(); }
    // Longitudinal wavenumber of mode index l (0-based).
    double wavenumber(std::size_t l) const;
    // Voltage and current standing waves of mode index l at position z.
    double u(std::size_t l, double z) const;
    double v(std::size_t l, double z) const;
};

ModeSet compute_modes(const LineParams& line, std::size_t n_modes,
                      Convention conv = Convention::LiteralIntegral);

// N_V = sqrt(hbar w / (2 C_k N_EL)), N_I = sqrt(hbar w / (2 L_k N_HL)).
ModeSet mode_operator_coeffs(ModeSet modes, const TEMCrossSection& xsec);

struct EnergyPair {
    double field_energy = 0.0;  // J
    double line_energy = 0.0;   // J
};

// Classical canonical amplitudes q_l, p_l (units sqrt(J s)) drive the electric
// and magnetic parts of each mode. The field side integrates the time-averaged
// energy density over the plate volume by 3D quadrature; the line side
// integrates C_k |V_l|^2 + L_k |I_l|^2 along z mode by mode.
EnergyPair energy_correspondence(const ModeSet& modes, const TEMCrossSection& xsec,
                                 const std::vector<std::complex<double>>& q,
                                 const std::vector<std::complex<double>>& p,
                                 std::size_t points_per_wavelength = 64);

}  // namespace cqed
