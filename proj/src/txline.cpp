#include "cqed/txline.hpp"

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cqed {

namespace {

constexpr std::size_t panel_order = 8;

double relative_gap(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

void check_finite(const std::vector<std::complex<double>>& a, const char* name) {
    for (const auto& x : a) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            throw NumericError(std::string(name) + " amplitudes must be finite");
        }
    }
}

}  // namespace

const char* to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::OpenOpen: return "OpenOpen";
        case BoundaryCondition::ShortShort: return "ShortShort";
        case BoundaryCondition::OpenShort: return "OpenShort";
    }
    return "?";
}

const char* to_string(Convention c) {
    return c == Convention::LiteralIntegral ? "LiteralIntegral" : "BlaisCompat";
}

void LineParams::validate() const {
    if (!(L_pul > 0.0) || !std::isfinite(L_pul)) throw ContractViolation("L_pul must be positive");
    if (!(C_pul > 0.0) || !std::isfinite(C_pul)) throw ContractViolation("C_pul must be positive");
    if (!(length > 0.0) || !std::isfinite(length)) throw ContractViolation("length must be positive");
}

double LineParams::phase_velocity() const { return 1.0 / std::sqrt(L_pul * C_pul); }

TEMCrossSection tem_cross_section(double w, double d, double eps_r) {
    if (!(w > 0.0) || !(d > 0.0)) throw ContractViolation("plate width and gap must be positive");
    if (!(eps_r > 0.0)) throw ContractViolation("eps_r must be positive");
    TEMCrossSection x;
    x.w = w;
    x.d = d;
    x.eps_r = eps_r;
    // Uniform fields over the w x d gap: u_T = 1/d, v_T = 1/w.
    x.N_ET = eps_r * (w * d) / (d * d);
    x.N_HT = (w * d) / (w * w);
    x.C_k = si::epsilon0 * x.N_ET;
    x.L_k = si::mu0 * x.N_HT;
    return x;
}

TEMCrossSection equivalent_cross_section(const LineParams& line, double w) {
    line.validate();
    const double d_over_w = line.L_pul / si::mu0;
    const double eps_r = line.C_pul * d_over_w / si::epsilon0;
    return tem_cross_section(w, w * d_over_w, eps_r);
}

double ModeSet::wavenumber(std::size_t l) const {
    if (l >= size()) throw IndexError("mode index out of range");
    const double n = static_cast<double>(l + 1);
    const double k0 = si::pi / line.length;
    return line.bc == BoundaryCondition::OpenShort ? (n - 0.5) * k0 : n * k0;
}

double ModeSet::u(std::size_t l, double z) const {
    const double k = wavenumber(l);
    return line.bc == BoundaryCondition::ShortShort ? std::sin(k * z) : std::cos(k * z);
}

double ModeSet::v(std::size_t l, double z) const {
    const double k = wavenumber(l);
    return line.bc == BoundaryCondition::ShortShort ? std::cos(k * z) : std::sin(k * z);
}

ModeSet compute_modes(const LineParams& line, std::size_t n_modes, Convention conv) {
    line.validate();
    if (n_modes == 0) throw InvalidDimension("need at least one line mode");
    ModeSet m;
    m.line = line;
    m.convention = conv;
    m.omega.resize(n_modes);
    const double vp = line.phase_velocity();
    const double norm = conv == Convention::BlaisCompat ? line.length : 0.5 * line.length;
    m.N_EL.assign(n_modes, norm);
    m.N_HL.assign(n_modes, norm);
    for (std::size_t l = 0; l < n_modes; ++l) m.omega[l] = vp * m.wavenumber(l);
    return m;
}

ModeSet mode_operator_coeffs(ModeSet modes, const TEMCrossSection& xsec) {
    if (!(xsec.C_k > 0.0) || !(xsec.L_k > 0.0)) {
        throw ContractViolation("cross-section has non-positive C_k or L_k");
    }
    modes.N_V.resize(modes.size());
    modes.N_I.resize(modes.size());
    for (std::size_t l = 0; l < modes.size(); ++l) {
        if (!(modes.N_EL[l] > 0.0) || !(modes.N_HL[l] > 0.0)) {
            throw ModelError("degenerate mode " + std::to_string(l) + ": zero normalization");
        }
        const double e = si::hbar * modes.omega[l];
        modes.N_V[l] = std::sqrt(e / (2.0 * xsec.C_k * modes.N_EL[l]));
        modes.N_I[l] = std::sqrt(e / (2.0 * xsec.L_k * modes.N_HL[l]));
    }
    modes.xsec = xsec;
    return modes;
}

EnergyPair energy_correspondence(const ModeSet& modes, const TEMCrossSection& xsec,
                                 const std::vector<std::complex<double>>& q,
                                 const std::vector<std::complex<double>>& p,
                                 std::size_t points_per_wavelength) {
    if (q.size() != modes.size() || p.size() != modes.size()) {
        throw DimensionMismatch("need one (q, p) pair per mode");
    }
    check_finite(q, "q");
    check_finite(p, "p");
    const std::size_t n = modes.size();
    const double len = modes.line.length;
    const double eps = si::epsilon0 * xsec.eps_r;

    // Field amplitudes: E+ = sum_l a_l q_l u_T u_L,l and H+ = sum_l b_l p_l v_T v_L,l.
    std::vector<std::complex<double>> ea(n), hb(n), va(n), ib(n);
    for (std::size_t l = 0; l < n; ++l) {
        const double w = modes.omega[l];
        ea[l] = std::sqrt(w / (2.0 * si::epsilon0 * xsec.N_ET * modes.N_EL[l])) * q[l];
        hb[l] = std::sqrt(w / (2.0 * si::mu0 * xsec.N_HT * modes.N_HL[l])) * p[l];
        va[l] = std::sqrt(w / (xsec.C_k * modes.N_EL[l])) * q[l];
        ib[l] = std::sqrt(w / (xsec.L_k * modes.N_HL[l])) * p[l];
    }
    const double uT = 1.0 / xsec.d;
    const double vT = 1.0 / xsec.w;

    const double k_max = modes.wavenumber(n - 1);
    const double wavelengths = len * k_max / (2.0 * si::pi);
    std::size_t panels = static_cast<std::size_t>(
        std::ceil(std::max(1.0, wavelengths) * static_cast<double>(points_per_wavelength) /
                  static_cast<double>(panel_order)));

    auto evaluate = [&](std::size_t n_panels) {
        const auto zr = quad::composite(0.0, len, n_panels, panel_order);
        const auto xr = quad::composite(0.0, xsec.w, 1, 4);
        const auto yr = quad::composite(0.0, xsec.d, 1, 4);
        EnergyPair e;
        for (std::size_t iz = 0; iz < zr.nodes.size(); ++iz) {
            const double z = zr.nodes[iz];
            std::complex<double> ez = 0.0, hz = 0.0;
            double line_density = 0.0;
            for (std::size_t l = 0; l < n; ++l) {
                const double ul = modes.u(l, z);
                const double vl = modes.v(l, z);
                ez += ea[l] * ul;
                hz += hb[l] * vl;
                line_density += xsec.C_k * std::norm(va[l] * ul) + xsec.L_k * std::norm(ib[l] * vl);
            }
            double slice = 0.0;
            for (std::size_t ix = 0; ix < xr.nodes.size(); ++ix) {
                for (std::size_t iy = 0; iy < yr.nodes.size(); ++iy) {
                    const double wxy = xr.weights[ix] * yr.weights[iy];
                    slice += wxy * (2.0 * eps * std::norm(ez * uT) + 2.0 * si::mu0 * std::norm(hz * vT));
                }
            }
            e.field_energy += 0.5 * zr.weights[iz] * slice;
            e.line_energy += 0.5 * zr.weights[iz] * line_density;
        }
        return e;
    };

    EnergyPair prev = evaluate(panels);
    for (int refine = 0; refine < 6; ++refine) {
        panels *= 2;
        const EnergyPair cur = evaluate(panels);
        if (relative_gap(cur.field_energy, prev.field_energy) < 1e-12 &&
            relative_gap(cur.line_energy, prev.line_energy) < 1e-12) {
            return cur;
        }
        prev = cur;
    }
    throw NumericError("energy quadrature did not converge");
}

}  // namespace cqed
