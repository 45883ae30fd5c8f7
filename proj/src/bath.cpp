#include "cqed/bath.hpp"

#include "cqed/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace cqed {

namespace {

constexpr double pi = std::numbers::pi;

bool pmc_domain(const RegionPartition& p) {
    return p.interface_bc == InterfaceBC::PMCclosesDomain_PECclosesPort;
}

double alternating(std::size_t n) { return n % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

const char* to_string(InterfaceBC bc) {
    return bc == InterfaceBC::PMCclosesDomain_PECclosesPort ? "PMCclosesDomain_PECclosesPort"
                                                             : "PECclosesDomain_PMCclosesPort";
}

const char* to_string(NormalModeForm f) {
    return f == NormalModeForm::Interface ? "Interface" : "BilinearMomentum";
}

void RegionPartition::validate() const {
    if (!(cavity_length > 0.0)) throw ContractViolation("cavity_length must be positive");
    if (!(wave_speed > 0.0)) throw ContractViolation("wave_speed must be positive");
    if (!(oracle_total_length > cavity_length)) {
        throw ContractViolation("oracle_total_length must exceed cavity_length");
    }
}

double CavityModes::u(std::size_t k, double z) const {
    if (k >= size()) throw IndexError("cavity mode index out of range");
    return std::sqrt(2.0 / part.cavity_length) * std::sin(omega[k] * z / part.wave_speed);
}

double CavityModes::interface_value(std::size_t k) const {
    if (k >= size()) throw IndexError("cavity mode index out of range");
    if (!pmc_domain(part)) return 0.0;
    // sin((2k - 1) pi / 2) with k 1-based
    return std::sqrt(2.0 / part.cavity_length) * alternating(k);
}

double CavityModes::interface_derivative(std::size_t k) const {
    if (k >= size()) throw IndexError("cavity mode index out of range");
    if (pmc_domain(part)) return 0.0;
    // d/dz sin(n pi z / l) at z = l, n = k + 1
    return std::sqrt(2.0 / part.cavity_length) * omega[k] / part.wave_speed * alternating(k + 1);
}

CavityModes cavity_modes_1d(const RegionPartition& part, std::size_t n_modes) {
    part.validate();
    if (n_modes == 0) throw InvalidDimension("need at least one cavity mode");
    CavityModes m;
    m.part = part;
    m.omega.resize(n_modes);
    const double base = pi * part.wave_speed / part.cavity_length;
    for (std::size_t k = 0; k < n_modes; ++k) {
        const double n = static_cast<double>(k + 1);
        m.omega[k] = pmc_domain(part) ? (n - 0.5) * base : n * base;
    }
    return m;
}

double BathDiscretization::u(std::size_t p, double z) const {
    if (p >= size()) throw IndexError("bath bin index out of range");
    const double a = std::sqrt(2.0 / (pi * part.wave_speed));
    const double x = omega[p] * (z - part.cavity_length) / part.wave_speed;
    return pmc_domain(part) ? a * std::sin(x) : a * std::cos(x);
}

double BathDiscretization::interface_value(std::size_t p) const {
    if (p >= size()) throw IndexError("bath bin index out of range");
    return pmc_domain(part) ? 0.0 : std::sqrt(2.0 / (pi * part.wave_speed));
}

double BathDiscretization::interface_derivative(std::size_t p) const {
    if (p >= size()) throw IndexError("bath bin index out of range");
    if (!pmc_domain(part)) return 0.0;
    return std::sqrt(2.0 / (pi * part.wave_speed)) * omega[p] / part.wave_speed;
}

BathDiscretization port_continuum(const RegionPartition& part, double omega_max,
                                  std::size_t n_bins) {
    part.validate();
    if (n_bins < 8) throw InvalidDimension("port continuum needs at least 8 bins");
    if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
        throw ContractViolation("omega_max must be positive");
    }
    BathDiscretization b;
    b.part = part;
    const double dw = omega_max / static_cast<double>(n_bins);
    b.omega.resize(n_bins);
    b.weights.assign(n_bins, dw);
    for (std::size_t p = 0; p < n_bins; ++p) b.omega[p] = dw * static_cast<double>(p + 1);
    b.omega.back() = omega_max;
    return b;
}

double coupling_prefactor(double wave_speed, double omega_k, double omega_p) {
    return 0.5 * wave_speed * wave_speed / std::sqrt(omega_k * omega_p);
}

InterfacePairing interface_pairing(const CavityModes& cav, const BathDiscretization& bath,
                                   std::size_t k, std::size_t p) {
    const double uk_dup = cav.interface_value(k) * bath.interface_derivative(p);
    const double duk_up = cav.interface_derivative(k) * bath.interface_value(p);
    InterfacePairing out;
    if (pmc_domain(cav.part)) {
        out.retained = uk_dup;
        out.forbidden = duk_up;
    } else {
        out.retained = -duk_up;
        out.forbidden = uk_dup;
    }
    return out;
}

BathDiscretization coupling_coefficients(const RegionPartition& part, const CavityModes& cav,
                                         BathDiscretization bath) {
    part.validate();
    if (cav.part.interface_bc != part.interface_bc || bath.part.interface_bc != part.interface_bc) {
        throw ContractViolation("cavity modes, bath and partition disagree on the interface condition");
    }
    const auto nk = static_cast<Eigen::Index>(cav.size());
    const auto nb = static_cast<Eigen::Index>(bath.size());
    bath.W = Eigen::MatrixXd::Zero(nk, nb);
    for (Eigen::Index k = 0; k < nk; ++k) {
        for (Eigen::Index p = 0; p < nb; ++p) {
            const auto ks = static_cast<std::size_t>(k);
            const auto ps = static_cast<std::size_t>(p);
            const InterfacePairing b = interface_pairing(cav, bath, ks, ps);
            const double kp = coupling_prefactor(part.wave_speed, cav.omega[ks], bath.omega[ps]);
            bath.W(k, p) = -kp * (b.retained + b.forbidden) * std::sqrt(bath.weights[ps]);
        }
    }
    bath.V = -bath.W;
    bath.coupled = true;
    return bath;
}

Eigen::VectorXd normal_mode_spectrum(const CavityModes& cav, const BathDiscretization& bath,
                                     NormalModeForm form) {
    if (!bath.coupled) throw ContractViolation("bath coupling coefficients not filled");
    const auto nk = static_cast<Eigen::Index>(cav.size());
    const auto nb = static_cast<Eigen::Index>(bath.size());
    if (bath.W.rows() != nk || bath.W.cols() != nb) {
        throw DimensionMismatch("coupling matrix shape does not match modes and bins");
    }
    Eigen::VectorXd wk(nk), wp(nb);
    for (Eigen::Index k = 0; k < nk; ++k) wk[k] = cav.omega[static_cast<std::size_t>(k)];
    for (Eigen::Index p = 0; p < nb; ++p) wp[p] = bath.omega[static_cast<std::size_t>(p)];

    if (form == NormalModeForm::BilinearMomentum) {
        const Eigen::Index n = nk + nb;
        Eigen::VectorXd om(n);
        om << wk, wp;
        Eigen::MatrixXd m = om.asDiagonal();
        m.topRightCorner(nk, nb) = 2.0 * bath.W;
        m.bottomLeftCorner(nb, nk) = 2.0 * bath.W.transpose();
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() != Eigen::Success) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
            throw ModelError("bilinear momentum form has an indefinite kinetic matrix (min eigenvalue " +
                             std::to_string(es.eigenvalues()[0]) + ")");
        }
        const Eigen::VectorXd s = om.cwiseSqrt();
        const Eigen::MatrixXd a = s.asDiagonal() * m * s.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericError("normal-mode eigensolver failed");
        Eigen::VectorXd f = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        std::sort(f.begin(), f.end());
        return f;
    }

    // Rows: electric modes, columns: magnetic modes. Each region contributes
    // w on its diagonal; the interface couples the electric modes of one
    // region to the magnetic modes of the other with entries 2W times the
    // frequency ratio. The zero-frequency endpoint of the continuum gets the
    // trapezoid half weight of the first bin.
    Eigen::MatrixXd b;
    if (pmc_domain(cav.part)) {
        b = Eigen::MatrixXd::Zero(nk + nb, nk + nb + 1);
        b.topLeftCorner(nk, nk) = wk.asDiagonal();
        b.block(nk, nk, nb, nb) = wp.asDiagonal();
        for (Eigen::Index k = 0; k < nk; ++k)
            for (Eigen::Index p = 0; p < nb; ++p)
                b(k, nk + p) = 2.0 * bath.W(k, p) * std::sqrt(wk[k] / wp[p]);
        b.col(nk + nb) = b.col(nk) / std::sqrt(2.0);
        b.col(nk + nb).tail(nb).setZero();
    } else {
        // Electric: cavity (nk), port bins (nb), port static. Magnetic:
        // cavity (nk), cavity static, port bins (nb).
        b = Eigen::MatrixXd::Zero(nk + nb + 1, nk + 1 + nb);
        b.topLeftCorner(nk, nk) = wk.asDiagonal();
        b.block(nk, nk + 1, nb, nb) = wp.asDiagonal();
        for (Eigen::Index k = 0; k < nk; ++k)
            for (Eigen::Index p = 0; p < nb; ++p)
                b(nk + p, k) = 2.0 * bath.W(k, p) * std::sqrt(wp[p] / wk[k]);
        // Static cavity magnetic mode 1/sqrt(l) against the first mode's
        // interface value sqrt(2/l) (-1).
        b.col(nk) = -b.col(0) / std::sqrt(2.0);
        b.col(nk).head(nk).setZero();
        b.row(nk + nb) = b.row(nk) / std::sqrt(2.0);
        b.row(nk + nb).segment(nk + 1, nb).setZero();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
    const Eigen::VectorXd sv = svd.singularValues();
    const double tol = 1e-12 * (sv.size() ? sv.maxCoeff() : 1.0);
    std::vector<double> keep;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] > tol) keep.push_back(sv[k]);
    std::sort(keep.begin(), keep.end());
    return Eigen::Map<Eigen::VectorXd>(keep.data(), static_cast<Eigen::Index>(keep.size()));
}

Eigen::VectorXd closed_universe_frequencies(const RegionPartition& part, std::size_t n) {
    part.validate();
    Eigen::VectorXd f(static_cast<Eigen::Index>(n));
    const double base = pi * part.wave_speed / part.oracle_total_length;
    for (std::size_t m = 0; m < n; ++m) {
        const double mm = static_cast<double>(m + 1);
        f[static_cast<Eigen::Index>(m)] = pmc_domain(part) ? mm * base : (mm - 0.5) * base;
    }
    return f;
}

double oracle_bin_spacing(const RegionPartition& part) {
    part.validate();
    return pi * part.wave_speed / part.port_length();
}

double golden_rule_rate(const CavityModes& cav, const BathDiscretization& bath, std::size_t k) {
    if (!bath.coupled) throw ContractViolation("bath coupling coefficients not filled");
    if (k >= cav.size()) throw IndexError("cavity mode index out of range");
    std::size_t best = 0;
    for (std::size_t p = 1; p < bath.size(); ++p) {
        if (std::abs(bath.omega[p] - cav.omega[k]) < std::abs(bath.omega[best] - cav.omega[k])) best = p;
    }
    const double w = bath.W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(best));
    return 2.0 * pi * w * w / bath.weights[best];
}

DecayResult decay_simulation(const CavityModes& cav, const BathDiscretization& bath,
                             std::size_t k, const SingleExcitation& excitation,
                             const std::vector<double>& t_grid) {
    if (!bath.coupled) throw ContractViolation("bath coupling coefficients not filled");
    if (k >= cav.size()) throw IndexError("cavity mode index out of range");
    if (t_grid.size() < 2) throw InvalidDimension("decay time grid needs at least 2 points");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw ContractViolation("time grid must be ascending");
    }

    std::vector<std::size_t> modes;
    if (excitation.all_cavity_modes) {
        for (std::size_t q = 0; q < cav.size(); ++q) modes.push_back(q);
    } else {
        modes.push_back(k);
    }
    const auto nm = static_cast<Eigen::Index>(modes.size());
    const auto nb = static_cast<Eigen::Index>(bath.size());
    const bool pmc = pmc_domain(cav.part);

    // Single-excitation sector, rotating-wave coupling consistent with the
    // interface form: W scaled by the frequency ratio, equal to W on resonance.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nm + nb, nm + nb);
    Eigen::Index start = 0;
    for (Eigen::Index a = 0; a < nm; ++a) {
        const std::size_t q = modes[static_cast<std::size_t>(a)];
        if (q == k) start = a;
        h(a, a) = cav.omega[q];
        for (Eigen::Index p = 0; p < nb; ++p) {
            const double wq = cav.omega[q];
            const double wp = bath.omega[static_cast<std::size_t>(p)];
            const double ratio = pmc ? std::sqrt(wq / wp) : std::sqrt(wp / wq);
            const double w = bath.W(static_cast<Eigen::Index>(q), p) * ratio;
            h(a, nm + p) = w;
            h(nm + p, a) = w;
        }
    }
    for (Eigen::Index p = 0; p < nb; ++p) h(nm + p, nm + p) = bath.omega[static_cast<std::size_t>(p)];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw NumericError("single-excitation eigensolver failed");
    const Eigen::VectorXd& e = es.eigenvalues();
    const Eigen::MatrixXd& v = es.eigenvectors();
    const Eigen::VectorXd c0 = v.row(start).transpose();

    DecayResult out;
    out.golden_rule = golden_rule_rate(cav, bath, k);
    for (std::size_t p = 1; p < bath.size(); ++p) {
        if (std::abs(bath.omega[p] - cav.omega[k]) < std::abs(bath.omega[out.resonant_bin] - cav.omega[k]))
            out.resonant_bin = p;
    }
    Trajectory& tr = out.trajectory;
    tr.times = t_grid;
    Eigen::VectorXcd amp;
    for (double t : t_grid) {
        Eigen::VectorXcd phased(e.size());
        for (Eigen::Index j = 0; j < e.size(); ++j) phased[j] = c0[j] * std::polar(1.0, -e[j] * t);
        amp = v.cast<std::complex<double>>() * phased;
        const double pc = std::norm(amp[start]);
        double pcav = 0.0;
        for (Eigen::Index a = 0; a < nm; ++a) pcav += std::norm(amp[a]);
        const double norm = amp.squaredNorm();
        tr.record("P_cavity", pc);
        tr.record("P_bath", norm - pcav);
        tr.record("norm", norm);
    }

    // ln P = a - kappa t over 0.1 < P < 0.9.
    const auto& pc = tr.at("P_cavity");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (pc[i] > 0.1 && pc[i] < 0.9) {
            const double y = std::log(pc[i]);
            sx += t_grid[i];
            sy += y;
            sxx += t_grid[i] * t_grid[i];
            sxy += t_grid[i] * y;
            ++n;
        }
    }
    out.fit_points = n;
    if (n < 2) {
        out.fitted_rate = std::nan("");
        tr.warnings.push_back("decay fit window 0.1 < P < 0.9 holds fewer than 2 samples");
    } else {
        const double dn = static_cast<double>(n);
        const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
        const double icpt = (sy - slope * sx) / dn;
        out.fitted_rate = -slope;
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double env = std::exp(icpt + slope * t_grid[i]);
            if (pc[i] > (1.0 + excitation.recurrence_tolerance) * env + 1e-3) {
                out.recurrence = true;
                tr.warnings.push_back("recurrence at t = " + std::to_string(t_grid[i]) +
                                      ": bath truncation too small for this time window");
                break;
            }
        }
    }
    tr.metadata = std::string("rotating-wave single-excitation sector, counter-rotating V dropped; ") +
                  (excitation.all_cavity_modes ? "all cavity modes" : "excited cavity mode only");
    return out;
}

}  // namespace cqed
