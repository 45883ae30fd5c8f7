#include "cqed/runner.hpp"

#include "cqed/constants.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

namespace cqed {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

CheckItem below(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, "<", std::isfinite(value) && value < threshold};
}

CheckItem above(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, ">", std::isfinite(value) && value > threshold};
}

std::string fmt(double x, const char* spec = "%.17g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

class Csv {
public:
    Csv(const std::filesystem::path& path, const std::vector<std::string>& header)
        : f_(path, std::ios::binary | std::ios::trunc) {
        if (!f_) throw Error("cannot open " + path.string() + " for writing");
        row_strings(header);
    }
    void row(const std::vector<double>& v) {
        std::vector<std::string> s;
        s.reserve(v.size());
        for (double x : v) s.push_back(fmt(x));
        row_strings(s);
    }
    void row_strings(const std::vector<std::string>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) f_ << (i ? "," : "") << v[i];
        f_ << '\n';
    }

private:
    std::ofstream f_;
};

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << j.dump(2) << '\n';
}

// Natural energies are multiples of frequency_unit rad/s; SI energies are E/h in Hz.
struct Units {
    UnitSystem sys;
    double energy_in(double x) const { return sys == UnitSystem::SI ? x * 2 * pi / si::natural_frequency_unit : x; }
    double energy_out(double x) const { return sys == UnitSystem::SI ? x * si::natural_frequency_unit / (2 * pi) : x; }
    double time_in(double t) const { return sys == UnitSystem::SI ? t * si::natural_frequency_unit : t; }
    double time_out(double t) const { return sys == UnitSystem::SI ? t / si::natural_frequency_unit : t; }
    // Angular frequency in rad/s to output units.
    double omega_out(double w) const { return sys == UnitSystem::SI ? w / (2 * pi) : w / si::natural_frequency_unit; }
    const char* energy_unit() const { return sys == UnitSystem::SI ? "Hz" : "2pi GHz"; }
    const char* time_unit() const { return sys == UnitSystem::SI ? "s" : "1/(2pi GHz)"; }
};

TransmonParams transmon_in(const RunConfig& cfg, const Units& u) {
    TransmonParams p = cfg.transmon;
    p.E_C = u.energy_in(p.E_C);
    p.E_J = u.energy_in(p.E_J);
    p.validate();
    return p;
}

TEMCrossSection cross_section(const RunConfig& cfg) {
    if (cfg.cross_section) {
        const auto& x = *cfg.cross_section;
        return tem_cross_section(x.w, x.d, x.eps_r);
    }
    return equivalent_cross_section(cfg.line.params);
}

std::vector<std::size_t> fock_list(const RunConfig& cfg) {
    const auto& f = cfg.coupling.fock_cutoffs;
    if (f.size() == 1) return std::vector<std::size_t>(cfg.line.n_modes, f.front());
    return f;
}

CoupledHamiltonian coupled_hamiltonian(const RunConfig& cfg, const Units& u, TransmonSolution& ts,
                                       ModeSet& modes) {
    ts = solve(transmon_in(cfg, u));
    const auto xsec = cross_section(cfg);
    modes = mode_operator_coeffs(compute_modes(cfg.line.params, cfg.line.n_modes, cfg.line.convention), xsec);
    cfg.coupling.spec.validate(cfg.line.params.length);
    const auto build = cfg.coupling.nearest_neighbor ? build_nn_hamiltonian : build_full_hamiltonian;
    return build(ts, modes, cfg.coupling.spec, cfg.coupling.transmon_levels, fock_list(cfg),
                 si::natural_frequency_unit, default_max_dim);
}

std::filesystem::path out_path(const std::string& dir, const RunConfig& cfg, const std::string& name) {
    return std::filesystem::path(dir) / (cfg.output_prefix + name);
}

json run_transmon(const RunConfig& cfg, const Units& u, const std::string& dir) {
    const TransmonParams base = transmon_in(cfg, u);
    const auto& sw = cfg.sweep;
    if (sw.levels > base.dim()) throw ContractViolation("sweep.levels exceeds the charge basis size");
    Csv csv(out_path(dir, cfg, "transmon.csv"), {"n_g", "level", "omega"});
    for (std::size_t k = 0; k < sw.points; ++k) {
        TransmonParams p = base;
        p.n_g = sw.points == 1 ? sw.n_g_start
                               : sw.n_g_start + (sw.n_g_stop - sw.n_g_start) * static_cast<double>(k) /
                                                    static_cast<double>(sw.points - 1);
        const auto s = solve(p);
        for (std::size_t l = 0; l < sw.levels; ++l) {
            csv.row({p.n_g, static_cast<double>(l), u.energy_out(s.levels[static_cast<Eigen::Index>(l)])});
        }
    }
    const auto s = solve(base);
    json j;
    j["energy_unit"] = u.energy_unit();
    j["omega01"] = u.energy_out(s.levels[1] - s.levels[0]);
    j["anharmonicity"] = u.energy_out(anharmonicity(s));
    j["n01"] = std::abs(charge_matrix_element(s, 0, 1));
    j["n02"] = std::abs(charge_matrix_element(s, 0, 2));
    j["n01_asymptotic"] = asymptotic_charge_element(base);
    j["dispersion_level0"] = u.energy_out(charge_dispersion(base, 0));
    j["tunneling_sign"] = to_string(base.tunneling_sign);
    return j;
}

json run_modes(const RunConfig& cfg, const Units& u, const std::string& dir) {
    const auto xsec = cross_section(cfg);
    const auto m = mode_operator_coeffs(compute_modes(cfg.line.params, cfg.line.n_modes, cfg.line.convention), xsec);
    Csv csv(out_path(dir, cfg, "modes.csv"), {"l", "omega", "wavenumber", "N_EL", "N_HL", "N_V", "N_I"});
    for (std::size_t l = 0; l < m.size(); ++l) {
        csv.row({static_cast<double>(l), u.omega_out(m.omega[l]), m.wavenumber(l), m.N_EL[l], m.N_HL[l], m.N_V[l],
                 m.N_I[l]});
    }
    json j;
    j["frequency_unit"] = u.sys == UnitSystem::SI ? "Hz" : "2pi GHz";
    j["omega0"] = u.omega_out(m.omega.front());
    j["phase_velocity"] = cfg.line.params.phase_velocity();
    j["boundary_condition"] = to_string(cfg.line.params.bc);
    j["convention"] = to_string(cfg.line.convention);
    return j;
}

json run_couple(const RunConfig& cfg, const Units& u, const std::string& dir) {
    TransmonSolution ts;
    ModeSet modes;
    const auto h = coupled_hamiltonian(cfg, u, ts, modes);
    {
        Csv csv(out_path(dir, cfg, "couple.csv"), {"mode", "i", "j", "g"});
        for (std::size_t l = 0; l < h.g_table.size(); ++l)
            for (Eigen::Index i = 0; i < h.g_table[l].rows(); ++i)
                for (Eigen::Index k = 0; k < h.g_table[l].cols(); ++k)
                    csv.row({static_cast<double>(l), static_cast<double>(i), static_cast<double>(k),
                             u.energy_out(h.g_table[l](i, k))});
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix.entries(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("coupled spectrum eigensolver failed");
    {
        Csv csv(out_path(dir, cfg, "spectrum.csv"), {"index", "energy"});
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
            csv.row({static_cast<double>(k), u.energy_out(es.eigenvalues()[k])});
    }
    json j;
    j["energy_unit"] = u.energy_unit();
    j["dim"] = h.dim();
    j["g01_mode0"] = u.energy_out(h.g_table.front()(0, 1));
    j["omega01"] = u.energy_out(ts.levels[1] - ts.levels[0]);
    j["omega_mode0"] = u.energy_out(h.mode_frequencies.front());
    j["nearest_neighbor"] = h.nearest_neighbor;
    return j;
}

json run_evolve(const RunConfig& cfg, const Units& u, const std::string& dir) {
    TransmonSolution ts;
    ModeSet modes;
    const auto h = coupled_hamiltonian(cfg, u, ts, modes);
    BasisLabel start = cfg.time.initial;
    if (start.empty()) {
        start.assign(1 + h.fock_cutoffs.size(), 0);
        start[0] = 1;
    }
    const auto psi0 = StateVector::basis(h.dim(), h.index_of(start));
    const auto t = uniform_grid(u.time_in(cfg.time.t0), u.time_in(cfg.time.t1), cfg.time.points);
    const auto tr = evolve(h, psi0, t);
    tr.validate();
    std::vector<std::string> header{"time"};
    header.insert(header.end(), tr.names.begin(), tr.names.end());
    Csv csv(out_path(dir, cfg, "evolve.csv"), header);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        std::vector<double> row{u.time_out(tr.times[i])};
        for (std::size_t k = 0; k < tr.names.size(); ++k) {
            const bool energy = tr.names[k] == "energy";
            row.push_back(energy ? u.energy_out(tr.series[k][i]) : tr.series[k][i]);
        }
        csv.row(row);
    }
    double drift = 0.0;
    for (double n : tr.at("norm")) drift = std::max(drift, std::abs(n - 1.0));
    json j;
    j["time_unit"] = u.time_unit();
    j["energy_unit"] = u.energy_unit();
    j["dim"] = h.dim();
    j["g01_mode0"] = u.energy_out(h.g_table.front()(0, 1));
    j["norm_drift"] = drift;
    j["steps"] = tr.metadata;
    j["warnings"] = tr.warnings;
    return j;
}

json run_bath(const RunConfig& cfg, const std::string& dir) {
    const auto& pb = cfg.partition;
    const auto& part = pb.part;
    part.validate();
    const auto cav = cavity_modes_1d(part, pb.cavity_modes);
    const double wmax = pb.omega_max > 0.0 ? pb.omega_max : oracle_bin_spacing(part) * static_cast<double>(pb.bins);
    const auto bath = coupling_coefficients(part, cav, port_continuum(part, wmax, pb.bins));
    const Eigen::VectorXd f = normal_mode_spectrum(cav, bath);
    const Eigen::VectorXd o = closed_universe_frequencies(part, static_cast<std::size_t>(f.size()));
    double worst5 = 0.0;
    {
        Csv csv(out_path(dir, cfg, "bath_spectrum.csv"), {"index", "omega", "oracle", "rel_error"});
        for (Eigen::Index k = 0; k < f.size(); ++k) {
            const double e = std::abs(f[k] - o[k]) / o[k];
            if (k < 5) worst5 = std::max(worst5, e);
            csv.row({static_cast<double>(k), f[k], o[k], e});
        }
    }
    if (pb.decay_mode >= cav.size()) throw IndexError("partition.decay_mode exceeds cavity_modes");
    const auto dbath = coupling_coefficients(part, cav, port_continuum(part, pb.decay_omega_max, pb.decay_bins));
    const double gr = golden_rule_rate(cav, dbath, pb.decay_mode);
    SingleExcitation ex;
    ex.all_cavity_modes = pb.all_cavity_modes;
    const auto d = decay_simulation(cav, dbath, pb.decay_mode, ex, uniform_grid(0.0, 3.0 / gr, pb.decay_points));
    {
        Csv csv(out_path(dir, cfg, "bath_decay.csv"), {"time", "P_cavity", "P_bath", "norm"});
        const auto& tr = d.trajectory;
        for (std::size_t i = 0; i < tr.size(); ++i)
            csv.row({tr.times[i], tr.at("P_cavity")[i], tr.at("P_bath")[i], tr.at("norm")[i]});
    }
    json j;
    j["interface_bc"] = to_string(part.interface_bc);
    j["lowest5_max_rel_error"] = worst5;
    j["kappa_fit"] = d.fitted_rate;
    j["kappa_golden_rule"] = d.golden_rule;
    j["kappa_rel_dev"] = std::abs(d.fitted_rate - d.golden_rule) / d.golden_rule;
    j["fit_points"] = d.fit_points;
    j["recurrence"] = d.recurrence;
    j["warnings"] = d.trajectory.warnings;
    return j;
}

json run_check(const RunConfig& cfg, const std::string& dir, std::ostream& out, std::ostream& err, bool verbose,
               bool& all_pass) {
    const auto suites = run_check_suites(verbose ? &err : nullptr);
    Csv csv(out_path(dir, cfg, "check.csv"), {"suite", "check", "value", "relation", "threshold", "pass"});
    json j;
    j["suites"] = json::array();
    all_pass = true;
    for (const auto& s : suites) {
        json js;
        js["id"] = s.id;
        js["title"] = s.title;
        js["pass"] = s.pass();
        all_pass = all_pass && s.pass();
        for (const auto& c : s.items) {
            csv.row_strings({std::to_string(s.id), c.name, fmt(c.value), c.relation, fmt(c.threshold),
                             c.pass ? "1" : "0"});
            js["checks"][c.name] = {{"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
            out << (c.pass ? "PASS" : "FAIL") << "  [" << s.id << "] " << s.title << ": " << c.name << " = "
                << fmt(c.value, "%.6g") << " (" << c.relation << " " << fmt(c.threshold, "%g") << ")\n";
        }
        j["suites"].push_back(js);
    }
    out << (all_pass ? "PASS" : "FAIL") << "  all suites\n";
    return j;
}

}  // namespace

bool SuiteResult::pass() const {
    for (const auto& c : items)
        if (!c.pass) return false;
    return !items.empty();
}

SuiteResult suite_transmon_regime() {
    SuiteResult r{1, "transmon regime", {}};
    TransmonParams p;
    p.E_C = 0.3;
    p.E_J = 15.0;
    p.n_cutoff = 20;
    const auto s = solve(p);
    const double w01 = s.levels[1] - s.levels[0];
    r.items.push_back(below("dispersion_over_omega01", charge_dispersion(p, 0) / w01, 1e-5));
    r.items.push_back(below("anharmonicity_rel_dev", std::abs(anharmonicity(s) + p.E_C) / p.E_C, 0.15));
    const double n01 = std::abs(charge_matrix_element(s, 0, 1));
    const double asym = asymptotic_charge_element(p);
    r.items.push_back(below("n01_rel_dev", std::abs(n01 - asym) / asym, 0.03));
    r.items.push_back(below("n02_over_n01", std::abs(charge_matrix_element(s, 0, 2)) / n01, 0.05));
    return r;
}

SuiteResult suite_gauge_invariance() {
    SuiteResult r{2, "gauge invariance", {}};
    const std::pair<double, double> grid[] = {{1.0, 0.0}, {10.0, 0.25}, {20.0, 0.5}, {50.0, 0.1}, {100.0, 0.8}};
    double worst = 0.0;
    for (const auto& [ratio, ng] : grid) {
        TransmonParams a;
        a.E_C = 0.3;
        a.E_J = ratio * a.E_C;
        a.n_g = ng;
        TransmonParams b = a;
        b.tunneling_sign = TunnelingSign::KochMinus;
        const auto la = solve(a).levels;
        const auto lb = solve(b).levels;
        for (Eigen::Index k = 0; k < la.size(); ++k) {
            worst = std::max(worst, std::abs(la[k] - lb[k]) / std::abs(la[k]));
        }
    }
    r.items.push_back(below("max_rel_level_diff", worst, 1e-12));
    return r;
}

SuiteResult suite_field_circuit() {
    SuiteResult r{3, "field-circuit correspondence", {}};
    LineParams line;
    const auto xsec = equivalent_cross_section(line);
    const auto m = compute_modes(line, 5);
    std::mt19937_64 rng(20240917);
    std::normal_distribution<double> dist;
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        std::vector<cplx> q(5), p(5);
        for (std::size_t l = 0; l < 5; ++l) {
            q[l] = cplx(dist(rng), dist(rng));
            p[l] = cplx(dist(rng), dist(rng));
        }
        const auto e = energy_correspondence(m, xsec, q, p);
        worst = std::max(worst, std::abs(e.field_energy - e.line_energy) / e.line_energy);
    }
    r.items.push_back(below("energy_rel_diff", worst, 1e-9));

    TransmonParams tp;
    const auto ts = solve(tp);
    const auto modes = mode_operator_coeffs(compute_modes(line, 3), xsec);
    CouplingSpec cs;
    cs.beta = 0.1;
    cs.z0 = 0.0;
    const auto fr = field_reduction_check(ts, modes, xsec, cs, 3, {6, 6, 6});
    r.items.push_back(below("reduction_max_diff_over_max_H", fr.max_diff / fr.max_abs, 1e-9));
    return r;
}

SuiteResult suite_coupled_dynamics() {
    SuiteResult r{4, "coupled dynamics", {}};
    const double g = 0.01, wr = 1.0;
    Eigen::MatrixXd gt(2, 2);
    gt << 0.0, g, g, 0.0;
    const auto h = assemble(Eigen::Vector2d(0.0, wr), {wr}, {gt}, {6});
    const auto psi = StateVector::basis(h.dim(), h.index_of({1, 0}));
    const std::size_t steps = 10000;
    const auto t = uniform_grid(0.0, 1.5 * pi / g, steps + 1);
    EvolveOptions opt;
    opt.population_limit = 0;
    const auto tr = evolve(h, psi, t, opt);
    const auto& pe = tr.at("P_q1");
    std::vector<double> c;
    for (std::size_t i = 1; i < pe.size(); ++i) {
        const double a = pe[i - 1] - 0.5, b = pe[i] - 0.5;
        if (a > 0.0 && b <= 0.0) c.push_back(tr.times[i - 1] + (tr.times[i] - tr.times[i - 1]) * a / (a - b));
    }
    const double period = c.size() >= 2 ? c[1] - c[0] : std::nan("");
    r.items.push_back(below("period_rel_error", std::abs(period - pi / g) / (pi / g), 5e-4));
    double drift = 0.0;
    for (double n : tr.at("norm")) drift = std::max(drift, std::abs(n - 1.0));
    r.items.push_back(below("norm_drift", drift, 1e-9));
    std::size_t nsub = 0;
    std::sscanf(tr.metadata.c_str(), "substeps=%zu", &nsub);
    r.items.push_back(above("steps", static_cast<double>(nsub * steps), static_cast<double>(steps) - 0.5));
    return r;
}

SuiteResult suite_bath() {
    SuiteResult r{5, "projector bath", {}};
    RegionPartition part;
    part.cavity_length = 1.0;
    part.oracle_total_length = 10.0;
    part.wave_speed = 1.0;
    const auto cav = cavity_modes_1d(part, 20);
    const Eigen::VectorXd o = closed_universe_frequencies(part, 5);
    auto worst = [&](std::size_t bins) {
        const auto b = coupling_coefficients(
            part, cav, port_continuum(part, oracle_bin_spacing(part) * static_cast<double>(bins), bins));
        const Eigen::VectorXd f = normal_mode_spectrum(cav, b);
        double e = 0.0;
        for (Eigen::Index k = 0; k < 5; ++k) e = std::max(e, std::abs(f[k] - o[k]) / o[k]);
        return e;
    };
    const double e50 = worst(50), e100 = worst(100), e200 = worst(200);
    r.items.push_back(below("lowest5_rel_error_200_bins", e200, 5e-3));
    r.items.push_back(below("error_ratio_100_over_50", e100 / e50, 1.0));
    r.items.push_back(below("error_ratio_200_over_100", e200 / e100, 1.0));

    const auto b = coupling_coefficients(part, cav, port_continuum(part, 60.0, 400));
    const double gr = golden_rule_rate(cav, b, 9);
    const auto d = decay_simulation(cav, b, 9, SingleExcitation{}, uniform_grid(0.0, 3.0 / gr, 600));
    r.items.push_back(below("decay_rate_rel_dev", std::abs(d.fitted_rate - gr) / gr, 0.10));
    return r;
}

SuiteResult suite_equations_of_motion() {
    SuiteResult r{6, "equations of motion", {}};
    TransmonParams p;
    p.E_C = 1.0;
    p.E_J = 100.0;
    const double wp = std::sqrt(8.0 * p.E_C * p.E_J);
    {
        const auto tr = classical_trajectory(p, {0.01, 0.0}, uniform_grid(0.0, 5.0, 20001));
        const double w = 2 * pi / crossing_period(tr.times, tr.at("phi"));
        r.items.push_back(below("small_oscillation_rel_dev", std::abs(w - wp) / wp, 0.01));
    }
    {
        const double dt = 2 * pi / wp / 100.0;
        const std::size_t samples = 10001, per = 100;
        ClassicalOptions opt;
        opt.max_step = dt * (1.0 + 1e-12);
        const auto tr = classical_trajectory(p, {0.5, 0.0},
                                             uniform_grid(0.0, dt * static_cast<double>(per * (samples - 1)), samples), opt);
        const auto& e = tr.at("energy");
        std::vector<double> err(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) err[i] = e[i] - e.front();
        r.items.push_back(below("energy_drift_per_step", std::abs(drift_per_sample(err)) / static_cast<double>(per), 1e-10));
    }
    {
        const TransmonParams tp;
        const auto s = solve(tp);
        const Eigen::VectorXd v = (s.eigvecs.col(0) + s.eigvecs.col(1)) / std::sqrt(2.0);
        const StateVector psi(v.cast<cplx>());
        const auto e1 = ehrenfest_check(tp, psi, uniform_grid(0.0, 1.0, 5001));
        const auto e2 = ehrenfest_check(tp, psi, uniform_grid(0.0, 1.0, 10001));
        r.items.push_back(below("ehrenfest_residual", e2.residual, 1e-6));
        r.items.push_back(below("ehrenfest_order_dev", std::abs(std::log2(e1.residual / e2.residual) - 2.0), 0.2));
    }
    return r;
}

std::vector<SuiteResult> run_check_suites(std::ostream* progress) {
    std::vector<SuiteResult> out;
    for (auto f : {suite_transmon_regime, suite_gauge_invariance, suite_field_circuit, suite_coupled_dynamics,
                   suite_bath, suite_equations_of_motion}) {
        out.push_back(f());
        if (progress) *progress << "suite " << out.back().id << " done\n";
    }
    return out;
}

int run(const RunConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err, bool verbose) {
    try {
        if (!cfg.mode) throw ConfigError({"mode: not set"});
        std::filesystem::create_directories(out_dir);
        const Units u{cfg.units.value_or(UnitSystem::Natural)};
        json summary;
        bool pass = true;
        if (verbose) err << "running " << to_string(*cfg.mode) << " in " << to_string(u.sys) << " units\n";
        switch (*cfg.mode) {
            case RunMode::Transmon: summary = run_transmon(cfg, u, out_dir); break;
            case RunMode::Modes: summary = run_modes(cfg, u, out_dir); break;
            case RunMode::Couple: summary = run_couple(cfg, u, out_dir); break;
            case RunMode::Evolve: summary = run_evolve(cfg, u, out_dir); break;
            case RunMode::Bath: summary = run_bath(cfg, out_dir); break;
            case RunMode::Check: summary = run_check(cfg, out_dir, out, err, verbose, pass); break;
        }
        summary["mode"] = to_string(*cfg.mode);
        summary["units"] = to_string(u.sys);
        summary["pass"] = pass;
        write_json(out_path(out_dir, cfg, "summary.json"), summary);
        return pass ? exit_ok : exit_check_failure;
    } catch (const ConfigError& e) {
        err << "config error:\n";
        for (const auto& v : e.violations()) err << "  " << v << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_numeric_error;
    }
}

}  // namespace cqed
