#include "cqed/config.hpp"

#include "cqed/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <limits>

namespace cqed {

using nlohmann::json;

const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::Transmon: return "transmon";
        case RunMode::Modes: return "modes";
        case RunMode::Couple: return "couple";
        case RunMode::Evolve: return "evolve";
        case RunMode::Bath: return "bath";
        case RunMode::Check: return "check";
    }
    return "?";
}

const char* to_string(UnitSystem u) { return u == UnitSystem::SI ? "si" : "natural"; }

std::optional<RunMode> parse_run_mode(const std::string& s) {
    for (auto m : {RunMode::Transmon, RunMode::Modes, RunMode::Couple, RunMode::Evolve, RunMode::Bath,
                   RunMode::Check}) {
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

std::optional<UnitSystem> parse_unit_system(const std::string& s) {
    if (s == "si" || s == "SI") return UnitSystem::SI;
    if (s == "natural" || s == "Natural") return UnitSystem::Natural;
    return std::nullopt;
}

namespace {

using Errors = std::vector<std::string>;

// Reads the keys of one JSON object, recording a violation for every bad or unknown key.
class Block {
public:
    Block(const json& obj, std::string path, Errors& errs) : obj_(obj), path_(std::move(path)), errs_(errs) {}

    Block(const Block&) = delete;
    Block& operator=(const Block&) = delete;

    void finish() {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) errs_.push_back(name(it.key()) + ": unknown key");
        }
    }

    std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out, const std::function<bool(double)>& ok = nullptr,
                const char* rule = "") {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_number()) {
            errs_.push_back(name(key) + ": expected a number");
            return;
        }
        const double x = v->get<double>();
        if (!std::isfinite(x) || (ok && !ok(x))) {
            errs_.push_back(name(key) + ": " + (rule[0] ? rule : "must be finite"));
            return;
        }
        out = x;
    }

    void count(const std::string& key, std::size_t& out, std::size_t min_value) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_number_integer() || v->get<long long>() < static_cast<long long>(min_value)) {
            errs_.push_back(name(key) + ": expected an integer >= " + std::to_string(min_value));
            return;
        }
        out = static_cast<std::size_t>(v->get<long long>());
    }

    void integer(const std::string& key, int& out, int min_value) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_number_integer() || v->get<long long>() < min_value ||
            v->get<long long>() > std::numeric_limits<int>::max()) {
            errs_.push_back(name(key) + ": expected an integer >= " + std::to_string(min_value));
            return;
        }
        out = static_cast<int>(v->get<long long>());
    }

    void boolean(const std::string& key, bool& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_boolean()) {
            errs_.push_back(name(key) + ": expected true or false");
            return;
        }
        out = v->get<bool>();
    }

    template <class E>
    void choice(const std::string& key, E& out, const std::vector<std::pair<std::string, E>>& options) {
        const json* v = find(key);
        if (!v) return;
        if (v->is_string()) {
            for (const auto& [s, e] : options) {
                if (v->get<std::string>() == s) {
                    out = e;
                    return;
                }
            }
        }
        std::string list;
        for (const auto& o : options) list += (list.empty() ? "" : ", ") + o.first;
        errs_.push_back(name(key) + ": expected one of " + list);
    }

    Errors& errors() { return errs_; }

private:
    const json& obj_;
    std::string path_;
    Errors& errs_;
    std::set<std::string> seen_;
};

const auto positive = [](double x) { return x > 0.0; };
const auto non_negative = [](double x) { return x >= 0.0; };

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

void read_transmon(Block& b, TransmonParams& t) {
    b.number("E_C", t.E_C, positive, "must be > 0");
    b.number("E_J", t.E_J, non_negative, "must be >= 0");
    b.number("n_g", t.n_g);
    b.integer("n_cutoff", t.n_cutoff, 1);
    b.choice<TunnelingSign>("tunneling_sign", t.tunneling_sign,
                            {{"PaperPlus", TunnelingSign::PaperPlus}, {"KochMinus", TunnelingSign::KochMinus}});
}

void read_sweep(Block& b, SweepSpec& s) {
    b.number("n_g_start", s.n_g_start);
    b.number("n_g_stop", s.n_g_stop);
    b.count("points", s.points, 1);
    b.count("levels", s.levels, 1);
}

void read_line(Block& b, LineSpec& l) {
    b.number("L_pul", l.params.L_pul, positive, "must be > 0");
    b.number("C_pul", l.params.C_pul, positive, "must be > 0");
    b.number("length", l.params.length, positive, "must be > 0");
    b.choice<BoundaryCondition>("bc", l.params.bc,
                                {{"OpenOpen", BoundaryCondition::OpenOpen},
                                 {"ShortShort", BoundaryCondition::ShortShort},
                                 {"OpenShort", BoundaryCondition::OpenShort}});
    b.choice<Convention>("convention", l.convention,
                         {{"LiteralIntegral", Convention::LiteralIntegral},
                          {"BlaisCompat", Convention::BlaisCompat}});
    b.count("n_modes", l.n_modes, 1);
}

void read_cross_section(Block& b, CrossSectionSpec& x) {
    b.number("w", x.w, positive, "must be > 0");
    b.number("d", x.d, positive, "must be > 0");
    b.number("eps_r", x.eps_r, positive, "must be > 0");
    if (!b.find("d")) b.errors().push_back(b.name("d") + ": required");
}

void read_coupling(Block& b, CouplingBlock& c) {
    b.number("beta", c.spec.beta, [](double x) { return x >= 0.0 && x <= 1.0; }, "must lie in [0, 1]");
    b.number("z0", c.spec.z0, non_negative, "must be >= 0");
    b.boolean("include_beta", c.spec.include_beta);
    b.number("path_gain", c.spec.path_gain);
    b.count("transmon_levels", c.transmon_levels, 2);
    b.boolean("nearest_neighbor", c.nearest_neighbor);
    if (const json* v = b.find("fock_cutoffs")) {
        std::vector<std::size_t> f;
        bool ok = v->is_array() && !v->empty();
        if (ok) {
            for (const auto& e : *v) {
                if (!e.is_number_integer() || e.get<long long>() < 2) {
                    ok = false;
                    break;
                }
                f.push_back(static_cast<std::size_t>(e.get<long long>()));
            }
        } else if (v->is_number_integer() && v->get<long long>() >= 2) {
            ok = true;
            f.push_back(static_cast<std::size_t>(v->get<long long>()));
        }
        if (ok) {
            c.fock_cutoffs = f;
        } else {
            b.errors().push_back(b.name("fock_cutoffs") + ": expected an integer >= 2 or a list of them");
        }
    }
}

void read_partition(Block& b, PartitionBlock& p) {
    b.number("cavity_length", p.part.cavity_length, positive, "must be > 0");
    b.number("wave_speed", p.part.wave_speed, positive, "must be > 0");
    b.number("total_length", p.part.oracle_total_length, positive, "must be > 0");
    b.choice<InterfaceBC>("interface_bc", p.part.interface_bc,
                          {{"PMCclosesDomain_PECclosesPort", InterfaceBC::PMCclosesDomain_PECclosesPort},
                           {"PECclosesDomain_PMCclosesPort", InterfaceBC::PECclosesDomain_PMCclosesPort}});
    b.count("cavity_modes", p.cavity_modes, 1);
    b.count("bins", p.bins, 8);
    b.number("omega_max", p.omega_max, non_negative, "must be >= 0");
    b.count("decay_mode", p.decay_mode, 0);
    b.count("decay_bins", p.decay_bins, 8);
    b.number("decay_omega_max", p.decay_omega_max, positive, "must be > 0");
    b.count("decay_points", p.decay_points, 2);
    b.boolean("all_cavity_modes", p.all_cavity_modes);
    if (!(p.part.oracle_total_length > p.part.cavity_length)) {
        b.errors().push_back(b.name("total_length") + ": must exceed cavity_length");
    }
    if (p.decay_mode >= p.cavity_modes) {
        b.errors().push_back(b.name("decay_mode") + ": must be below cavity_modes");
    }
}

void read_time(Block& b, TimeSpec& t) {
    b.number("t0", t.t0);
    b.number("t1", t.t1);
    b.count("points", t.points, 2);
    if (const json* v = b.find("initial")) {
        bool ok = v->is_array();
        std::vector<int> l;
        if (ok) {
            for (const auto& e : *v) {
                if (!e.is_number_integer() || e.get<long long>() < 0) {
                    ok = false;
                    break;
                }
                l.push_back(static_cast<int>(e.get<long long>()));
            }
        }
        if (ok) t.initial = l;
        else b.errors().push_back(b.name("initial") + ": expected a list of non-negative integers");
    }
    if (!(t.t1 > t.t0)) b.errors().push_back(b.name("t1") + ": must exceed t0");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError({"syntax error at line " + std::to_string(line) + ", column " +
                           std::to_string(col)});
    }
    if (!doc.is_object()) throw ConfigError({"top level: expected a JSON object"});

    RunConfig cfg;
    Errors errs;
    {
        Block top(doc, "", errs);
        if (const json* m = top.find("mode")) {
            auto r = m->is_string() ? parse_run_mode(m->get<std::string>()) : std::nullopt;
            if (r) cfg.mode = r;
            else errs.push_back("mode: expected one of transmon, modes, couple, evolve, bath, check");
        }
        if (const json* u = top.find("units")) {
            auto r = u->is_string() ? parse_unit_system(u->get<std::string>()) : std::nullopt;
            if (r) cfg.units = r;
            else errs.push_back("units: expected si or natural");
        }
        auto block = [&](const std::string& key, const std::function<void(Block&)>& read) {
            const json* v = top.find(key);
            if (!v) return;
            if (!v->is_object()) {
                errs.push_back(key + ": expected an object");
                return;
            }
            cfg.blocks.insert(key);
            Block b(*v, key, errs);
            read(b);
            b.finish();
        };
        block("transmon", [&](Block& b) { read_transmon(b, cfg.transmon); });
        block("sweep", [&](Block& b) { read_sweep(b, cfg.sweep); });
        block("line", [&](Block& b) { read_line(b, cfg.line); });
        block("cross_section", [&](Block& b) {
            cfg.cross_section.emplace();
            read_cross_section(b, *cfg.cross_section);
        });
        block("coupling", [&](Block& b) { read_coupling(b, cfg.coupling); });
        block("partition", [&](Block& b) { read_partition(b, cfg.partition); });
        block("time", [&](Block& b) { read_time(b, cfg.time); });
        block("output", [&](Block& b) {
            if (const json* p = b.find("prefix")) {
                if (p->is_string()) cfg.output_prefix = p->get<std::string>();
                else errs.push_back("output.prefix: expected a string");
            }
        });
        top.finish();
    }
    if (!errs.empty()) throw ConfigError(errs);
    return cfg;
}

RunConfig resolve_config(RunConfig cfg, RunMode mode, std::optional<UnitSystem> units_flag) {
    Errors errs;
    if (cfg.mode && *cfg.mode != mode) {
        errs.push_back(std::string("mode: config says ") + to_string(*cfg.mode) + " but the command is " +
                       to_string(mode));
    }
    cfg.mode = mode;
    if (units_flag && cfg.units && *units_flag != *cfg.units) {
        errs.push_back(std::string("units: unit mismatch, config says ") + to_string(*cfg.units) +
                       " but --units is " + to_string(*units_flag));
    }
    if (!cfg.units) cfg.units = units_flag.value_or(UnitSystem::Natural);

    std::vector<std::string> need;
    switch (mode) {
        case RunMode::Transmon: need = {"transmon"}; break;
        case RunMode::Modes: need = {"line"}; break;
        case RunMode::Couple: need = {"transmon", "line", "coupling"}; break;
        case RunMode::Evolve: need = {"transmon", "line", "coupling", "time"}; break;
        case RunMode::Bath: need = {"partition"}; break;
        case RunMode::Check: break;
    }
    for (const auto& b : need) {
        if (!cfg.has(b)) errs.push_back(b + ": block required for mode " + to_string(mode));
    }
    if (cfg.has("coupling") && cfg.has("line") && cfg.coupling.spec.z0 > cfg.line.params.length) {
        errs.push_back("coupling.z0: must lie on the line [0, line.length]");
    }
    if (cfg.has("coupling") && cfg.coupling.fock_cutoffs.size() != 1 &&
        cfg.coupling.fock_cutoffs.size() != cfg.line.n_modes) {
        errs.push_back("coupling.fock_cutoffs: needs one entry or one per mode (line.n_modes)");
    }
    if (mode == RunMode::Couple || mode == RunMode::Evolve) {
        if (cfg.coupling.transmon_levels > cfg.transmon.dim()) {
            errs.push_back("coupling.transmon_levels: exceeds the charge basis size 2 n_cutoff + 1");
        }
    }
    if (mode == RunMode::Transmon && cfg.sweep.levels > cfg.transmon.dim()) {
        errs.push_back("sweep.levels: exceeds the charge basis size 2 n_cutoff + 1");
    }
    if (mode == RunMode::Evolve && !cfg.time.initial.empty()) {
        if (cfg.time.initial.size() != 1 + cfg.line.n_modes) {
            errs.push_back("time.initial: needs one transmon level plus one photon number per mode");
        }
    }
    if (!errs.empty()) throw ConfigError(errs);
    return cfg;
}

}  // namespace cqed
