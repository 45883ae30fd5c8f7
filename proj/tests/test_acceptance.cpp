// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cqed/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <sys/wait.h>

#ifndef CQED_CLI_PATH
#error "CQED_CLI_PATH must point at the cqed executable"
#endif

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int shell(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& detail) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        const fs::path other = b / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
            detail = "differs: " + e.path().filename().string();
            return false;
        }
        ++n;
    }
    for (const auto& e : fs::directory_iterator(b)) {
        if (!fs::exists(a / e.path().filename())) {
            detail = "extra file: " + e.path().filename().string();
            return false;
        }
    }
    detail = std::to_string(n) + " files identical";
    return n > 0;
}

int failures = 0;

void report(int id, const std::string& title, bool pass, double seconds, double limit, const std::string& detail) {
    const bool ok = pass && seconds < limit;
    if (!ok) ++failures;
    std::printf("%s  criterion %d  %s  (%.2f s, limit %.0f s)  %s\n", ok ? "PASS" : "FAIL", id, title.c_str(),
                seconds, limit, detail.c_str());
    std::fflush(stdout);
}

void suite(int id, const std::function<cqed::SuiteResult()>& f, double limit) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = f();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string detail;
    for (const auto& c : r.items) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%s=%.3g%s%g", detail.empty() ? "" : "; ", c.name.c_str(), c.value,
                      c.relation.c_str(), c.threshold);
        detail += buf;
    }
    report(id, r.title, r.pass(), dt, limit, detail);
}

}  // namespace

int main() {
    suite(1, cqed::suite_transmon_regime, 1.0);
    suite(2, cqed::suite_gauge_invariance, 1.0);
    suite(3, cqed::suite_field_circuit, 10.0);
    suite(4, cqed::suite_coupled_dynamics, 30.0);
    suite(5, cqed::suite_bath, 120.0);
    suite(6, cqed::suite_equations_of_motion, 60.0);

    {
        const auto t0 = std::chrono::steady_clock::now();
        const fs::path root = fs::temp_directory_path() / "cqed_acceptance";
        fs::remove_all(root);
        fs::create_directories(root);
        {
            std::ofstream cfg(root / "transmon.json", std::ios::binary);
            cfg << R"({"transmon": {"E_C": 0.3, "E_J": 15, "n_g": 0, "n_cutoff": 20},)"
                << R"( "sweep": {"n_g_start": 0, "n_g_stop": 1, "points": 11, "levels": 4}})" << '\n';
        }
        const std::string cli = CQED_CLI_PATH;
        bool pass = true;
        std::string detail;
        for (const char* run : {"a", "b"}) {
            const fs::path d = root / run;
            fs::create_directories(d);
            const int rc = shell("\"" + cli + "\" check --out \"" + (d / "check").string() + "\" > \"" +
                                 (d / "check_stdout.txt").string() + "\" 2>&1");
            const int rt = shell("\"" + cli + "\" transmon --config \"" + (root / "transmon.json").string() +
                                 "\" --out \"" + (d / "transmon").string() + "\" > /dev/null 2>&1");
            if (rc != 0 || rt != 0) {
                pass = false;
                detail = "exit codes " + std::to_string(rc) + ", " + std::to_string(rt);
            }
        }
        const std::string out_a = slurp(root / "a" / "check_stdout.txt");
        if (pass && out_a.find("PASS  all suites") == std::string::npos) {
            pass = false;
            detail = "check did not report PASS";
        }
        if (pass && out_a != slurp(root / "b" / "check_stdout.txt")) {
            pass = false;
            detail = "check stdout differs between runs";
        }
        std::string d1, d2;
        if (pass) {
            pass = same_tree(root / "a" / "check", root / "b" / "check", d1) &&
                   same_tree(root / "a" / "transmon", root / "b" / "transmon", d2);
            detail = "check reports PASS; check: " + d1 + "; transmon: " + d2;
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report(7, "CLI determinism", pass, dt, 600.0, detail);
    }

    std::printf("%s  %d of 7 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
