#include "fracsys/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace fracsys {

const char* run_mode_name(RunMode m) {
    switch (m) {
        case RunMode::analyze: return "analyze";
        case RunMode::ground_state: return "ground-state";
        case RunMode::landscape: return "landscape";
        case RunMode::nondegen: return "nondegen";
        case RunMode::rayleigh: return "rayleigh";
        case RunMode::sweep: return "sweep";
    }
    return "?";
}

std::optional<RunMode> run_mode_from_string(const std::string& name) {
    if (name == "analyze") return RunMode::analyze;
    if (name == "ground-state") return RunMode::ground_state;
    if (name == "landscape") return RunMode::landscape;
    if (name == "nondegen") return RunMode::nondegen;
    if (name == "rayleigh") return RunMode::rayleigh;
    if (name == "sweep") return RunMode::sweep;
    return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return {b, e};
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    raise(ErrorKind::parse, "config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::map<std::string, std::string>& kv, const std::string& key, double dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        raise(ErrorKind::parse, "field '" + key + "': not a number: '" + it->second + "'");
    }
}

long long parse_int(const std::map<std::string, std::string>& kv, const std::string& key, long long dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        raise(ErrorKind::parse, "field '" + key + "': not an integer: '" + it->second + "'");
    }
}

std::uint64_t parse_u64(const std::map<std::string, std::string>& kv, const std::string& key, std::uint64_t dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        raise(ErrorKind::parse, "field '" + key + "': not an unsigned integer: '" + it->second + "'");
    }
}

double require_double(const std::map<std::string, std::string>& kv, const std::string& key) {
    if (!kv.count(key)) raise(ErrorKind::parse, "missing required field '" + key + "'");
    return parse_double(kv, key, 0.0);
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') parse_fail(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) parse_fail(line, "empty section name");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) parse_fail(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) parse_fail(line, "empty key");
        if (value.empty()) parse_fail(line, "empty value for key '" + key + "'");
        if (section.empty()) parse_fail(line, "key '" + key + "' outside any [section]");
        const std::string full = section + "." + key;
        if (kv.count(full)) parse_fail(line, "duplicate key '" + full + "'");
        kv[full] = value;
    }
    return kv;
}

RunConfig build_config(const std::map<std::string, std::string>& kv) {
    static const std::set<std::string> known = {
        "params.s", "params.p", "params.N", "params.mu1", "params.mu2", "params.beta",
        "grid.n", "grid.L",
        "tolerances.gs_tol", "tolerances.eig_tol", "tolerances.root_tol", "tolerances.descent_tol",
        "run.mode", "run.seed", "run.restarts", "run.tau_index", "run.spectrum_count",
        "run.weight_floor", "run.grid_tol", "run.threads",
        "landscape.lo", "landscape.hi", "landscape.count",
        "sweep.variable", "sweep.lo", "sweep.hi", "sweep.count", "sweep.scale",
    };
    for (const auto& [k, v] : kv)
        if (!known.count(k)) raise(ErrorKind::parse, "unknown field '" + k + "'");

    RunConfig cfg;
    const double s = require_double(kv, "params.s");
    const double p = require_double(kv, "params.p");
    const int N = static_cast<int>(parse_int(kv, "params.N", 1));
    const double mu1 = require_double(kv, "params.mu1");
    const double mu2 = require_double(kv, "params.mu2");
    const double beta = require_double(kv, "params.beta");
    try {
        cfg.params = SystemParams(s, p, N, mu1, mu2, beta);
    } catch (const Error& e) {
        raise(ErrorKind::parse, std::string("invalid [params]: ") + e.what());
    }

    auto it = kv.find("run.mode");
    if (it == kv.end()) raise(ErrorKind::parse, "missing required field 'run.mode'");
    const auto mode = run_mode_from_string(it->second);
    if (!mode) raise(ErrorKind::parse, "field 'run.mode': unknown mode '" + it->second + "'");
    cfg.mode = *mode;

    cfg.grid_n = static_cast<int>(parse_int(kv, "grid.n", 0));
    cfg.grid_L = parse_double(kv, "grid.L", 0.0);
    cfg.gs_tol = parse_double(kv, "tolerances.gs_tol", cfg.gs_tol);
    cfg.eig_tol = parse_double(kv, "tolerances.eig_tol", cfg.eig_tol);
    cfg.root_tol = parse_double(kv, "tolerances.root_tol", cfg.root_tol);
    cfg.descent_tol = parse_double(kv, "tolerances.descent_tol", cfg.descent_tol);
    if (!(cfg.gs_tol > 0.0) || !(cfg.eig_tol > 0.0) || !(cfg.root_tol > 0.0) || !(cfg.descent_tol > 0.0))
        raise(ErrorKind::parse, "[tolerances]: all tolerances must be positive");

    cfg.seed = parse_u64(kv, "run.seed", cfg.seed);
    cfg.restarts = static_cast<int>(parse_int(kv, "run.restarts", cfg.restarts));
    cfg.tau_index = static_cast<int>(parse_int(kv, "run.tau_index", cfg.tau_index));
    cfg.spectrum_count = static_cast<int>(parse_int(kv, "run.spectrum_count", cfg.spectrum_count));
    cfg.weight_floor = parse_double(kv, "run.weight_floor", cfg.weight_floor);
    cfg.grid_tol = parse_double(kv, "run.grid_tol", cfg.grid_tol);
    cfg.threads = static_cast<int>(parse_int(kv, "run.threads", cfg.threads));
    if (cfg.restarts < 0 || cfg.tau_index < 0 || cfg.spectrum_count < 1 || cfg.threads < 0)
        raise(ErrorKind::parse, "[run]: counts must be non-negative (spectrum_count >= 1)");

    cfg.landscape_lo = parse_double(kv, "landscape.lo", cfg.landscape_lo);
    cfg.landscape_hi = parse_double(kv, "landscape.hi", cfg.landscape_hi);
    cfg.landscape_count = static_cast<int>(parse_int(kv, "landscape.count", cfg.landscape_count));
    if (!(cfg.landscape_lo > 0.0) || !(cfg.landscape_hi > cfg.landscape_lo) || cfg.landscape_count < 2)
        raise(ErrorKind::parse, "[landscape]: requires 0 < lo < hi and count >= 2");

    if (cfg.grid_n != 0) {
        if (cfg.grid_n < 8 || (cfg.grid_n & (cfg.grid_n - 1)) != 0)
            raise(ErrorKind::parse, "field 'grid.n': must be a power of two >= 8");
    }
    if (kv.count("grid.L") && !(cfg.grid_L > 0.0)) raise(ErrorKind::parse, "field 'grid.L': must be positive");

    if (cfg.mode == RunMode::sweep) {
        SweepSpec sw;
        auto vit = kv.find("sweep.variable");
        if (vit == kv.end()) raise(ErrorKind::parse, "sweep mode requires 'sweep.variable'");
        sw.variable = vit->second;
        static const std::set<std::string> vars = {"beta", "mu1", "mu2", "p", "s"};
        if (!vars.count(sw.variable))
            raise(ErrorKind::parse, "field 'sweep.variable': must be one of beta, mu1, mu2, p, s");
        sw.lo = require_double(kv, "sweep.lo");
        sw.hi = require_double(kv, "sweep.hi");
        sw.count = static_cast<int>(parse_int(kv, "sweep.count", 0));
        if (sw.count < 2) raise(ErrorKind::parse, "field 'sweep.count': must be >= 2");
        if (!(sw.lo < sw.hi)) raise(ErrorKind::parse, "[sweep]: requires lo < hi");
        auto sit = kv.find("sweep.scale");
        if (sit != kv.end()) {
            if (sit->second == "log")
                sw.log_scale = true;
            else if (sit->second == "linear")
                sw.log_scale = false;
            else
                raise(ErrorKind::parse, "field 'sweep.scale': must be 'linear' or 'log'");
        }
        if (sw.log_scale && !(sw.lo > 0.0)) raise(ErrorKind::parse, "[sweep]: log scale requires lo > 0");

        // admissibility of the swept window
        const double crit_half = 0.5 * critical_exponent(cfg.params.s, cfg.params.N);
        if (sw.variable == "mu1" && !(sw.lo > cfg.params.mu2))
            raise(ErrorKind::parse, "[sweep]: mu1 window must stay above mu2");
        if (sw.variable == "mu2" && (!(sw.lo > 0.0) || !(sw.hi < cfg.params.mu1)))
            raise(ErrorKind::parse, "[sweep]: mu2 window must lie in (0, mu1)");
        if (sw.variable == "p" && (!(sw.lo > 1.0) || !(sw.hi < crit_half)))
            raise(ErrorKind::parse, "[sweep]: p window must lie in (1, 2_s^*/2)");
        if (sw.variable == "s" && (!(sw.lo > 0.0) || !(sw.hi <= 1.0)))
            raise(ErrorKind::parse, "[sweep]: s window must lie in (0, 1]");
        cfg.sweep = sw;
    }

    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) raise(ErrorKind::io, "cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return build_config(parse_config_text(ss.str()));
}

}  // namespace fracsys
