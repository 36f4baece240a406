#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "fracsys/params.hpp"

namespace fracsys {

enum class RunMode { analyze, ground_state, landscape, nondegen, rayleigh, sweep };

const char* run_mode_name(RunMode m);
std::optional<RunMode> run_mode_from_string(const std::string& name);

struct SweepSpec {
    std::string variable;  // one of beta, mu1, mu2, p, s
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    bool log_scale = false;
};

struct RunConfig {
    SystemParams params;
    RunMode mode = RunMode::analyze;

    int grid_n = 0;      // 0: default by dimension (8192 for N=1, 256 for N=2)
    double grid_L = 0.0; // 0: default by dimension (256 for N=1, 64 for N=2)

    double gs_tol = 1e-10;
    double eig_tol = 1e-10;
    double root_tol = 1e-12;
    double descent_tol = 1e-8;

    std::uint64_t seed = 12345;
    int restarts = 8;
    int tau_index = 0;        // which root of g downstream stages use
    int spectrum_count = 8;
    double weight_floor = 1e-10;
    double grid_tol = 1e-5;
    int threads = 0;          // sweep workers; 0 = hardware default

    double landscape_lo = 1e-3;
    double landscape_hi = 100.0;
    int landscape_count = 2000;

    std::optional<SweepSpec> sweep;

    int effective_grid_n() const { return grid_n > 0 ? grid_n : (params.N == 1 ? 8192 : 256); }
    double effective_grid_L() const { return grid_L > 0.0 ? grid_L : (params.N == 1 ? 256.0 : 64.0); }
};

// Flat key=value text with [section] headers; '#' starts a comment.  All keys
// are "section.key".  Parse errors carry line and field diagnostics.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Semantic validation of the raw key/value map into a RunConfig.
RunConfig build_config(const std::map<std::string, std::string>& kv);

RunConfig load_config_file(const std::string& path);

}  // namespace fracsys
