#pragma once

#include <string>

#include "fracsys/config.hpp"

namespace fracsys {

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 2 constraint violation, 3 numeric non-convergence
    std::string status; // "ok" | "constraint-violation" | "non-convergence"
    std::string report_json;  // canonical serialized report
};

// Executes the configured mode, writes report.json plus the mode's data files
// into out_dir (created if missing), and returns the outcome.
RunOutcome run(const RunConfig& cfg, const std::string& out_dir);

int exit_code_for(ErrorKind kind);

}  // namespace fracsys
