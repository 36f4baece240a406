// fracsys command line: a thin client of the C API in fracsys.h.
//
//   fracsys <mode> --config <path> [--out <dir>] [--seed <u64>] [--grid-n N]
//           [--grid-L L] [--gs-tol T] [--restarts R] [--set key=value ...]
//
// Modes: analyze | ground-state | landscape | nondegen | rayleigh | sweep.
// Exit codes: 0 ok, 1 config/parse error, 2 constraint violation,
// 3 numeric non-convergence.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracsys.h"

namespace {

int fail(fracsys_status st) {
    std::fprintf(stderr, "fracsys: %s: %s\n", fracsys_status_name(st), fracsys_last_error());
    return fracsys_exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracsys: proportional and least-energy solutions of a coupled fractional Schrodinger system"};
    app.footer("Exit codes: 0 ok, 1 config error, 2 constraint violation, 3 non-convergence.");

    std::string mode;
    std::string config_path;
    std::string out_dir = ".";
    std::string seed, grid_n, grid_L, gs_tol, restarts, descent_tol;
    std::vector<std::string> sets;

    app.add_option("mode", mode, "analyze | ground-state | landscape | nondegen | rayleigh | sweep")
        ->required();
    app.add_option("--config", config_path, "path to the run configuration")->required();
    app.add_option("--out", out_dir, "output directory (default: current)");
    app.add_option("--seed", seed, "override run.seed");
    app.add_option("--grid-n", grid_n, "override grid.n");
    app.add_option("--grid-L", grid_L, "override grid.L");
    app.add_option("--gs-tol", gs_tol, "override tolerances.gs_tol");
    app.add_option("--restarts", restarts, "override run.restarts");
    app.add_option("--descent-tol", descent_tol, "override tolerances.descent_tol");
    app.add_option("--set", sets, "extra overrides as section.key=value");

    CLI11_PARSE(app, argc, argv);

    fracsys_config* cfg = nullptr;
    fracsys_status st = fracsys_config_load(config_path.c_str(), &cfg);
    if (st != FRACSYS_OK) return fail(st);

    struct Override {
        const char* key;
        const std::string* value;
    };
    const Override overrides[] = {
        {"run.mode", &mode},         {"run.seed", &seed},           {"grid.n", &grid_n},
        {"grid.L", &grid_L},         {"tolerances.gs_tol", &gs_tol}, {"run.restarts", &restarts},
        {"tolerances.descent_tol", &descent_tol},
    };
    for (const auto& ov : overrides) {
        if (ov.value->empty()) continue;
        st = fracsys_config_set(cfg, ov.key, ov.value->c_str());
        if (st != FRACSYS_OK) {
            fracsys_config_free(cfg);
            return fail(st);
        }
    }
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "fracsys: --set expects section.key=value, got '%s'\n", kv.c_str());
            fracsys_config_free(cfg);
            return 1;
        }
        st = fracsys_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        if (st != FRACSYS_OK) {
            fracsys_config_free(cfg);
            return fail(st);
        }
    }

    fracsys_result* result = nullptr;
    st = fracsys_run(cfg, out_dir.c_str(), &result);
    if (result) {
        std::fprintf(stdout, "%s", fracsys_result_report_json(result));
    }
    int code = fracsys_exit_code(st);
    if (st != FRACSYS_OK) std::fprintf(stderr, "fracsys: %s: %s\n", fracsys_status_name(st), fracsys_last_error());
    fracsys_result_free(result);
    fracsys_config_free(cfg);
    return code;
}
