#include "fracsys/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "fracsys/ground_state.hpp"
#include "fracsys/least_energy.hpp"
#include "fracsys/nondegeneracy.hpp"

namespace fracsys {

using nlohmann::json;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parse:
        case ErrorKind::io:
            return 1;
        case ErrorKind::invalid_argument:
        case ErrorKind::domain:
        case ErrorKind::constraint:
        case ErrorKind::no_root:
        case ErrorKind::positivity_violation:
        case ErrorKind::out_of_range:
        case ErrorKind::semitrivial_minimizer:
        case ErrorKind::zero_coupling:
            return 2;
        case ErrorKind::unclassified:
        case ErrorKind::weight_floor_too_small:
        case ErrorKind::no_convergence:
        case ErrorKind::collapse_to_zero:
        case ErrorKind::internal:
            return 3;
    }
    return 3;
}

namespace {

json json_number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;  // NaN/inf have no JSON literal
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json params_json(const SystemParams& sp) {
    const NormalizedParams np = normalize(sp);
    return json{{"s", sp.s},   {"p", sp.p},     {"N", sp.N},
                {"mu1", sp.mu1}, {"mu2", sp.mu2}, {"beta", sp.beta},
                {"mu", np.mu},   {"beta_tilde", np.beta_tilde}};
}

json interval_json(const Interval& iv) {
    return json{{"lo", iv.lo},
                {"hi", std::isfinite(iv.hi) ? json(iv.hi) : json(nullptr)},
                {"lo_closed", iv.lo_closed},
                {"hi_closed", iv.hi_closed}};
}

json conditions_json(const ConditionReport& cr) {
    json j;
    j["a_flags"] = cr.a_flags;
    j["b_flags"] = cr.b_flags;
    j["beta0"] = cr.beta0 ? json(*cr.beta0) : json(nullptr);
    j["beta1"] = cr.beta1 ? json(*cr.beta1) : json(nullptr);
    j["nonexistence_window"] = cr.nonexistence_window;
    return j;
}

json tau_solution_json(const TauSolution& sol) {
    return json{{"tau0", sol.tau0},
                {"k1", sol.k1},
                {"region", interval_json(sol.region)},
                {"positivity_first", sol.positivity_first},
                {"positivity_second", sol.positivity_second},
                {"g_residual", json_number(sol.g_residual)}};
}

json landscape_json(const Landscape& L) {
    json pts = json::array();
    for (const auto& cp : L.critical_points)
        pts.push_back(json{{"tau", cp.tau}, {"kind", critical_kind_name(cp.kind)}, {"f_value", cp.f_value}});
    return json{{"critical_points", pts},
                {"tau_min", L.tau_min ? json(*L.tau_min) : json(nullptr)},
                {"k_min", L.k_min ? json(*L.k_min) : json(nullptr)},
                {"case_label", L.case_label}};
}

json coeffs_json(const LinearizationCoeffs& lc) {
    return json{{"a", lc.a},
                {"b", lc.b},
                {"c", lc.c},
                {"gamma_plus", lc.gamma_plus},
                {"gamma_minus", lc.gamma_minus},
                {"f_tilde", lc.f_tilde},
                {"theta", lc.theta}};
}

json nondegeneracy_json(const NondegeneracyReport& rep) {
    json j;
    j["coeffs"] = coeffs_json(rep.coeffs);
    j["spectrum"] = rep.spectrum.eigenvalues;
    j["f_tilde_distances"] = rep.f_tilde_distances;
    j["kernel_singular_values"] = rep.kernel_singular_values;
    j["kernel_dim"] = rep.kernel_dim;
    j["kernel_gap"] = json_number(rep.kernel_gap);
    j["basis_residuals"] = rep.basis_residuals;
    j["verdict"] = verdict_name(rep.verdict);
    return j;
}

json ground_state_json(const GroundState& gs) {
    const std::size_t origin = gs.w.grid.N == 1 ? static_cast<std::size_t>(gs.w.grid.n / 2)
                                                : static_cast<std::size_t>(gs.w.grid.n / 2) * gs.w.grid.n +
                                                      gs.w.grid.n / 2;
    return json{{"n", gs.w.grid.n},       {"L", gs.w.grid.L},
                {"iterations", gs.iterations}, {"residual_norm", gs.residual_norm},
                {"S_value", gs.S_value},   {"w_peak", gs.w[origin]}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) raise(ErrorKind::io, "cannot open for writing: " + path.string());
    os << text;
    if (!os) raise(ErrorKind::io, "write failed: " + path.string());
}

GroundStateOptions gs_options(const RunConfig& cfg) {
    GroundStateOptions o;
    o.tol = cfg.gs_tol;
    return o;
}

KernelOptions kernel_options(const RunConfig& cfg) {
    KernelOptions o;
    o.spectrum.weight_floor = cfg.weight_floor;
    o.spectrum.tol = cfg.eig_tol;
    o.spectrum.seed = cfg.seed;
    o.spectrum_count = cfg.spectrum_count;
    o.grid_tol = cfg.grid_tol;
    o.tol = cfg.eig_tol;
    o.seed = cfg.seed + 1;
    return o;
}

// ----- mode bodies ---------------------------------------------------------

void run_landscape(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    const SystemParams& sp = cfg.params;
    report["conditions"] = conditions_json(classify_conditions(sp));
    report["region_D"] = interval_json(region_D(sp));

    std::string csv = "tau,f,g,h\n";
    for (int i = 0; i < cfg.landscape_count; ++i) {
        const double t = cfg.landscape_lo *
                         std::pow(cfg.landscape_hi / cfg.landscape_lo,
                                  static_cast<double>(i) / (cfg.landscape_count - 1));
        double fv = std::numeric_limits<double>::quiet_NaN();
        try {
            fv = eval_f(sp, t);
        } catch (const Error&) {
        }
        csv += csv_num(t) + "," + csv_num(fv) + "," + csv_num(eval_g(sp, t)) + "," + csv_num(eval_h(sp, t)) + "\n";
    }
    write_text(out / "landscape.csv", csv);
    report["files"] = json::array({"landscape.csv"});

    if (sp.beta > 0.0) {
        report["landscape"] = landscape_json(classify_landscape(sp, cfg.root_tol));
    }
    report["tau_solutions"] = json::array();
    try {
        for (const auto& sol : solve_tau0(sp, {cfg.root_tol, false}))
            report["tau_solutions"].push_back(tau_solution_json(sol));
    } catch (const Error& e) {
        report["tau_message"] = e.what();
    }
}

void run_ground_state(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    const Grid grid(cfg.params.N, cfg.effective_grid_n(), cfg.effective_grid_L());
    const GroundState gs = solve_w(cfg.params.s, cfg.params.p, grid, gs_options(cfg));
    report["ground_state"] = ground_state_json(gs);
    write_field_file(gs.w, gs.s, (out / "w.field").string());
    json files = json::array({"w.field"});
    if (grid.N == 1) {
        std::ofstream os(out / "w_profile.csv");
        write_field_csv(gs.w, os);
        files.push_back("w_profile.csv");
    }
    report["files"] = files;
}

void run_nondegen(const RunConfig& cfg, const std::filesystem::path& out, json& report, bool emit_files) {
    const SystemParams& sp = cfg.params;
    const NormalizedParams np = normalize(sp);
    const auto sols = solve_tau0(sp, {cfg.root_tol, false});
    const auto sols_norm = solve_tau0(np.as_system(), {cfg.root_tol, false});
    const std::size_t idx = static_cast<std::size_t>(cfg.tau_index);
    if (idx >= sols_norm.size())
        raise(ErrorKind::invalid_argument, "tau_index exceeds the number of roots in D");
    report["tau_solutions"] = json::array();
    for (const auto& sol : sols) report["tau_solutions"].push_back(tau_solution_json(sol));

    const Grid grid(sp.N, cfg.effective_grid_n(), cfg.effective_grid_L());
    const GroundState gs = solve_w(sp.s, sp.p, grid, gs_options(cfg));
    report["ground_state"] = ground_state_json(gs);

    const NondegeneracyReport rep = kernel_dimension(gs, sols_norm[idx], np, kernel_options(cfg));
    report["nondegeneracy"] = nondegeneracy_json(rep);
    if (emit_files) {
        write_field_file(gs.w, gs.s, (out / "w.field").string());
        report["files"] = json::array({"w.field"});
    }
}

void run_analyze(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    const SystemParams& sp = cfg.params;
    const NormalizedParams np = normalize(sp);
    report["conditions"] = conditions_json(classify_conditions(sp));
    report["region_D"] = interval_json(region_D(sp));

    const auto sols = solve_tau0(sp, {cfg.root_tol, false});
    report["tau_solutions"] = json::array();
    for (const auto& sol : sols) report["tau_solutions"].push_back(tau_solution_json(sol));
    const std::size_t idx = static_cast<std::size_t>(cfg.tau_index);
    if (idx >= sols.size()) raise(ErrorKind::invalid_argument, "tau_index exceeds the number of roots in D");

    std::optional<Landscape> landscape;
    if (sp.beta > 0.0) {
        landscape = classify_landscape(sp, cfg.root_tol);
        report["landscape"] = landscape_json(*landscape);
    }

    const Grid grid(sp.N, cfg.effective_grid_n(), cfg.effective_grid_L());
    const GroundState gs = solve_w(sp.s, sp.p, grid, gs_options(cfg));
    report["ground_state"] = ground_state_json(gs);
    write_field_file(gs.w, gs.s, (out / "w.field").string());
    json files = json::array({"w.field"});
    if (grid.N == 1) {
        std::ofstream os(out / "w_profile.csv");
        write_field_csv(gs.w, os);
        files.push_back("w_profile.csv");
    }
    report["files"] = files;

    // proportional pair (k1 w, tau0 k1 w) pushed through both equations
    CoupledState pair;
    pair.u = gs.w;
    pair.v = gs.w;
    for (double& x : pair.u.values) x *= sols[idx].k1;
    for (double& x : pair.v.values) x *= sols[idx].k1 * sols[idx].tau0;
    const auto [ru, rv] = vector_residual(sp, pair);
    report["vector_residual"] = json{{"r_u", ru}, {"r_v", rv}, {"scalar_residual", gs.residual_norm}};

    if (landscape && landscape->tau_min) {
        const auto pred = tau_min_and_Smu(sp, gs.S_value);
        report["least_energy"] = json{{"tau_min", pred.tau_min},
                                      {"k_min", pred.k_min},
                                      {"S_mu1mu2", pred.S_mu1mu2}};
    }

    // roots of g and g~ coincide; pick the normalized solution nearest the
    // selected raw root rather than trusting index alignment
    const auto sols_norm = solve_tau0(np.as_system(), {cfg.root_tol, false});
    std::size_t norm_idx = 0;
    for (std::size_t i = 1; i < sols_norm.size(); ++i)
        if (std::abs(sols_norm[i].tau0 - sols[idx].tau0) <
            std::abs(sols_norm[norm_idx].tau0 - sols[idx].tau0))
            norm_idx = i;
    const NondegeneracyReport rep = kernel_dimension(gs, sols_norm[norm_idx], np, kernel_options(cfg));
    report["nondegeneracy"] = nondegeneracy_json(rep);
}

void run_rayleigh(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    const SystemParams& sp = cfg.params;
    const Grid grid(sp.N, cfg.effective_grid_n(), cfg.effective_grid_L());
    const GroundState gs = solve_w(sp.s, sp.p, grid, gs_options(cfg));
    report["ground_state"] = ground_state_json(gs);

    MinimizeOptions mo;
    mo.restarts = cfg.restarts;
    mo.seed = cfg.seed;
    mo.window_tol = cfg.descent_tol;
    MinimizeTrace trace;
    const CoupledState st = minimize_quotient(sp, grid, mo, &trace, &gs);

    json j;
    j["quotient"] = st.quotient_value;
    j["energy"] = st.energy_value;
    j["restart_finals"] = trace.finals;
    try {
        const auto pred = tau_min_and_Smu(sp, gs.S_value);
        j["predicted_S_mu1mu2"] = pred.S_mu1mu2;
        j["ratio_to_prediction"] = st.quotient_value / pred.S_mu1mu2;
    } catch (const Error& e) {
        j["predicted_S_mu1mu2"] = nullptr;
        j["prediction_message"] = e.what();
    }
    const auto [ru, rv] = vector_residual(sp, st);
    j["vector_residual"] = json{{"r_u", ru}, {"r_v", rv}};
    report["rayleigh"] = j;

    std::string csv = "restart,step,quotient\n";
    std::map<int, int> step;
    for (const auto& [r, q] : trace.log) csv += std::to_string(r) + "," + std::to_string(step[r]++) + "," + csv_num(q) + "\n";
    write_text(out / "rayleigh_log.csv", csv);
    write_field_file(st.u, sp.s, (out / "u.field").string());
    write_field_file(st.v, sp.s, (out / "v.field").string());
    report["files"] = json::array({"rayleigh_log.csv", "u.field", "v.field"});
}

struct SweepRow {
    double value = 0.0;
    double tau0 = std::numeric_limits<double>::quiet_NaN();
    double k1 = std::numeric_limits<double>::quiet_NaN();
    double f_tilde = std::numeric_limits<double>::quiet_NaN();
    std::string verdict = "inconclusive";
    double S_mu = std::numeric_limits<double>::quiet_NaN();
};

void run_sweep(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
    const SweepSpec& sw = *cfg.sweep;
    std::vector<double> values(static_cast<std::size_t>(sw.count));
    for (int i = 0; i < sw.count; ++i) {
        const double t = static_cast<double>(i) / (sw.count - 1);
        values[static_cast<std::size_t>(i)] =
            sw.log_scale ? sw.lo * std::pow(sw.hi / sw.lo, t) : sw.lo + t * (sw.hi - sw.lo);
    }

    auto with_value = [&](double v) {
        SystemParams sp = cfg.params;
        if (sw.variable == "beta") sp.beta = v;
        else if (sw.variable == "mu1") sp.mu1 = v;
        else if (sw.variable == "mu2") sp.mu2 = v;
        else if (sw.variable == "p") sp.p = v;
        else sp.s = v;
        sp.validate();
        return sp;
    };

    // ground state and weighted spectrum are shared across points with the
    // same (s, p, N); the sweep verdict is the spectral-distance one
    struct SharedSpectral {
        GroundState gs;
        WeightedSpectrum spec;
    };
    std::map<std::pair<double, double>, std::shared_ptr<SharedSpectral>> cache;
    std::mutex cache_mutex;
    auto shared_for = [&](const SystemParams& sp) {
        const auto key = std::make_pair(sp.s, sp.p);
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const Grid grid(sp.N, cfg.effective_grid_n(), cfg.effective_grid_L());
        auto sh = std::make_shared<SharedSpectral>();
        sh->gs = solve_w(sp.s, sp.p, grid, gs_options(cfg));
        SpectrumOptions so;
        so.weight_floor = cfg.weight_floor;
        so.tol = cfg.eig_tol;
        so.seed = cfg.seed;
        sh->spec = weighted_spectrum(sh->gs, cfg.spectrum_count, so);
        cache[key] = sh;
        return sh;
    };

    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            SweepRow& row = rows[i];
            row.value = values[i];
            try {
                const SystemParams sp = with_value(values[i]);
                const NormalizedParams np = normalize(sp);
                const auto sols = solve_tau0(sp, {cfg.root_tol, false});
                const auto sols_norm = solve_tau0(np.as_system(), {cfg.root_tol, false});
                row.tau0 = sols.front().tau0;
                row.k1 = sols.front().k1;
                const LinearizationCoeffs lc = linearization_coeffs(np, sols_norm.front());
                row.f_tilde = lc.f_tilde;

                const auto sh = shared_for(sp);
                double dist = std::numeric_limits<double>::infinity();
                for (double lam : sh->spec.eigenvalues) dist = std::min(dist, std::abs(lc.f_tilde - lam));
                row.verdict = dist >= 10.0 * cfg.grid_tol ? "nondegenerate" : "degenerate";

                if (sp.beta > 0.0) {
                    try {
                        row.S_mu = tau_min_and_Smu(sp, sh->gs.S_value).S_mu1mu2;
                    } catch (const Error&) {
                        // semi-trivial minimizer: S_mu stays NaN
                    }
                }
            } catch (const Error& e) {
                row.verdict = std::string("error:") + error_kind_name(e.kind());
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nthreads =
        std::min<std::size_t>(cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads) : hw, values.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::string csv = "param,tau0,k1,f_tilde,verdict,S_mu1mu2\n";
    for (const auto& r : rows)
        csv += csv_num(r.value) + "," + csv_num(r.tau0) + "," + csv_num(r.k1) + "," + csv_num(r.f_tilde) +
               "," + r.verdict + "," + csv_num(r.S_mu) + "\n";
    write_text(out / "sweep.csv", csv);
    report["files"] = json::array({"sweep.csv"});
    report["sweep"] = json{{"variable", sw.variable}, {"points", sw.count}};
}

}  // namespace

RunOutcome run(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::path out(out_dir.empty() ? "." : out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) raise(ErrorKind::io, "cannot create output directory: " + out.string());

    json report;
    report["schema"] = "fracsys-report-v1";
    report["mode"] = run_mode_name(cfg.mode);
    report["params"] = params_json(cfg.params);
    report["seed"] = cfg.seed;

    RunOutcome outcome;
    try {
        switch (cfg.mode) {
            case RunMode::analyze: run_analyze(cfg, out, report); break;
            case RunMode::ground_state: run_ground_state(cfg, out, report); break;
            case RunMode::landscape: run_landscape(cfg, out, report); break;
            case RunMode::nondegen: run_nondegen(cfg, out, report, true); break;
            case RunMode::rayleigh: run_rayleigh(cfg, out, report); break;
            case RunMode::sweep: run_sweep(cfg, out, report); break;
        }
        report["status"] = "ok";
        outcome.exit_code = 0;
        outcome.status = "ok";
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        report["status"] = code == 2 ? "constraint-violation" : "non-convergence";
        report["error_kind"] = error_kind_name(e.kind());
        report["message"] = e.what();
        outcome.exit_code = code;
        outcome.status = report["status"].get<std::string>();
    }

    report["exit_code"] = outcome.exit_code;
    outcome.report_json = report.dump(2) + "\n";
    write_text(out / "report.json", outcome.report_json);
    return outcome;
}

}  // namespace fracsys
