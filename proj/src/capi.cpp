#define FRACSYS_BUILD 1

#include "fracsys.h"

#include <fstream>
#include <iterator>
#include <map>
#include <string>

#include "fracsys/report.hpp"
#include "fracsys/tau.hpp"

namespace {

thread_local std::string g_last_error;

fracsys_status status_for(fracsys::ErrorKind kind) {
    using EK = fracsys::ErrorKind;
    switch (kind) {
        case EK::parse: return FRACSYS_ERROR_PARSE;
        case EK::io: return FRACSYS_ERROR_IO;
        case EK::invalid_argument: return FRACSYS_ERROR_INVALID_ARGUMENT;
        case EK::no_convergence:
        case EK::collapse_to_zero:
        case EK::unclassified:
        case EK::weight_floor_too_small: return FRACSYS_ERROR_NO_CONVERGENCE;
        case EK::internal: return FRACSYS_ERROR_INTERNAL;
        default: return FRACSYS_ERROR_CONSTRAINT;
    }
}

template <typename Fn>
fracsys_status guarded(Fn&& fn) {
    try {
        fn();
        return FRACSYS_OK;
    } catch (const fracsys::Error& e) {
        g_last_error = e.what();
        return status_for(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FRACSYS_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return FRACSYS_ERROR_INTERNAL;
    }
}

}  // namespace

struct fracsys_config {
    std::map<std::string, std::string> kv;
};

struct fracsys_result {
    fracsys::RunOutcome outcome;
};

extern "C" {

const char* fracsys_version(void) { return "1.0.0"; }

const char* fracsys_status_name(fracsys_status status) {
    switch (status) {
        case FRACSYS_OK: return "ok";
        case FRACSYS_ERROR_PARSE: return "parse-error";
        case FRACSYS_ERROR_CONSTRAINT: return "constraint-violation";
        case FRACSYS_ERROR_NO_CONVERGENCE: return "non-convergence";
        case FRACSYS_ERROR_INVALID_ARGUMENT: return "invalid-argument";
        case FRACSYS_ERROR_IO: return "io-error";
        case FRACSYS_ERROR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

int fracsys_exit_code(fracsys_status status) {
    switch (status) {
        case FRACSYS_OK: return 0;
        case FRACSYS_ERROR_PARSE:
        case FRACSYS_ERROR_IO:
        case FRACSYS_ERROR_INVALID_ARGUMENT: return 1;
        case FRACSYS_ERROR_CONSTRAINT: return 2;
        case FRACSYS_ERROR_NO_CONVERGENCE: return 3;
        case FRACSYS_ERROR_INTERNAL: return 3;
    }
    return 3;
}

const char* fracsys_last_error(void) { return g_last_error.c_str(); }

fracsys_status fracsys_config_parse(const char* text, fracsys_config** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return FRACSYS_ERROR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        auto kv = fracsys::parse_config_text(text);
        fracsys::build_config(kv);  // validate eagerly so diagnostics surface here
        *out = new fracsys_config{std::move(kv)};
    });
}

fracsys_status fracsys_config_load(const char* path, fracsys_config** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return FRACSYS_ERROR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        std::ifstream is(path);
        if (!is) fracsys::raise(fracsys::ErrorKind::io, std::string("cannot open config file: ") + path);
        std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
        auto kv = fracsys::parse_config_text(text);
        fracsys::build_config(kv);
        *out = new fracsys_config{std::move(kv)};
    });
}

fracsys_status fracsys_config_set(fracsys_config* cfg, const char* dotted_key, const char* value) {
    if (!cfg || !dotted_key || !value) {
        g_last_error = "null argument";
        return FRACSYS_ERROR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        auto kv = cfg->kv;
        kv[dotted_key] = value;
        fracsys::build_config(kv);  // reject bad overrides atomically
        cfg->kv = std::move(kv);
    });
}

void fracsys_config_free(fracsys_config* cfg) { delete cfg; }

fracsys_status fracsys_run(const fracsys_config* cfg, const char* out_dir, fracsys_result** out) {
    if (!cfg || !out) {
        g_last_error = "null argument";
        return FRACSYS_ERROR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        const fracsys::RunConfig rc = fracsys::build_config(cfg->kv);
        fracsys::RunOutcome outcome = fracsys::run(rc, out_dir ? out_dir : ".");
        auto* res = new fracsys_result{std::move(outcome)};
        *out = res;
        if (res->outcome.exit_code == 2)
            fracsys::raise(fracsys::ErrorKind::constraint, "run ended in a constraint violation");
        if (res->outcome.exit_code == 3)
            fracsys::raise(fracsys::ErrorKind::no_convergence, "run ended in numeric non-convergence");
    });
}

const char* fracsys_result_report_json(const fracsys_result* result) {
    return result ? result->outcome.report_json.c_str() : "";
}

int fracsys_result_exit_code(const fracsys_result* result) {
    return result ? result->outcome.exit_code : 1;
}

void fracsys_result_free(fracsys_result* result) { delete result; }

fracsys_status fracsys_eval_g(double mu1, double mu2, double beta, double p, double tau, double* out) {
    if (!out) {
        g_last_error = "null argument";
        return FRACSYS_ERROR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const fracsys::SystemParams sp(0.5, p, 1, mu1, mu2, beta);
        *out = fracsys::eval_g(sp, tau);
    });
}

fracsys_status fracsys_eval_f(double mu1, double mu2, double beta, double p, double tau, double* out) {
    if (!out) {
        g_last_error = "null argument";
        return FRACSYS_ERROR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const fracsys::SystemParams sp(0.5, p, 1, mu1, mu2, beta);
        *out = fracsys::eval_f(sp, tau);
    });
}

fracsys_status fracsys_solve_tau0(double s, double p, int N, double mu1, double mu2, double beta,
                                  double* tau0, double* k1) {
    if (!tau0 || !k1) {
        g_last_error = "null argument";
        return FRACSYS_ERROR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const fracsys::SystemParams sp(s, p, N, mu1, mu2, beta);
        const auto sols = fracsys::solve_tau0(sp);
        *tau0 = sols.front().tau0;
        *k1 = sols.front().k1;
    });
}

}  // extern "C"
