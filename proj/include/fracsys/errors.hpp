#pragma once

#include <stdexcept>
#include <string>

namespace fracsys {

// Broad failure classes. The CLI maps these onto process exit codes
// (constraint -> 2, no_convergence -> 3, parse -> 1).
enum class ErrorKind {
    invalid_argument,
    domain,
    constraint,
    no_root,
    positivity_violation,
    out_of_range,
    unclassified,
    semitrivial_minimizer,
    zero_coupling,
    weight_floor_too_small,
    no_convergence,
    collapse_to_zero,
    parse,
    io,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::domain: return "domain";
        case ErrorKind::constraint: return "constraint";
        case ErrorKind::no_root: return "no_root";
        case ErrorKind::positivity_violation: return "positivity_violation";
        case ErrorKind::out_of_range: return "out_of_range";
        case ErrorKind::unclassified: return "unclassified";
        case ErrorKind::semitrivial_minimizer: return "semitrivial_minimizer";
        case ErrorKind::zero_coupling: return "zero_coupling";
        case ErrorKind::weight_floor_too_small: return "weight_floor_too_small";
        case ErrorKind::no_convergence: return "no_convergence";
        case ErrorKind::collapse_to_zero: return "collapse_to_zero";
        case ErrorKind::parse: return "parse";
        case ErrorKind::io: return "io";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

}  // namespace fracsys
