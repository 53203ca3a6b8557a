#pragma once

#include <stdexcept>
#include <string>

namespace gravlocc {

// Numerical tolerances used across the library. Every default is an
// implementation choice; callers may pass a modified copy.
struct Tolerances {
    double symp = 1e-10;           // ||S Omega S^T - Omega||_inf, det S
    double expm = 1e-12;           // target relative accuracy of expm
    double herm = 1e-10;           // ||H - H^dag||_inf
    double lambda_floor = 1e-15;   // lambda used in eigenvalue routines when lambda == 0
    double expm_norm_cap = 1e8;    // ||A||_inf above which expm refuses
    double unit_axis = 1e-12;      // | ||n_j|| - 1 |
    double freq_spread = 1e-3;     // max relative spread of per-oscillator frequencies
    int n_exhaustive = 20;         // exhaustive subset search up to this many modes
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

enum class ErrorKind {
    NonPositiveDefinite,
    NotSymplectic,
    NotHermitian,
    NotSymmetric,
    Overflow,
    IndexOutOfRange,
    CoincidentCenters,
    MissingCommonFrequency,
    EmptySubsetPolicy,
    DomainError,
    QuadratureFailure,
    TruncationInconclusive,
    MissingParameter,
    UnitMismatch,
    InvalidArgument,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
        case ErrorKind::NotSymplectic: return "NotSymplectic";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::CoincidentCenters: return "CoincidentCenters";
        case ErrorKind::MissingCommonFrequency: return "MissingCommonFrequency";
        case ErrorKind::EmptySubsetPolicy: return "EmptySubsetPolicy";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::TruncationInconclusive: return "TruncationInconclusive";
        case ErrorKind::MissingParameter: return "MissingParameter";
        case ErrorKind::UnitMismatch: return "UnitMismatch";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gravlocc
