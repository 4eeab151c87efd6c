#pragma once

#include <stdexcept>
#include <string>

namespace ivhs {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// exact_core
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg) : Error("PrecisionExhausted: " + msg) {}
};

// curve_model
struct NotHomogeneous : Error {
    explicit NotHomogeneous(const std::string& msg) : Error("NotHomogeneous: " + msg) {}
};
struct DegreeTooSmall : Error {
    explicit DegreeTooSmall(const std::string& msg) : Error("DegreeTooSmall: " + msg) {}
};
struct SingularCurve : Error {
    std::string witness;
    explicit SingularCurve(const std::string& w) : Error("SingularCurve: witness " + w), witness(w) {}
};
struct NotEnoughPoints : Error {
    long found;
    explicit NotEnoughPoints(long n) : Error("NotEnoughPoints: found " + std::to_string(n)), found(n) {}
};
struct ChartFailure : Error {
    explicit ChartFailure(const std::string& msg) : Error("ChartFailure: " + msg) {}
};

// cohomology
struct NotInKernel : Error {
    explicit NotInKernel(const std::string& msg) : Error("NotInKernel: " + msg) {}
};
struct GenericityFailure : Error {
    explicit GenericityFailure(const std::string& msg) : Error("GenericityFailure: " + msg) {}
};
struct AuxPointIsPole : Error {
    explicit AuxPointIsPole(const std::string& msg) : Error("AuxPointIsPole: " + msg) {}
};

// filtration_engine
struct NeedsTailRepresentative : Error {
    explicit NeedsTailRepresentative(const std::string& msg) : Error("NeedsTailRepresentative: " + msg) {}
};
struct DivisionObstruction : Error {
    explicit DivisionObstruction(const std::string& msg) : Error("DivisionObstruction: " + msg) {}
};
struct PhiNotInW : Error {
    explicit PhiNotInW(const std::string& msg) : Error("PhiNotInW: " + msg) {}
};

// quadric_factory
struct CertificateFailure : Error {
    explicit CertificateFailure(const std::string& msg) : Error("CertificateFailure: " + msg) {}
};
struct IndexOutsideW : Error {
    explicit IndexOutsideW(const std::string& msg) : Error("IndexOutsideW: " + msg) {}
};
struct StringTooShort : Error {
    explicit StringTooShort(const std::string& msg) : Error("StringTooShort: " + msg) {}
};
struct BasePointNotFound : Error {
    explicit BasePointNotFound(const std::string& msg) : Error("BasePointNotFound: " + msg) {}
};

// lab_cli
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("ParseError: " + msg) {}
};
struct CurveRejected : Error {
    explicit CurveRejected(const std::string& msg) : Error("CurveRejected: " + msg) {}
};
struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& msg) : Error("InvariantViolation: " + msg) {}
};

inline void check_invariant(bool ok, const std::string& name) {
    if (!ok) throw InvariantViolation(name);
}

}  // namespace ivhs
