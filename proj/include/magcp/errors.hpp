#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace magcp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonPositiveInput : public Error { using Error::Error; };
class SublevelOutOfRange : public Error { using Error::Error; };
// Warning class: callers may opt out through RawParticle::allow_hierarchy_violation.
class HierarchyViolation : public Error { using Error::Error; };
class UnknownKind : public Error { using Error::Error; };

class NegativeFrequency : public Error { using Error::Error; };
class DomainViolation : public Error { using Error::Error; };

class InvalidQuadratureConfig : public Error { using Error::Error; };

class NonFiniteIntegrand : public Error {
public:
    explicit NonFiniteIntegrand(double where)
        : Error("integrand not finite at x = " + std::to_string(where)), location(where) {}
    double location;
};

enum class QuadratureLevel { none, inner, outer };

class QuadratureFailure : public Error {
public:
    QuadratureFailure(const std::string& what, std::complex<double> value, double error_estimate,
                      long evaluations, QuadratureLevel level)
        : Error(what), value(value), error_estimate(error_estimate), evaluations(evaluations),
          level(level) {}
    std::complex<double> value;
    double error_estimate;
    long evaluations;
    QuadratureLevel level;
};

class CrossoverRegion : public Error { using Error::Error; };
class UnsupportedModel : public Error { using Error::Error; };
class ExpansionOutOfValidity : public Error { using Error::Error; };
class RegimeViolation : public Error { using Error::Error; };

class BracketError : public Error { using Error::Error; };
class NoEquilibrium : public Error { using Error::Error; };

}  // namespace magcp
