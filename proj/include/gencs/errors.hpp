#ifndef GENCS_ERRORS_HPP
#define GENCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gencs {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind { Numeric, Domain };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_{kind} {}
  ErrorKind kind() const noexcept { return kind_; }
  /// Stable type name, e.g. "NotNormalizable".
  virtual const char* name() const noexcept { return "Error"; }

 private:
  ErrorKind kind_;
};

#define GENCS_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
    const char* name() const noexcept override { return #Name; }         \
  };

// Series and quadrature failures.
GENCS_DEFINE_ERROR(NonConvergent, Numeric)
GENCS_DEFINE_ERROR(DenominatorPole, Numeric)
GENCS_DEFINE_ERROR(Overflow, Numeric)
GENCS_DEFINE_ERROR(TruncationInsufficient, Numeric)
GENCS_DEFINE_ERROR(NotNormalizable, Numeric)
GENCS_DEFINE_ERROR(QuadratureNonConvergent, Numeric)
GENCS_DEFINE_ERROR(SpillTooLarge, Numeric)

// Inputs outside the domain where an object is defined.
GENCS_DEFINE_ERROR(DomainViolation, Domain)
GENCS_DEFINE_ERROR(ModelMismatch, Domain)
GENCS_DEFINE_ERROR(LambdaDegenerate, Domain)
GENCS_DEFINE_ERROR(OutsideAnalyticDomain, Domain)

#undef GENCS_DEFINE_ERROR

}  // namespace gencs

#endif  // GENCS_ERRORS_HPP
