#pragma once

#include <stdexcept>
#include <string>

namespace lorentzlab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define LORENTZLAB_ERROR_TYPE(Name)                              \
  struct Name : Error {                                          \
    explicit Name(const std::string& what = #Name) : Error(what) {} \
  }

// Construction / validation
LORENTZLAB_ERROR_TYPE(InvariantViolation);
LORENTZLAB_ERROR_TYPE(DegenerateSpan);
LORENTZLAB_ERROR_TYPE(OnBoundary);
LORENTZLAB_ERROR_TYPE(CoincidentPoints);

// Isometry constructions
LORENTZLAB_ERROR_TYPE(UnequalRadii);
LORENTZLAB_ERROR_TYPE(CollinearDegenerate);
LORENTZLAB_ERROR_TYPE(Unattainable);
LORENTZLAB_ERROR_TYPE(CollinearCenter);
LORENTZLAB_ERROR_TYPE(IdentityInput);
LORENTZLAB_ERROR_TYPE(EmptyProbeSet);

// Horoboundary
LORENTZLAB_ERROR_TYPE(NotInStabilizer);
LORENTZLAB_ERROR_TYPE(InvalidFrustumPair);
LORENTZLAB_ERROR_TYPE(EmptyFunctionals);

// Euclidean constructions
LORENTZLAB_ERROR_TYPE(LengthMismatch);
LORENTZLAB_ERROR_TYPE(InsufficientAngleDensity);
LORENTZLAB_ERROR_TYPE(ZeroTranslation);
LORENTZLAB_ERROR_TYPE(ApproximationBoundViolated);

// Experiments / CLI
LORENTZLAB_ERROR_TYPE(NonPositiveLength);
LORENTZLAB_ERROR_TYPE(ConfigError);

#undef LORENTZLAB_ERROR_TYPE

}  // namespace lorentzlab
