#pragma once

namespace lorentzlab {

// Library-wide numeric tolerances. All invariant checks use these unless an
// operation documents a tighter bound.
struct Tolerances {
  double abs = 1e-9;    // absolute tolerance for invariant checks
  double rel = 1e-9;    // relative tolerance for invariant checks
  double drop = 1e-15;  // entries below this are removed from sparse vectors
  // An eigenvalue-1 block with no Q-positive fixed vector below this residual
  // is classified parabolic.
  double parabolic = 1e-8;
};

Tolerances& tolerances();

// abs/rel combined bound for a quantity of the given magnitude scale.
inline double tol_for(double scale) {
  const Tolerances& t = tolerances();
  double s = scale < 0 ? -scale : scale;
  return t.abs + t.rel * s;
}

}  // namespace lorentzlab
