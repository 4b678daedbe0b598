#pragma once

#include <vector>

#include "lorentzlab/isometry.hpp"
#include "lorentzlab/models.hpp"

namespace lorentzlab {

/// Point of the frustum F = {(x, r) in closed-ball x [0,1] : |x| <= r}: a
/// horofunction of H in the coordinates of the horocompactification.
class FrustumPoint {
 public:
  FrustumPoint(BallPoint x, double r);
  const BallPoint& x() const { return x_; }
  double r() const { return r_; }

 private:
  BallPoint x_;
  double r_;
};

/// The closed-form horofunction xi_{x,r}(y) in Klein coordinates, normalized
/// to vanish at y = 0. `y` must be in the open ball.
double horofunction_eval(const FrustumPoint& f, const BallPoint& y);

/// H -> F, p |-> (to_klein(p), |to_klein(p)|); the r = |x| sheet.
FrustumPoint embed_point(const HPoint& p);

/// phi_{y,z}(x) = d(x,y) - d(x,z).
double horo_compare(const HPoint& x, const HPoint& y, const HPoint& z);

/// The equivariant action of Isom(H) on the frustum: ball component moves by
/// the projective (Klein) action, r by rho = sqrt(1 - (1-r^2)/mu^2) with
/// mu = (g(e0 + x), e0).
FrustumPoint frustum_action(const HypIsometry& g, const FrustumPoint& f);

/// Busemann homomorphism beta_xi(g) = beta_xi(g x0, x0) on the stabilizer of
/// xi. Throws NotInStabilizer when g moves xi.
double busemann_hom(const HypIsometry& g, const IdealPoint& xi,
                    const HPoint& x0);

/// c(g, eta) = beta_eta(x0, g^{-1} x0); satisfies
/// c(gh, eta) = c(g, h eta) + c(h, eta) and |c(g, eta)| <= d(x0, g x0).
double cocycle(const HypIsometry& g, const IdealPoint& eta, const HPoint& x0);

/// Extension of the cocycle to the full closed ball through the r = 1
/// horofunction sheet: cbar(g, F) = xi_{x,1}(g x0) - xi_{x,1}(x0).
double cocycle_ext(const HypIsometry& g, const FrustumPoint& f,
                   const HPoint& x0);

/// Finite-functional weak-convergence probe for frustum sequences.
struct ConvergenceReport {
  std::vector<double> defects;  // per element of the sequence
  double tail_defect = 0.0;     // max over the last tail_k elements
  bool pass = false;
};
ConvergenceReport weak_convergence_probe(
    const std::vector<FrustumPoint>& sequence, const FrustumPoint& candidate,
    const std::vector<BallPoint>& functionals, std::size_t tail_k,
    double tolerance);

}  // namespace lorentzlab
