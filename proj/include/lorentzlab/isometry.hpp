#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lorentzlab/dense.hpp"
#include "lorentzlab/models.hpp"

namespace lorentzlab {

/// Element of Isom(H) = PO(1, oo) as a finite-rank perturbation: a Lorentz
/// orthogonal block on a finite active index set containing 0, extended by
/// the identity. The block preserves the upper sheet, which fixes the
/// representative of the +-Id coset.
class HypIsometry {
 public:
  HypIsometry(IndexSet active, Eigen::MatrixXd block);
  static HypIsometry identity();

  const IndexSet& active() const { return active_; }
  const Eigen::MatrixXd& block() const { return block_; }
  bool is_identity(double tol = 1e-12) const;

  SparseVec apply(const SparseVec& x) const;
  HPoint apply(const HPoint& x) const;
  IdealPoint apply(const IdealPoint& xi) const;

  /// max abs entry of block^T J block - J.
  double orthogonality_defect() const;

 private:
  IndexSet active_;
  Eigen::MatrixXd block_;
};

HypIsometry compose(const HypIsometry& g, const HypIsometry& h);
HypIsometry inverse(const HypIsometry& g);
/// Projects the block back onto the J-orthogonal manifold (Gram-Schmidt of
/// the columns in the Lorentz form).
HypIsometry renormalize(const HypIsometry& g);

/// Rotation fixing p (and the Lorentz-orthogonal complement of the plane
/// through p, a, b) that maps a to b. Requires dist(p,a) = dist(p,b).
HypIsometry rotation_mapping(const HPoint& p, const HPoint& a, const HPoint& b);

/// Translation by t along the geodesic: gamma(s) |-> gamma(s + t).
HypIsometry transvection(const Geodesic& gamma, double t);

/// Involution fixing the span of the frame pointwise and negating its
/// Lorentz-orthogonal complement within the active set. The active set
/// defaults to the frame support (pass a larger one to negate more
/// directions; with the default and a frame spanning it, the result is the
/// identity).
HypIsometry symmetry(const LorentzFrame& frame, IndexSet active = {});

/// Witt-style finite-rank matching: h supported on span{e0, points, g points}
/// with h(x_i) = g(x_i).
HypIsometry match_pointwise(const HypIsometry& g,
                            const std::vector<HPoint>& points);

/// max_i dist(g x_i, h x_i).
double pointwise_dist(const HypIsometry& g, const HypIsometry& h,
                      const std::vector<HPoint>& probes);

enum class IsometryClass { Elliptic, Parabolic, Hyperbolic };

IsometryClass classify(const HypIsometry& g);
/// l(g) = inf_x d(gx, x), evaluated spectrally as max(0, log rho(block)).
double translation_length(const HypIsometry& g);

/// g = p k with k fixing e0 and p the symmetric positive transvection taking
/// e0 to g e0.
std::pair<HypIsometry, HypIsometry> cartan_decompose(const HypIsometry& g);

/// Writes g as an ordered product (left to right) of at most 5 involutions,
/// each a symmetry with nonempty fixed set.
std::vector<HypIsometry> symmetry_decompose(const HypIsometry& g);

/// Rotation rho centered at z, acting in the plane through z, w, y, with
/// dist(rho w, y) = delta. Bisection on the angle; requires
/// |d(z,w) - d(z,y)| <= delta <= d(z,w) + d(z,y).
HypIsometry adjust_distance_rotation(const HPoint& z, const HPoint& w,
                                     const HPoint& y, double delta);

/// The two rotations of the Steinhaus factorization: rho1 adjusts
/// dist(rho1 g x, y) to dist(x, y); rho2 rotates rho1 g x back onto x. The
/// composite rho2 rho1 g fixes x.
std::pair<HypIsometry, HypIsometry> steinhaus_factor(const HypIsometry& g,
                                                     const HPoint& x,
                                                     const HPoint& y,
                                                     const HPoint& z);

}  // namespace lorentzlab
