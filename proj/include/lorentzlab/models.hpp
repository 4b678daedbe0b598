#pragma once

#include "lorentzlab/lorentz.hpp"
#include "lorentzlab/sparse_vec.hpp"

namespace lorentzlab {

/// Point on the upper hyperboloid sheet: Q(x) = 1, x0 > 0.
class HPoint {
 public:
  explicit HPoint(SparseVec coords);
  static HPoint origin() { return HPoint(SparseVec::unit(0)); }
  const SparseVec& coords() const { return coords_; }

 private:
  SparseVec coords_;
};

/// Isotropic ray, normalized so that coordinate 0 equals 1 exactly.
class IdealPoint {
 public:
  /// Accepts any positive representative of the ray and renormalizes.
  explicit IdealPoint(const SparseVec& rep);
  const SparseVec& coords() const { return coords_; }

 private:
  SparseVec coords_;
};

/// Point of the Klein ball, supported on indices >= 1. `closed` admits the
/// unit sphere.
class BallPoint {
 public:
  BallPoint() : closed_(false) {}
  BallPoint(SparseVec coords, bool closed);
  const SparseVec& coords() const { return coords_; }
  bool closed() const { return closed_; }
  double norm() const { return coords_.norm(); }

 private:
  SparseVec coords_;
  bool closed_;
};

/// Unit-speed geodesic t |-> cosh(t) base + sinh(t) direction.
class Geodesic {
 public:
  Geodesic(HPoint base, SparseVec direction);
  const HPoint& base() const { return base_; }
  const SparseVec& direction() const { return direction_; }

 private:
  HPoint base_;
  SparseVec direction_;
};

/// Hyperbolic distance, cosh d = (x, y). Uses 2 asinh(sqrt((f-1)/2)) to keep
/// accuracy near f = 1.
double dist(const HPoint& x, const HPoint& y);

/// Klein ball -> hyperboloid, x |-> (e0 + x)/sqrt(1 - |x|^2). Open ball only.
HPoint from_klein(const BallPoint& x);
BallPoint to_klein(const HPoint& x);
BallPoint to_klein_ideal(const IdealPoint& xi);

Geodesic geodesic_through(const HPoint& x, const HPoint& y);
/// Unit-speed ray from `base` with ideal endpoint `xi` at t -> +oo.
Geodesic geodesic_toward(const HPoint& base, const IdealPoint& xi);
HPoint geodesic_eval(const Geodesic& g, double t);
HPoint midpoint(const HPoint& x, const HPoint& y);
/// sign > 0 gives the endpoint of t -> +oo, sign < 0 the other one.
IdealPoint ideal_endpoint(const Geodesic& g, int sign);

/// Riemannian angle at p between the segments/rays toward a and b,
/// cos = -(u, v) on the normalized initial vectors.
double angle(const HPoint& p, const HPoint& a, const HPoint& b);
double angle(const HPoint& p, const IdealPoint& a, const IdealPoint& b);
double angle(const HPoint& p, const HPoint& a, const IdealPoint& b);
double angle(const HPoint& p, const IdealPoint& a, const HPoint& b);

/// Busemann function of xi vanishing at `base`, evaluated at x. Computed in
/// Klein coordinates from the r = 1 horofunction sheet.
double busemann(const IdealPoint& xi, const HPoint& x, const HPoint& base);

/// x |-> x / sqrt(1 + |x|^2), a bijection between the Hilbert space
/// (realized on indices >= 1) and the open unit ball; and its inverse.
BallPoint sigma_hilbert(const SparseVec& x);
SparseVec sigma_hilbert_inverse(const BallPoint& y);

}  // namespace lorentzlab
