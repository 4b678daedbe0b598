#include "lorentzlab/models.hpp"

#include <cmath>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/tolerances.hpp"

namespace lorentzlab {

HPoint::HPoint(SparseVec coords) : coords_(std::move(coords)) {
  double q = q_form(coords_);
  if (std::abs(q - 1.0) > tol_for(coords_.norm_sq()) * 10.0)
    throw InvariantViolation("HPoint: Q(x) != 1");
  if (coords_[0] <= 0.0) throw InvariantViolation("HPoint: x0 <= 0");
}

IdealPoint::IdealPoint(const SparseVec& rep) {
  double x0 = rep[0];
  if (x0 <= 0.0) throw InvariantViolation("IdealPoint: representative has x0 <= 0");
  if (std::abs(q_form(rep)) > tol_for(rep.norm_sq()) * 10.0)
    throw InvariantViolation("IdealPoint: representative is not isotropic");
  SparseVec::Map out;
  for (const auto& [i, v] : rep.entries()) out[i] = v / x0;
  out[0] = 1.0;  // exact
  coords_ = SparseVec(std::move(out));
}

BallPoint::BallPoint(SparseVec coords, bool closed)
    : coords_(std::move(coords)), closed_(closed) {
  if (!coords_.empty() && coords_.entries().begin()->first == 0)
    throw InvariantViolation("BallPoint: support must avoid index 0");
  double n = coords_.norm();
  double bound = closed_ ? 1.0 + tol_for(1.0) : 1.0;
  if (n >= bound + tol_for(1.0))
    throw InvariantViolation("BallPoint: norm exceeds 1");
}

Geodesic::Geodesic(HPoint base, SparseVec direction)
    : base_(std::move(base)), direction_(std::move(direction)) {
  if (std::abs(q_form(direction_) + 1.0) > 1e-7)
    throw InvariantViolation("Geodesic: direction must have Q = -1");
  if (std::abs(lorentz_form(base_.coords(), direction_)) > 1e-7)
    throw InvariantViolation("Geodesic: direction not orthogonal to base");
}

double dist(const HPoint& x, const HPoint& y) {
  double f = lorentz_form(x.coords(), y.coords());
  // d = 2 asinh(sqrt((f - 1)/2)). For nearby points f - 1 is evaluated
  // through the polarization identity 2(f - 1) = -Q(x - y), which keeps full
  // precision where the form itself loses everything below sqrt(ulp).
  double half;
  if (f < 1.6) {
    double q = -q_form(x.coords() - y.coords());
    half = q < 0.0 ? 0.0 : 0.25 * q;
  } else {
    half = 0.5 * (f - 1.0);
  }
  return 2.0 * std::asinh(std::sqrt(half));
}

HPoint from_klein(const BallPoint& x) {
  double n2 = x.coords().norm_sq();
  if (n2 >= 1.0 - tol_for(1.0)) throw OnBoundary("from_klein: |x| >= 1");
  double s = 1.0 / std::sqrt(1.0 - n2);
  return HPoint((SparseVec::unit(0) + x.coords()) * s);
}

BallPoint to_klein(const HPoint& x) {
  double x0 = x.coords()[0];
  SparseVec::Map out;
  for (const auto& [i, v] : x.coords().entries())
    if (i != 0) out[i] = v / x0;
  return BallPoint(SparseVec(std::move(out)), false);
}

BallPoint to_klein_ideal(const IdealPoint& xi) {
  SparseVec::Map out;
  for (const auto& [i, v] : xi.coords().entries())
    if (i != 0) out[i] = v;
  return BallPoint(SparseVec(std::move(out)), true);
}

Geodesic geodesic_through(const HPoint& x, const HPoint& y) {
  double f = lorentz_form(x.coords(), y.coords());
  if (f - 1.0 < 1e-15 && dist(x, y) < tol_for(1.0))
    throw CoincidentPoints("geodesic_through: x == y");
  SparseVec u = (y.coords() - x.coords() * f) * (1.0 / std::sqrt(f * f - 1.0));
  return Geodesic(x, u);
}

Geodesic geodesic_toward(const HPoint& base, const IdealPoint& xi) {
  double f = lorentz_form(base.coords(), xi.coords());
  // f = (x, xi~) > 0 for every positive representative
  SparseVec u = (xi.coords() - base.coords() * f) * (1.0 / f);
  return Geodesic(base, u);
}

HPoint geodesic_eval(const Geodesic& g, double t) {
  return HPoint(g.base().coords() * std::cosh(t) + g.direction() * std::sinh(t));
}

HPoint midpoint(const HPoint& x, const HPoint& y) {
  SparseVec s = x.coords() + y.coords();
  return HPoint(s * (1.0 / std::sqrt(q_form(s))));
}

IdealPoint ideal_endpoint(const Geodesic& g, int sign) {
  SparseVec rep = (sign >= 0) ? g.base().coords() + g.direction()
                              : g.base().coords() - g.direction();
  return IdealPoint(rep);
}

namespace {

// Normalized initial vector at p of the segment toward the representative z.
SparseVec initial_vector(const SparseVec& p, const SparseVec& z) {
  SparseVec w = z - p * lorentz_form(p, z);
  double q = -q_form(w);
  if (q <= 0.0) throw CoincidentPoints("angle: argument coincides with vertex");
  return w * (1.0 / std::sqrt(q));
}

double angle_core(const HPoint& p, const SparseVec& za, const SparseVec& zb) {
  SparseVec u = initial_vector(p.coords(), za);
  SparseVec v = initial_vector(p.coords(), zb);
  double c = -lorentz_form(u, v);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

}  // namespace

double angle(const HPoint& p, const HPoint& a, const HPoint& b) {
  return angle_core(p, a.coords(), b.coords());
}
double angle(const HPoint& p, const IdealPoint& a, const IdealPoint& b) {
  return angle_core(p, a.coords(), b.coords());
}
double angle(const HPoint& p, const HPoint& a, const IdealPoint& b) {
  return angle_core(p, a.coords(), b.coords());
}
double angle(const HPoint& p, const IdealPoint& a, const HPoint& b) {
  return angle_core(p, a.coords(), b.coords());
}

namespace {

// r = 1 sheet of the horofunction formula in Klein coordinates:
// log((1 - <xhat, y>) / sqrt(1 - |y|^2)).
double horo_r1(const BallPoint& xhat, const BallPoint& y) {
  double ip = xhat.coords().dot(y.coords());
  double n2 = y.coords().norm_sq();
  return std::log((1.0 - ip) / std::sqrt(1.0 - n2));
}

}  // namespace

double busemann(const IdealPoint& xi, const HPoint& x, const HPoint& base) {
  BallPoint xhat = to_klein_ideal(xi);
  return horo_r1(xhat, to_klein(x)) - horo_r1(xhat, to_klein(base));
}

BallPoint sigma_hilbert(const SparseVec& x) {
  if (!x.empty() && x.entries().begin()->first == 0)
    throw InvariantViolation("sigma_hilbert: vectors live on indices >= 1");
  return BallPoint(x * (1.0 / std::sqrt(1.0 + x.norm_sq())), false);
}

SparseVec sigma_hilbert_inverse(const BallPoint& y) {
  double n2 = y.coords().norm_sq();
  if (n2 >= 1.0 - tol_for(1.0))
    throw OnBoundary("sigma_hilbert_inverse: |y| >= 1");
  return y.coords() * (1.0 / std::sqrt(1.0 - n2));
}

}  // namespace lorentzlab
