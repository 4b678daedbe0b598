#include "lorentzlab/horoboundary.hpp"

#include <algorithm>
#include <cmath>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/tolerances.hpp"

namespace lorentzlab {

FrustumPoint::FrustumPoint(BallPoint x, double r) : x_(std::move(x)), r_(r) {
  if (r_ < 0.0 || r_ > 1.0 + tol_for(1.0))
    throw InvalidFrustumPair("FrustumPoint: r outside [0, 1]");
  if (r_ > 1.0) r_ = 1.0;
  if (x_.norm() > r_ + tol_for(1.0))
    throw InvalidFrustumPair("FrustumPoint: |x| > r");
}

double horofunction_eval(const FrustumPoint& f, const BallPoint& y) {
  if (y.coords().empty()) return 0.0;  // formula identity at the basepoint
  double n2 = y.coords().norm_sq();
  if (n2 >= 1.0 - tol_for(1.0)) throw OnBoundary("horofunction_eval: |y| >= 1");
  double ip = f.x().coords().dot(y.coords());
  double r = f.r();
  double disc = (1.0 - ip) * (1.0 - ip) - (1.0 - n2) * (1.0 - r * r);
  if (disc < 0.0) disc = 0.0;
  return std::log((1.0 - ip + std::sqrt(disc)) /
                  ((1.0 + r) * std::sqrt(1.0 - n2)));
}

FrustumPoint embed_point(const HPoint& p) {
  BallPoint x = to_klein(p);
  double n = x.norm();
  return FrustumPoint(BallPoint(x.coords(), true), n);
}

double horo_compare(const HPoint& x, const HPoint& y, const HPoint& z) {
  if (dist(y, z) < 1e-15) throw CoincidentPoints("horo_compare: y == z");
  return dist(x, y) - dist(x, z);
}

FrustumPoint frustum_action(const HypIsometry& g, const FrustumPoint& f) {
  SparseVec lift = SparseVec::unit(0) + f.x().coords();
  SparseVec image = g.apply(lift);
  double mu = image[0];  // = (g lift, e0) > 0
  SparseVec::Map ball;
  for (const auto& [i, v] : image.entries())
    if (i != 0) ball[i] = v / mu;
  double r = f.r();
  double rho_sq = 1.0 - (1.0 - r * r) / (mu * mu);
  if (rho_sq < 0.0) rho_sq = 0.0;
  if (rho_sq > 1.0) rho_sq = 1.0;
  return FrustumPoint(BallPoint(SparseVec(std::move(ball)), true),
                      std::sqrt(rho_sq));
}

double busemann_hom(const HypIsometry& g, const IdealPoint& xi,
                    const HPoint& x0) {
  IdealPoint moved = g.apply(xi);
  double defect = moved.coords().sup_dist(xi.coords());
  if (defect > 1e-8 * (1.0 + xi.coords().norm()))
    throw NotInStabilizer("busemann_hom: g does not fix xi");
  return busemann(xi, g.apply(x0), x0);
}

double cocycle(const HypIsometry& g, const IdealPoint& eta, const HPoint& x0) {
  return busemann(eta, x0, inverse(g).apply(x0));
}

double cocycle_ext(const HypIsometry& g, const FrustumPoint& f,
                   const HPoint& x0) {
  // xi_{x,1}(x0) - xi_{x,1}(g^{-1} x0): the r = 1 evaluation of
  // beta(x0, g^{-1} x0), which restricts to the cocycle on ideal points and
  // keeps its relation on the whole ball.
  FrustumPoint sheet(f.x(), 1.0);
  return horofunction_eval(sheet, to_klein(x0)) -
         horofunction_eval(sheet, to_klein(inverse(g).apply(x0)));
}

ConvergenceReport weak_convergence_probe(
    const std::vector<FrustumPoint>& sequence, const FrustumPoint& candidate,
    const std::vector<BallPoint>& functionals, std::size_t tail_k,
    double tolerance) {
  if (functionals.empty())
    throw EmptyFunctionals("weak_convergence_probe: no functionals");
  ConvergenceReport out;
  out.defects.reserve(sequence.size());
  for (const FrustumPoint& fp : sequence) {
    double d = std::abs(fp.r() - candidate.r());
    for (const BallPoint& phi : functionals) {
      double a = fp.x().coords().dot(phi.coords());
      double b = candidate.x().coords().dot(phi.coords());
      d = std::max(d, std::abs(a - b));
    }
    out.defects.push_back(d);
  }
  std::size_t n = out.defects.size();
  std::size_t k = std::min(tail_k, n);
  out.tail_defect = 0.0;
  for (std::size_t i = n - k; i < n; ++i)
    out.tail_defect = std::max(out.tail_defect, out.defects[i]);
  out.pass = k > 0 && out.tail_defect < tolerance;
  return out;
}

}  // namespace lorentzlab
