#include "lorentzlab/sampling.hpp"

#include <cmath>

namespace lorentzlab {

SparseVec random_vec(Rng& rng, std::size_t lo, std::size_t hi, double scale) {
  SparseVec::Map m;
  for (std::size_t i = lo; i <= hi; ++i) m[i] = scale * rng.normal();
  return SparseVec(std::move(m));
}

SparseVec random_unit(Rng& rng, std::size_t lo, std::size_t hi) {
  SparseVec v = random_vec(rng, lo, hi);
  double n = v.norm();
  while (n < 1e-8) {
    v = random_vec(rng, lo, hi);
    n = v.norm();
  }
  return v * (1.0 / n);
}

HPoint random_hpoint(Rng& rng, std::size_t dims, double radius) {
  SparseVec dir = random_unit(rng, 1, dims);
  double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dims));
  return from_klein(BallPoint(dir * r, false));
}

IdealPoint random_ideal(Rng& rng, std::size_t dims) {
  SparseVec dir = random_unit(rng, 1, dims);
  return IdealPoint(SparseVec::unit(0) + dir);
}

Eigen::MatrixXd random_orthogonal(Rng& rng, std::size_t n) {
  Eigen::MatrixXd G(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  // fix signs so the map is deterministic in the input, not the pivoting
  Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Index ii = static_cast<Eigen::Index>(i);
    if (R(ii, ii) < 0.0) Q.col(ii) = -Q.col(ii);
  }
  return Q;
}

HypIsometry random_hyp_isometry(Rng& rng, std::size_t dims, double max_length) {
  IndexSet active(dims + 1);
  for (std::size_t i = 0; i <= dims; ++i) active[i] = i;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(
      static_cast<Eigen::Index>(dims + 1), static_cast<Eigen::Index>(dims + 1));
  M.bottomRightCorner(static_cast<Eigen::Index>(dims),
                      static_cast<Eigen::Index>(dims)) =
      random_orthogonal(rng, dims);
  HypIsometry k(active, M);
  double t = rng.uniform(0.0, max_length);
  if (t < 1e-12) return k;
  Geodesic axis(HPoint::origin(), random_unit(rng, 1, dims));
  return compose(transvection(axis, t), k);
}

EucIsometry random_euc_isometry(Rng& rng, std::size_t dims,
                                double translation_scale) {
  IndexSet active(dims);
  for (std::size_t i = 0; i < dims; ++i) active[i] = i + 1;
  Eigen::MatrixXd A = random_orthogonal(rng, dims);
  SparseVec b = random_vec(rng, 1, dims, translation_scale);
  return EucIsometry(active, std::move(A), std::move(b));
}

}  // namespace lorentzlab
