#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lorentzlab/dense.hpp"
#include "lorentzlab/horoboundary.hpp"
#include "lorentzlab/models.hpp"

namespace lorentzlab {

/// Isometry of the separable Hilbert space (realized on indices >= 1):
/// x |-> A x + b with A an orthogonal block on a finite active set (identity
/// off it) and b a finitely supported translation.
class EucIsometry {
 public:
  EucIsometry();  // identity
  EucIsometry(IndexSet active, Eigen::MatrixXd rot, SparseVec translation);
  static EucIsometry translation(const SparseVec& b);
  static EucIsometry rotation(IndexSet active, Eigen::MatrixXd rot);

  const IndexSet& active() const { return active_; }
  const Eigen::MatrixXd& rot() const { return rot_; }
  const SparseVec& translation_part() const { return translation_; }

  SparseVec apply(const SparseVec& x) const;
  /// Applies only the orthogonal part.
  SparseVec apply_rotation(const SparseVec& x) const;
  double orthogonality_defect() const;

 private:
  IndexSet active_;
  Eigen::MatrixXd rot_;
  SparseVec translation_;
};

EucIsometry e_compose(const EucIsometry& g, const EucIsometry& h);
EucIsometry e_inverse(const EucIsometry& g);

/// b = b0 + b1 with b0 in im(I - A) and b1 in ker(I - A); |b1| is the
/// translation length of g.
struct ParallelSplit {
  SparseVec b0;
  SparseVec b1;
};
ParallelSplit split_parallel(const EucIsometry& g);
double e_translation_length(const EucIsometry& g);

/// Horofunction of the Hilbert space in frustum coordinates: the square-root
/// formula for r < 1, collapsing to -<y, z> at r = 1. Vanishes at z = 0.
double hilbert_horofunction(const BallPoint& y, double r, const SparseVec& z);

/// Action of Isom(Hilbert) on the frustum: the orthogonal part keeps r, the
/// translation part moves (x, r) through the lambda formula and fixes the
/// r = 1 sheet pointwise.
FrustumPoint hilbert_frustum_action(const EucIsometry& g, const FrustumPoint& f);

/// Orthogonal A' agreeing with the orthogonal part of `a` on every point and
/// equal to the identity outside span(points, A points).
EucIsometry finite_rank_match(const EucIsometry& a,
                              const std::vector<SparseVec>& points);

/// Block-diagonal orthogonal map rotating the n-th block (dimension
/// block_dims[n], even) by angles[n]; blocks consume indices from
/// start_index upward.
EucIsometry build_dense_U(const std::vector<double>& angles,
                          const std::vector<std::size_t>& block_dims,
                          std::size_t start_index = 1);

/// Rotation of large radius approximating the translation by b1 on the given
/// points: center R u on a fresh axis u, angle arcsin(|b1|/R), R the
/// smallest power of two satisfying the radius conditions. Displacements
/// differ from the translation by less than sqrt(5) eps per point.
EucIsometry translation_by_rotation(const SparseVec& b1,
                                    const std::vector<SparseVec>& points,
                                    double eps);

struct ApproxReport {
  double achieved = 0.0;
  double bound = 0.0;
  std::vector<double> per_point;
};

/// Conjugates U (built by build_dense_U with an eps/k-dense angle set) so
/// that the result h = S U S^{-1} matches g on the points to within
/// sqrt(5) eps: eigenvalue snapping for the elliptic part, a grid-angle
/// rotation of large radius for the parallel translation part.
std::pair<EucIsometry, ApproxReport> approximate_by_conjugate(
    const EucIsometry& U, const EucIsometry& g,
    const std::vector<SparseVec>& points, double eps);

}  // namespace lorentzlab
