#include "lorentzlab/euclid.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/tolerances.hpp"

namespace lorentzlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_hilbert_support(const SparseVec& v, const char* who) {
  if (!v.empty() && v.entries().begin()->first == 0)
    throw InvariantViolation(std::string(who) +
                             ": Hilbert vectors live on indices >= 1");
}

double circular_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

EucIsometry::EucIsometry()
    : active_{1}, rot_(Eigen::MatrixXd::Identity(1, 1)) {}

EucIsometry::EucIsometry(IndexSet active, Eigen::MatrixXd rot,
                         SparseVec translation)
    : active_(std::move(active)),
      rot_(std::move(rot)),
      translation_(std::move(translation)) {
  if (active_.empty() || active_.front() == 0)
    throw InvariantViolation("EucIsometry: active set must avoid index 0");
  for (std::size_t i = 1; i < active_.size(); ++i)
    if (active_[i] <= active_[i - 1])
      throw InvariantViolation("EucIsometry: active set must be sorted unique");
  if (rot_.rows() != rot_.cols() ||
      rot_.rows() != static_cast<Eigen::Index>(active_.size()))
    throw InvariantViolation("EucIsometry: block shape mismatch");
  check_hilbert_support(translation_, "EucIsometry");
  if (orthogonality_defect() > 1e-6)
    throw InvariantViolation("EucIsometry: block is not orthogonal");
}

EucIsometry EucIsometry::translation(const SparseVec& b) {
  check_hilbert_support(b, "EucIsometry::translation");
  return EucIsometry({1}, Eigen::MatrixXd::Identity(1, 1), b);
}

EucIsometry EucIsometry::rotation(IndexSet active, Eigen::MatrixXd rot) {
  return EucIsometry(std::move(active), std::move(rot), SparseVec());
}

double EucIsometry::orthogonality_defect() const {
  Eigen::MatrixXd d = rot_.transpose() * rot_ -
                      Eigen::MatrixXd::Identity(rot_.rows(), rot_.cols());
  return d.cwiseAbs().maxCoeff();
}

SparseVec EucIsometry::apply(const SparseVec& x) const {
  return apply_rotation(x) + translation_;
}

SparseVec EucIsometry::apply_rotation(const SparseVec& x) const {
  check_hilbert_support(x, "EucIsometry::apply");
  DenseSplit s = split_on(x, active_);
  return to_sparse(rot_ * s.dense, active_) + s.rest;
}

EucIsometry e_compose(const EucIsometry& g, const EucIsometry& h) {
  IndexSet active = union_active(g.active(), h.active());
  Eigen::MatrixXd G = embed_block(g.rot(), g.active(), active);
  Eigen::MatrixXd H = embed_block(h.rot(), h.active(), active);
  SparseVec b = g.apply_rotation(h.translation_part()) + g.translation_part();
  return EucIsometry(active, G * H, std::move(b));
}

EucIsometry e_inverse(const EucIsometry& g) {
  Eigen::MatrixXd At = g.rot().transpose();
  DenseSplit s = split_on(g.translation_part(), g.active());
  SparseVec b = -(to_sparse(At * s.dense, g.active()) + s.rest);
  return EucIsometry(g.active(), At, std::move(b));
}

namespace {

// Projector onto im(I - A) within the active block, via SVD of I - A.
struct ImKerSplit {
  Eigen::MatrixXd p_im;  // projector onto im(I - A)
};

ImKerSplit im_ker_projectors(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n) - A;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullU);
  double smax = std::max(1.0, svd.singularValues().size() > 0
                                  ? svd.singularValues()[0]
                                  : 0.0);
  ImKerSplit out;
  out.p_im = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10 * smax)
      out.p_im += svd.matrixU().col(i) * svd.matrixU().col(i).transpose();
  return out;
}

}  // namespace

ParallelSplit split_parallel(const EucIsometry& g) {
  DenseSplit s = split_on(g.translation_part(), g.active());
  ImKerSplit pk = im_ker_projectors(g.rot());
  Eigen::VectorXd b0 = pk.p_im * s.dense;
  Eigen::VectorXd b1 = s.dense - b0;
  ParallelSplit out;
  out.b0 = to_sparse(b0, g.active());
  // translation components off the active set are fixed directions of A
  out.b1 = to_sparse(b1, g.active()) + s.rest;
  return out;
}

double e_translation_length(const EucIsometry& g) {
  return split_parallel(g).b1.norm();
}

double hilbert_horofunction(const BallPoint& y, double r, const SparseVec& z) {
  check_hilbert_support(z, "hilbert_horofunction");
  if (r < 0.0 || r > 1.0 + tol_for(1.0))
    throw InvalidFrustumPair("hilbert_horofunction: r outside [0, 1]");
  if (y.norm() > r + tol_for(1.0))
    throw InvalidFrustumPair("hilbert_horofunction: |y| > r");
  if (z.empty()) return 0.0;
  if (r >= 1.0 - 1e-12) return -y.coords().dot(z);
  double s = 1.0 / std::sqrt(1.0 - r * r);
  double big_r = r * s;
  double val = big_r * big_r - 2.0 * s * z.dot(y.coords()) + z.norm_sq();
  if (val < 0.0) val = 0.0;
  return std::sqrt(val) - big_r;
}

FrustumPoint hilbert_frustum_action(const EucIsometry& g, const FrustumPoint& f) {
  // orthogonal part: (x, r) |-> (A x, r)
  SparseVec x = g.apply_rotation(f.x().coords());
  double r = f.r();
  const SparseVec& v = g.translation_part();
  if (v.empty()) return FrustumPoint(BallPoint(x, true), r);
  if (r >= 1.0 - 1e-12)
    return FrustumPoint(BallPoint(x, true), 1.0);  // sheet fixed pointwise
  double s = 1.0 / std::sqrt(1.0 - r * r);
  SparseVec w = x * s;
  double lam_sq = r * r * s * s + v.norm_sq() + 2.0 * v.dot(w);
  if (lam_sq < 0.0) lam_sq = 0.0;
  double lam = std::sqrt(lam_sq);
  double scale = 1.0 / std::sqrt(1.0 + lam_sq);
  return FrustumPoint(BallPoint((w + v) * scale, true), lam * scale);
}

namespace {

// Euclidean Gram-Schmidt, skipping dependent vectors.
std::vector<Eigen::VectorXd> gram_schmidt(
    const std::vector<Eigen::VectorXd>& input,
    const std::vector<Eigen::VectorXd>& against) {
  std::vector<Eigen::VectorXd> basis = against;
  std::vector<Eigen::VectorXd> fresh;
  for (Eigen::VectorXd v : input) {
    double scale = v.norm() + 1.0;
    for (const Eigen::VectorXd& b : basis) v -= b.dot(v) * b;
    // repeat once for numerical orthogonality
    for (const Eigen::VectorXd& b : basis) v -= b.dot(v) * b;
    double n = v.norm();
    if (n <= 1e-10 * scale) continue;
    v /= n;
    basis.push_back(v);
    fresh.push_back(v);
  }
  return fresh;
}

// Orthogonal map sending dom[j] to img[j] (both orthonormal lists) extended
// by the identity on the orthogonal complement of their joint span.
Eigen::MatrixXd map_frames(const std::vector<Eigen::VectorXd>& dom,
                           const std::vector<Eigen::VectorXd>& img,
                           Eigen::Index n) {
  std::vector<Eigen::VectorXd> dom_ext = gram_schmidt(img, dom);
  std::vector<Eigen::VectorXd> img_ext = gram_schmidt(dom, img);
  if (dom_ext.size() != img_ext.size())
    throw Error("map_frames: completion dimensions differ");
  std::size_t k = dom.size() + dom_ext.size();
  Eigen::MatrixXd Bd(n, static_cast<Eigen::Index>(k));
  Eigen::MatrixXd Bi(n, static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < dom.size(); ++j) {
    Bd.col(static_cast<Eigen::Index>(j)) = dom[j];
    Bi.col(static_cast<Eigen::Index>(j)) = img[j];
  }
  for (std::size_t j = 0; j < dom_ext.size(); ++j) {
    Bd.col(static_cast<Eigen::Index>(dom.size() + j)) = dom_ext[j];
    Bi.col(static_cast<Eigen::Index>(dom.size() + j)) = img_ext[j];
  }
  return Eigen::MatrixXd::Identity(n, n) + (Bi - Bd) * Bd.transpose();
}

}  // namespace

EucIsometry finite_rank_match(const EucIsometry& a,
                              const std::vector<SparseVec>& points) {
  if (points.empty()) return EucIsometry();
  std::vector<SparseVec> all = points;
  for (const SparseVec& p : points) all.push_back(a.apply_rotation(p));
  IndexSet active = support_union(all, false);
  if (active.empty()) return EucIsometry();
  Eigen::MatrixXd Ablk =
      embed_block(a.rot(), a.active(), union_active(active, a.active()));
  IndexSet full = union_active(active, a.active());
  const Eigen::Index n = static_cast<Eigen::Index>(full.size());

  std::vector<Eigen::VectorXd> pts;
  for (const SparseVec& p : points) pts.push_back(to_dense(p, full));
  std::vector<Eigen::VectorXd> basis = gram_schmidt(pts, {});
  std::vector<Eigen::VectorXd> images;
  for (const Eigen::VectorXd& e : basis) images.push_back(Ablk * e);

  Eigen::MatrixXd M = map_frames(basis, images, n);
  return EucIsometry::rotation(full, std::move(M));
}

EucIsometry build_dense_U(const std::vector<double>& angles,
                          const std::vector<std::size_t>& block_dims,
                          std::size_t start_index) {
  if (angles.size() != block_dims.size())
    throw LengthMismatch("build_dense_U: angles vs block_dims");
  if (start_index == 0)
    throw InvariantViolation("build_dense_U: indices start at 1");
  std::size_t total = 0;
  for (std::size_t d : block_dims) {
    if (d == 0 || d % 2 != 0)
      throw LengthMismatch("build_dense_U: block dimensions must be even");
    total += d;
  }
  IndexSet active(total);
  for (std::size_t i = 0; i < total; ++i) active[i] = start_index + i;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(total),
                                                static_cast<Eigen::Index>(total));
  Eigen::Index pos = 0;
  for (std::size_t b = 0; b < angles.size(); ++b) {
    double c = std::cos(angles[b]), s = std::sin(angles[b]);
    for (std::size_t p = 0; p < block_dims[b] / 2; ++p) {
      M(pos, pos) = c;
      M(pos, pos + 1) = -s;
      M(pos + 1, pos) = s;
      M(pos + 1, pos + 1) = c;
      pos += 2;
    }
  }
  return EucIsometry::rotation(std::move(active), std::move(M));
}

EucIsometry translation_by_rotation(const SparseVec& b1,
                                    const std::vector<SparseVec>& points,
                                    double eps) {
  double nb = b1.norm();
  if (nb < 1e-12) throw ZeroTranslation("translation_by_rotation: b1 = 0");
  SparseVec bhat = b1 * (1.0 / nb);
  double r_proj = 0.0;
  std::size_t top = b1.max_index();
  for (const SparseVec& p : points) {
    r_proj = std::max(r_proj, std::abs(p.dot(bhat)));
    top = std::max(top, p.max_index());
  }
  SparseVec u = SparseVec::unit(top + 1);

  double R = 1.0;
  while (R < nb) R *= 2.0;
  auto admissible = [&](double radius) {
    double quoted =
        radius * (1.0 - 1.0 / std::sqrt(1.0 + r_proj * r_proj / (radius * radius)));
    double sin_a = nb / radius;
    double one_minus_cos = 1.0 - std::sqrt(std::max(0.0, 1.0 - sin_a * sin_a));
    return quoted < eps && r_proj * sin_a <= eps &&
           radius * one_minus_cos <= eps;
  };
  while (!admissible(R)) R *= 2.0;

  double alpha = std::asin(nb / R);
  IndexSet active = support_union({bhat, u}, false);
  Eigen::VectorXd ud = to_dense(u, active);
  Eigen::VectorXd bd = to_dense(bhat, active);
  const Eigen::Index n = static_cast<Eigen::Index>(active.size());
  // rotation by -alpha in the oriented plane (u, bhat)
  double c = std::cos(alpha), s = std::sin(alpha);
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  M += (c - 1.0) * (ud * ud.transpose() + bd * bd.transpose());
  M -= s * (bd * ud.transpose() - ud * bd.transpose());
  // affine part: rho(x) = c + M (x - c) with center R u
  Eigen::VectorXd t = R * (ud - M * ud);
  return EucIsometry(active, std::move(M), to_sparse(t, active));
}

namespace {

// --- structure recovery and conjugation for approximate_by_conjugate ---

struct Slot {
  double angle;
  std::size_t i1, i2;  // global indices of the rotated pair
  bool used = false;
};

std::vector<Slot> recover_slots(const EucIsometry& U) {
  if (U.translation_part().norm() > 1e-12)
    throw InvariantViolation("approximate_by_conjugate: U must be a rotation");
  const Eigen::MatrixXd& M = U.rot();
  const Eigen::Index n = M.rows();
  std::vector<Slot> slots;
  Eigen::Index p = 0;
  while (p < n) {
    if (std::abs(M(p, p) - 1.0) <= 1e-12 &&
        (p + 1 >= n || std::abs(M(p + 1, p)) <= 1e-12)) {
      ++p;  // fixed direction (an exact zero angle is unusable as a slot)
      continue;
    }
    if (p + 1 >= n)
      throw InvariantViolation("approximate_by_conjugate: U not block-diagonal");
    double c = M(p, p), s = M(p + 1, p);
    if (std::abs(M(p + 1, p + 1) - c) > 1e-9 || std::abs(M(p, p + 1) + s) > 1e-9)
      throw InvariantViolation("approximate_by_conjugate: U not built from plane rotations");
    Slot sl;
    sl.angle = std::atan2(s, c);
    if (sl.angle < 0.0) sl.angle += 2.0 * kPi;
    sl.i1 = U.active()[static_cast<std::size_t>(p)];
    sl.i2 = U.active()[static_cast<std::size_t>(p + 1)];
    slots.push_back(sl);
    p += 2;
  }
  return slots;
}

void check_density(const std::vector<Slot>& slots, double delta) {
  if (slots.empty())
    throw InsufficientAngleDensity("approximate_by_conjugate: U has no rotation blocks");
  std::vector<double> a;
  for (const Slot& s : slots) a.push_back(s.angle);
  std::sort(a.begin(), a.end());
  double max_gap = a.front() + 2.0 * kPi - a.back();
  for (std::size_t i = 1; i < a.size(); ++i)
    max_gap = std::max(max_gap, a[i] - a[i - 1]);
  if (max_gap > 2.0 * delta + 1e-12)
    throw InsufficientAngleDensity(
        "approximate_by_conjugate: angle set is not eps/k-dense");
}

// Planes and eigenvectors of an orthogonal block via the real Schur form.
struct EllipticStructure {
  struct Plane {
    double angle;
    Eigen::VectorXd q1, q2;
  };
  std::vector<Plane> planes;
  std::vector<Eigen::VectorXd> flipped;  // eigenvalue -1
  Eigen::MatrixXd p_essential;           // projector onto planes + flipped
};

EllipticStructure schur_structure(const Eigen::MatrixXd& A) {
  EllipticStructure out;
  const Eigen::Index n = A.rows();
  out.p_essential = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return out;
  Eigen::RealSchur<Eigen::MatrixXd> schur(A);
  const Eigen::MatrixXd& T = schur.matrixT();
  const Eigen::MatrixXd& Q = schur.matrixU();
  Eigen::Index i = 0;
  while (i < n) {
    bool pair = (i + 1 < n) && std::abs(T(i + 1, i)) > 1e-9;
    if (pair) {
      EllipticStructure::Plane pl;
      pl.angle = std::atan2(T(i + 1, i), T(i, i));
      if (pl.angle < 0.0) pl.angle += 2.0 * kPi;
      pl.q1 = Q.col(i);
      pl.q2 = Q.col(i + 1);
      out.p_essential += pl.q1 * pl.q1.transpose() + pl.q2 * pl.q2.transpose();
      out.planes.push_back(std::move(pl));
      i += 2;
    } else {
      if (T(i, i) < 0.0) {
        out.flipped.push_back(Q.col(i));
        out.p_essential += Q.col(i) * Q.col(i).transpose();
      }
      ++i;
    }
  }
  return out;
}

struct ConjugacyBuilder {
  std::vector<Slot>* slots;
  double snap_tol;
  std::size_t fresh_next;
  std::vector<Eigen::VectorXd> dom, img;  // over the working index set
  IndexSet work;

  std::size_t take_slot(double target) {
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < slots->size(); ++i) {
      if ((*slots)[i].used) continue;
      double d = circular_dist((*slots)[i].angle, target);
      if (best < 0.0 || d < best) {
        best = d;
        best_i = i;
      }
    }
    if (best < 0.0 || best > snap_tol + 1e-12)
      throw InsufficientAngleDensity(
          "approximate_by_conjugate: no free slot within eps/k of a target angle");
    (*slots)[best_i].used = true;
    return best_i;
  }

  Eigen::VectorXd unit_at(std::size_t index) const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(work.size()));
    e[static_cast<Eigen::Index>(index_position(work, index))] = 1.0;
    return e;
  }

  std::size_t fresh_index() { return fresh_next++; }
};

}  // namespace

std::pair<EucIsometry, ApproxReport> approximate_by_conjugate(
    const EucIsometry& U, const EucIsometry& g,
    const std::vector<SparseVec>& points, double eps) {
  if (eps <= 0.0)
    throw InvariantViolation("approximate_by_conjugate: eps must be positive");
  std::size_t k = std::max<std::size_t>(1, points.size());
  double delta = eps / static_cast<double>(k);

  std::vector<Slot> slots = recover_slots(U);
  check_density(slots, delta);

  ApproxReport report;
  report.bound = std::sqrt(5.0) * eps;

  auto finish = [&](const EucIsometry& h) {
    report.per_point.clear();
    report.achieved = 0.0;
    for (const SparseVec& x : points) {
      double err = (g.apply(x) - h.apply(x)).norm();
      report.per_point.push_back(err);
      report.achieved = std::max(report.achieved, err);
    }
    if (report.achieved >= report.bound)
      throw ApproximationBoundViolated(
          "approximate_by_conjugate: sqrt(5) eps bound violated");
    return std::make_pair(h, report);
  };

  if (points.empty()) return finish(U);
  if (g.active() == U.active() && g.translation_part() == U.translation_part() &&
      (g.rot() - U.rot()).cwiseAbs().maxCoeff() == 0.0)
    return finish(U);

  ParallelSplit split = split_parallel(g);
  double ell = split.b1.norm();

  // Working index set: everything in sight plus room for fresh axes.
  std::vector<SparseVec> seen = points;
  seen.push_back(g.translation_part());
  seen.insert(seen.end(), {split.b0, split.b1});
  IndexSet base = support_union(seen, false);
  base = union_active(base, g.active());
  base = union_active(base, U.active());
  std::size_t fresh0 = (base.empty() ? 0 : base.back()) + 1;

  // Fixed point / centering translation from the b0 part: (I - A) x = b0.
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(g.rot().rows(), g.rot().cols()) -
                      g.rot();
  Eigen::VectorXd b0d = to_dense(split.b0, g.active());
  Eigen::VectorXd xc =
      K.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).setThreshold(1e-10).solve(b0d);
  SparseVec center = to_sparse(xc, g.active());

  std::vector<SparseVec> pts_c;
  for (const SparseVec& x : points) pts_c.push_back(x - center);

  const bool translational = ell > 1e-10;

  // Elliptic data: W-projections of the centered points.
  ImKerSplit pk = im_ker_projectors(g.rot());
  std::vector<SparseVec> pts_w;
  std::vector<SparseVec> pts_ker;
  for (const SparseVec& x : pts_c) {
    DenseSplit s = split_on(x, g.active());
    Eigen::VectorXd w = pk.p_im * s.dense;
    SparseVec wpart = to_sparse(w, g.active());
    pts_w.push_back(wpart);
    pts_ker.push_back(to_sparse(s.dense - w, g.active()) + s.rest);
  }
  if (!translational) pts_w = pts_c;  // whole point is elliptic data

  EucIsometry matched =
      finite_rank_match(EucIsometry::rotation(g.active(), g.rot()), pts_w);

  ConjugacyBuilder cb;
  cb.slots = &slots;
  cb.snap_tol = delta;
  cb.fresh_next = fresh0;
  // reserve room: every plane/fixed/flip may consume one fresh axis
  std::size_t reserve = 4 * matched.active().size() + 8;
  cb.work = base;
  for (std::size_t i = 0; i < reserve; ++i) cb.work.push_back(fresh0 + i);
  cb.work = sorted_unique(std::move(cb.work));

  EllipticStructure es = schur_structure(matched.rot());

  auto lift = [&](const Eigen::VectorXd& v_local) {
    return to_dense(to_sparse(v_local, matched.active()), cb.work);
  };

  // rotation planes: snap each angle to a free slot
  for (const auto& pl : es.planes) {
    std::size_t si = cb.take_slot(pl.angle);
    cb.dom.push_back(cb.unit_at(slots[si].i1));
    cb.dom.push_back(cb.unit_at(slots[si].i2));
    cb.img.push_back(lift(pl.q1));
    cb.img.push_back(lift(pl.q2));
  }
  // -1 eigenvectors: half of a plane rotated by an angle near pi
  for (const auto& f : es.flipped) {
    std::size_t si = cb.take_slot(kPi);
    cb.dom.push_back(cb.unit_at(slots[si].i1));
    cb.dom.push_back(cb.unit_at(slots[si].i2));
    cb.img.push_back(lift(f));
    cb.img.push_back(cb.unit_at(cb.fresh_index()));
  }
  // fixed components of the points: mapped from fresh axes, which U fixes
  {
    std::vector<Eigen::VectorXd> fixed_parts;
    for (const SparseVec& w : pts_w) {
      Eigen::VectorXd d = to_dense(w, matched.active());
      fixed_parts.push_back(lift(d - es.p_essential * d));
    }
    for (const Eigen::VectorXd& fv : gram_schmidt(fixed_parts, cb.img)) {
      cb.dom.push_back(cb.unit_at(cb.fresh_index()));
      cb.img.push_back(fv);
    }
  }

  SparseVec shift = center;
  if (translational) {
    // Parallel part: rotation by a grid angle around a far center on a fresh
    // axis; the radius |b1| / sin(theta) makes the translation length exact.
    SparseVec bhat = split.b1 * (1.0 / ell);
    double r_proj = 0.0;
    for (const SparseVec& x : pts_c)
      r_proj = std::max(r_proj, std::abs(x.dot(bhat)));
    double theta = -1.0;
    for (const Slot& s : slots) {
      if (s.used || s.angle <= 1e-12 || s.angle >= kPi / 2.0) continue;
      bool ok = ell * std::tan(s.angle / 2.0) <= 0.9 * eps &&
                r_proj * std::sin(s.angle) <= 0.9 * eps;
      if (ok && s.angle > theta) theta = s.angle;
    }
    if (theta < 0.0)
      throw InsufficientAngleDensity(
          "approximate_by_conjugate: no admissible small angle for the translation part");
    std::size_t si = 0;
    for (; si < slots.size(); ++si)
      if (!slots[si].used && slots[si].angle == theta) break;
    slots[si].used = true;

    SparseVec u = SparseVec::unit(cb.fresh_index());
    double radius = ell / std::sin(theta);
    // T(slot1) = bhat, T(slot2) = u gives the rotation by -theta in the
    // oriented plane (u, bhat) after conjugating by the center.
    cb.dom.push_back(cb.unit_at(slots[si].i1));
    cb.dom.push_back(cb.unit_at(slots[si].i2));
    cb.img.push_back(to_dense(bhat, cb.work));
    cb.img.push_back(to_dense(u, cb.work));

    // kernel residuals of the points (orthogonal to bhat): h must fix them
    std::vector<Eigen::VectorXd> resid;
    for (const SparseVec& kerp : pts_ker) {
      SparseVec r = kerp - bhat * kerp.dot(bhat);
      resid.push_back(to_dense(r, cb.work));
    }
    for (const Eigen::VectorXd& rv : gram_schmidt(resid, cb.img)) {
      cb.dom.push_back(cb.unit_at(cb.fresh_index()));
      cb.img.push_back(rv);
    }
    shift = center + u * radius;
  }

  Eigen::MatrixXd Tm = map_frames(cb.dom, cb.img,
                                  static_cast<Eigen::Index>(cb.work.size()));
  EucIsometry S(cb.work, std::move(Tm), shift);
  EucIsometry h = e_compose(e_compose(S, U), e_inverse(S));
  return finish(h);
}

}  // namespace lorentzlab
