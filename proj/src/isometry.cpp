#include "lorentzlab/isometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/tolerances.hpp"

namespace lorentzlab {

namespace {

// Spectral radii this close to 1 cannot be trusted: a defective unit
// eigenvalue (Jordan block of a parabolic) perturbs the computed spectrum by
// roughly eps^(1/3) ~ 1e-5. Inside this band classification goes through the
// fixed-space analysis instead.
constexpr double kAmbiguousSpectrum = 1e-4;

Eigen::MatrixXd j_orthonormalize_columns(Eigen::MatrixXd B,
                                         const Eigen::VectorXd& jd) {
  const Eigen::Index n = B.cols();
  auto form = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(jd.asDiagonal() * b);
  };
  // column 0 carries the Q = +1 slot (active[0] == 0), the rest are Q = -1
  Eigen::VectorXd c0 = B.col(0);
  double q0 = form(c0, c0);
  if (q0 <= 0.0) throw DegenerateSpan("renormalize: first column not Q-positive");
  B.col(0) = c0 / std::sqrt(q0);
  for (Eigen::Index i = 1; i < n; ++i) {
    Eigen::VectorXd c = B.col(i);
    c -= form(c, B.col(0)) * B.col(0);
    for (Eigen::Index j = 1; j < i; ++j) c += form(c, B.col(j)) * B.col(j);
    double q = -form(c, c);
    if (q <= 0.0) throw DegenerateSpan("renormalize: degenerate column");
    B.col(i) = c / std::sqrt(q);
  }
  return B;
}

// M = I + (cos-1)(n1 m1^T + n2 m2^T) + sin (n2 m1^T - n1 m2^T) with
// m_i = -J n_i: the rotation by `angle` in the oriented plane (n1, n2),
// identity on the J-orthogonal complement.
Eigen::MatrixXd plane_rotation_block(const Eigen::VectorXd& n1,
                                     const Eigen::VectorXd& n2,
                                     const Eigen::VectorXd& jd, double angle) {
  Eigen::VectorXd m1 = -(jd.asDiagonal() * n1);
  Eigen::VectorXd m2 = -(jd.asDiagonal() * n2);
  const Eigen::Index n = n1.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  double c = std::cos(angle), s = std::sin(angle);
  M += (c - 1.0) * (n1 * m1.transpose() + n2 * m2.transpose());
  M += s * (n2 * m1.transpose() - n1 * m2.transpose());
  return M;
}

struct TangentFrame {
  IndexSet active;
  Eigen::VectorXd jd;
  Eigen::VectorXd n1;  // unit tangent at the center toward the first point
  Eigen::VectorXd n2;  // completion, oriented toward the second point
  double cos_angle;    // angle at the center between the two points
  double sin_angle;    // >= 0 by construction of n2
};

// Tangent frame at `center` spanned by the directions toward a and b. When a,
// b, center are collinear the plane is completed with a fresh basis
// direction (sin_angle = 0).
TangentFrame tangent_frame(const HPoint& center, const HPoint& a,
                           const HPoint& b) {
  const SparseVec& p = center.coords();
  SparseVec wa = a.coords() - p * lorentz_form(p, a.coords());
  SparseVec wb = b.coords() - p * lorentz_form(p, b.coords());
  double qa = -q_form(wa), qb = -q_form(wb);
  if (qa <= 0.0 || qb <= 0.0)
    throw CoincidentPoints("tangent_frame: point coincides with center");
  SparseVec ua = wa * (1.0 / std::sqrt(qa));
  SparseVec ub = wb * (1.0 / std::sqrt(qb));

  double c = -lorentz_form(ua, ub);
  SparseVec res = ub + ua * lorentz_form(ub, ua);
  double qr = -q_form(res);

  TangentFrame out;
  IndexSet active = support_union({p, a.coords(), b.coords()}, true);
  bool degenerate = qr <= 1e-20;
  if (degenerate) {
    // collinear configuration: extend with a fresh axis
    active = union_active(active, {active.back() + 1});
  }
  out.active = active;
  out.jd = j_diag(active);
  out.n1 = to_dense(ua, active);
  if (degenerate) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(out.n1.size());
    e[out.n1.size() - 1] = 1.0;
    out.n2 = e;
    out.cos_angle = c > 0.0 ? 1.0 : -1.0;
    out.sin_angle = 0.0;
  } else {
    out.n2 = to_dense(res * (1.0 / std::sqrt(qr)), active);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    out.cos_angle = c;
    out.sin_angle = std::sqrt(std::max(0.0, 1.0 - c * c));
  }
  return out;
}

}  // namespace

HypIsometry::HypIsometry(IndexSet active, Eigen::MatrixXd block)
    : active_(std::move(active)), block_(std::move(block)) {
  if (active_.empty() || active_.front() != 0)
    throw InvariantViolation("HypIsometry: active set must contain 0");
  for (std::size_t i = 1; i < active_.size(); ++i)
    if (active_[i] <= active_[i - 1])
      throw InvariantViolation("HypIsometry: active set must be sorted unique");
  if (block_.rows() != block_.cols() ||
      block_.rows() != static_cast<Eigen::Index>(active_.size()))
    throw InvariantViolation("HypIsometry: block shape mismatch");
  // Lorentz norms grow like e^(translation length); the sanity check on the
  // form defect scales with the squared block magnitude.
  double mag = block_.cwiseAbs().maxCoeff();
  if (orthogonality_defect() > 1e-6 * std::max(1.0, mag * mag))
    throw InvariantViolation("HypIsometry: block does not preserve the form");
  if (block_(0, 0) <= 0.0)
    throw InvariantViolation("HypIsometry: block does not preserve the sheet");
}

HypIsometry HypIsometry::identity() {
  return HypIsometry({0}, Eigen::MatrixXd::Identity(1, 1));
}

bool HypIsometry::is_identity(double tol) const {
  Eigen::MatrixXd d = block_ - Eigen::MatrixXd::Identity(block_.rows(), block_.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

double HypIsometry::orthogonality_defect() const {
  Eigen::VectorXd jd = j_diag(active_);
  Eigen::MatrixXd d =
      block_.transpose() * jd.asDiagonal() * block_ - Eigen::MatrixXd(jd.asDiagonal());
  return d.cwiseAbs().maxCoeff();
}

SparseVec HypIsometry::apply(const SparseVec& x) const {
  DenseSplit s = split_on(x, active_);
  Eigen::VectorXd y = block_ * s.dense;
  return to_sparse(y, active_) + s.rest;
}

HPoint HypIsometry::apply(const HPoint& x) const { return HPoint(apply(x.coords())); }

IdealPoint HypIsometry::apply(const IdealPoint& xi) const {
  return IdealPoint(apply(xi.coords()));
}

HypIsometry compose(const HypIsometry& g, const HypIsometry& h) {
  IndexSet active = union_active(g.active(), h.active());
  Eigen::MatrixXd G = embed_block(g.block(), g.active(), active);
  Eigen::MatrixXd H = embed_block(h.block(), h.active(), active);
  return HypIsometry(active, G * H);
}

HypIsometry inverse(const HypIsometry& g) {
  Eigen::VectorXd jd = j_diag(g.active());
  Eigen::MatrixXd inv =
      jd.asDiagonal() * g.block().transpose() * jd.asDiagonal();
  return HypIsometry(g.active(), inv);
}

HypIsometry renormalize(const HypIsometry& g) {
  Eigen::VectorXd jd = j_diag(g.active());
  return HypIsometry(g.active(), j_orthonormalize_columns(g.block(), jd));
}

HypIsometry rotation_mapping(const HPoint& p, const HPoint& a, const HPoint& b) {
  double ra = dist(p, a), rb = dist(p, b);
  if (ra < 1e-12 || rb < 1e-12)
    throw CoincidentPoints("rotation_mapping: a or b coincides with p");
  if (std::abs(ra - rb) > 1e-7 * (1.0 + std::max(ra, rb)))
    throw UnequalRadii("rotation_mapping: dist(p,a) != dist(p,b)");

  TangentFrame f = tangent_frame(p, a, b);
  if (f.sin_angle == 0.0 && f.cos_angle > 0.0)
    return HypIsometry::identity();  // a == b up to tolerance
  double theta = std::atan2(f.sin_angle, f.cos_angle);
  return HypIsometry(f.active, plane_rotation_block(f.n1, f.n2, f.jd, theta));
}

HypIsometry transvection(const Geodesic& gamma, double t) {
  if (t == 0.0) return HypIsometry::identity();
  IndexSet active =
      support_union({gamma.base().coords(), gamma.direction()}, true);
  Eigen::VectorXd jd = j_diag(active);
  Eigen::VectorXd p = to_dense(gamma.base().coords(), active);
  Eigen::VectorXd u = to_dense(gamma.direction(), active);
  Eigen::VectorXd mp = jd.asDiagonal() * p;
  Eigen::VectorXd mu = -(jd.asDiagonal() * u);
  const Eigen::Index n = p.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  M += (std::cosh(t) - 1.0) * (p * mp.transpose() + u * mu.transpose());
  M += std::sinh(t) * (u * mp.transpose() + p * mu.transpose());
  return HypIsometry(active, M);
}

HypIsometry symmetry(const LorentzFrame& frame, IndexSet active) {
  std::vector<SparseVec> vs = frame.negatives;
  vs.push_back(frame.positive);
  active = union_active(sorted_unique(std::move(active)), support_union(vs, true));
  Eigen::VectorXd jd = j_diag(active);
  const Eigen::Index n = static_cast<Eigen::Index>(active.size());
  Eigen::VectorXd p = to_dense(frame.positive, active);
  // projection onto span(frame): x |-> (x,p) p - sum (x,n_i) n_i
  Eigen::MatrixXd proj = p * (jd.asDiagonal() * p).transpose();
  for (const SparseVec& nv : frame.negatives) {
    Eigen::VectorXd nd = to_dense(nv, active);
    proj -= nd * (jd.asDiagonal() * nd).transpose();
  }
  return HypIsometry(active, 2.0 * proj - Eigen::MatrixXd::Identity(n, n));
}

HypIsometry match_pointwise(const HypIsometry& g,
                            const std::vector<HPoint>& points) {
  if (points.empty()) return HypIsometry::identity();

  std::vector<SparseVec> in_rest, out_rest;
  for (std::size_t i = 1; i < points.size(); ++i)
    in_rest.push_back(points[i].coords());
  FrameBuild fin = frame_from_span(in_rest, points[0].coords());

  std::vector<SparseVec> images;
  images.reserve(points.size());
  for (const HPoint& x : points) images.push_back(g.apply(x).coords());
  std::vector<SparseVec> out_sel;
  for (std::size_t k : fin.accepted) out_sel.push_back(images[k + 1]);
  // Gram matrices of the two families coincide, so the same elimination
  // succeeds on the image side and produces matching coefficients.
  FrameBuild fout = frame_from_span(out_sel, images[0]);
  if (fout.accepted.size() != fin.accepted.size())
    throw DegenerateSpan("match_pointwise: image span degenerated");

  // complete both frames to the span of (inputs + images)
  std::vector<SparseVec> out_vectors;
  out_vectors.push_back(fout.frame.positive);
  for (const SparseVec& v : fout.frame.negatives) out_vectors.push_back(v);
  std::vector<SparseVec> in_vectors;
  in_vectors.push_back(fin.frame.positive);
  for (const SparseVec& v : fin.frame.negatives) in_vectors.push_back(v);

  LorentzFrame bin = extend_frame(fin.frame, out_vectors);
  LorentzFrame bout = extend_frame(fout.frame, in_vectors);
  if (bin.dim() != bout.dim())
    throw DegenerateSpan("match_pointwise: completion dimensions differ");

  std::vector<SparseVec> all = images;
  for (const HPoint& x : points) all.push_back(x.coords());
  IndexSet active = support_union(all, true);
  Eigen::VectorXd jd = j_diag(active);
  const Eigen::Index n = static_cast<Eigen::Index>(active.size());
  const Eigen::Index k = static_cast<Eigen::Index>(bin.dim());

  Eigen::MatrixXd Bi(n, k), Bo(n, k);
  Bi.col(0) = to_dense(bin.positive, active);
  Bo.col(0) = to_dense(bout.positive, active);
  for (Eigen::Index j = 1; j < k; ++j) {
    Bi.col(j) = to_dense(bin.negatives[static_cast<std::size_t>(j - 1)], active);
    Bo.col(j) = to_dense(bout.negatives[static_cast<std::size_t>(j - 1)], active);
  }
  Eigen::VectorXd jk(k);
  jk[0] = 1.0;
  for (Eigen::Index j = 1; j < k; ++j) jk[j] = -1.0;

  // h = I + (Bo - Bi) Jk Bi^T Js : maps the input frame to the image frame
  // and is the identity on the J-orthogonal complement of their joint span.
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) +
                      (Bo - Bi) * jk.asDiagonal() * Bi.transpose() *
                          Eigen::MatrixXd(jd.asDiagonal());
  return HypIsometry(active, j_orthonormalize_columns(M, jd));
}

double pointwise_dist(const HypIsometry& g, const HypIsometry& h,
                      const std::vector<HPoint>& probes) {
  if (probes.empty()) throw EmptyProbeSet("pointwise_dist: no probes");
  double m = 0.0;
  for (const HPoint& x : probes) m = std::max(m, dist(g.apply(x), h.apply(x)));
  return m;
}

namespace {

struct Classification {
  IsometryClass cls;
  double length;
};

// Classification over an explicit symmetric form matrix (used after
// reductions where the form is no longer diagonal).
Classification classify_core(const Eigen::MatrixXd& B, const Eigen::MatrixXd& J) {
  const Eigen::Index n = B.rows();
  if (n == 0) return {IsometryClass::Elliptic, 0.0};
  const double para = tolerances().parabolic;

  Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
  double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  if (lmax > 1.0 + kAmbiguousSpectrum)
    return {IsometryClass::Hyperbolic, std::log(lmax)};

  // Unit-modulus zone: decide through the fixed space. A defective
  // eigenvalue 1 perturbs the computed spectrum by far more than the
  // parabolic threshold, so the raw spectral radius cannot be trusted here.
  Eigen::MatrixXd K = B - Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  double smax = std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] <= para * smax) null_cols.push_back(i);

  if (null_cols.empty()) {
    if (lmax > 1.0 + para) return {IsometryClass::Hyperbolic, std::log(lmax)};
    return {IsometryClass::Parabolic, 0.0};
  }

  Eigen::MatrixXd V(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c)
    V.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(null_cols[c]);
  Eigen::MatrixXd G = V.transpose() * J * V;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(G);
  double gmax = ges.eigenvalues().maxCoeff();
  if (gmax > para) return {IsometryClass::Elliptic, 0.0};
  if (gmax >= -para) return {IsometryClass::Parabolic, 0.0};

  // Fixed space is negative definite (e.g. untouched axes). Reduce to its
  // J-orthogonal complement, which is B-invariant, and classify there.
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(V.transpose() * J,
                                         Eigen::ComputeFullV);
  Eigen::Index rank = csvd.rank();
  Eigen::Index m = n - rank;
  if (m <= 0) return {IsometryClass::Elliptic, 0.0};
  Eigen::MatrixXd C = csvd.matrixV().rightCols(m);
  return classify_core(C.transpose() * B * C, C.transpose() * J * C);
}

Classification classify_full(const HypIsometry& g) {
  Eigen::VectorXd jd = j_diag(g.active());
  return classify_core(g.block(), Eigen::MatrixXd(jd.asDiagonal()));
}

}  // namespace

IsometryClass classify(const HypIsometry& g) { return classify_full(g).cls; }

double translation_length(const HypIsometry& g) { return classify_full(g).length; }

std::pair<HypIsometry, HypIsometry> cartan_decompose(const HypIsometry& g) {
  HPoint e0 = HPoint::origin();
  HPoint y = g.apply(e0);
  double d = dist(e0, y);
  if (d < 1e-12) return {HypIsometry::identity(), g};
  HypIsometry p = transvection(geodesic_through(e0, y), d);
  HypIsometry k = compose(inverse(p), g);
  return {p, k};
}

namespace {

// Writes an orthogonal matrix as a product F2 F1 of two orthogonal
// involutions via the real Schur form (each rotation block is the product of
// two planar reflections).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> involution_pair(
    const Eigen::MatrixXd& A) {
  Eigen::RealSchur<Eigen::MatrixXd> schur(A);
  const Eigen::MatrixXd& T = schur.matrixT();
  const Eigen::MatrixXd& Q = schur.matrixU();
  const Eigen::Index n = A.rows();
  Eigen::VectorXd d(n);
  Eigen::Index i = 0;
  while (i < n) {
    bool pair = (i + 1 < n) && std::abs(T(i + 1, i)) > 1e-10;
    if (pair) {
      d[i] = 1.0;
      d[i + 1] = -1.0;
      i += 2;
    } else {
      d[i] = T(i, i) < 0.0 ? -1.0 : 1.0;
      i += 1;
    }
  }
  Eigen::MatrixXd F1 = Q * d.asDiagonal() * Q.transpose();
  return {A * F1, F1};
}

HypIsometry lift_orthogonal(const Eigen::MatrixXd& F, const IndexSet& active) {
  const Eigen::Index n = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  M.bottomRightCorner(n - 1, n - 1) = F;
  return HypIsometry(active, M);
}

}  // namespace

std::vector<HypIsometry> symmetry_decompose(const HypIsometry& g) {
  if (g.is_identity(1e-12))
    throw IdentityInput("symmetry_decompose: identity input");
  HypIsometry gg = compose(g, g);
  if (gg.is_identity(1e-9)) return {g};  // already a symmetry

  std::vector<HypIsometry> factors;
  HypIsometry h = g;
  HPoint e0 = HPoint::origin();
  HPoint y = g.apply(e0);
  if (dist(e0, y) >= 1e-12) {
    HPoint m = midpoint(e0, y);
    LorentzFrame point_frame;
    point_frame.positive = m.coords();
    HypIsometry sigma_m = symmetry(point_frame, g.active());
    factors.push_back(sigma_m);
    h = compose(sigma_m, g);  // fixes e0
  }
  // h fixes e0, so its block is diag(1, A) with A orthogonal.
  const Eigen::Index n = h.block().rows();
  Eigen::MatrixXd A = h.block().bottomRightCorner(n - 1, n - 1);
  auto [F2, F1] = involution_pair(A);
  auto near_identity = [](const Eigen::MatrixXd& M) {
    return (M - Eigen::MatrixXd::Identity(M.rows(), M.cols()))
               .cwiseAbs()
               .maxCoeff() < 1e-11;
  };
  if (!near_identity(F2)) factors.push_back(lift_orthogonal(F2, h.active()));
  if (!near_identity(F1)) factors.push_back(lift_orthogonal(F1, h.active()));
  return factors;
}

HypIsometry adjust_distance_rotation(const HPoint& z, const HPoint& w,
                                     const HPoint& y, double delta) {
  double r1 = dist(z, w), r2 = dist(z, y);
  double slack = 1e-9 * (1.0 + r1 + r2);
  if (delta < std::abs(r1 - r2) - slack || delta > r1 + r2 + slack)
    throw Unattainable("adjust_distance_rotation: delta outside sphere range");
  if (r1 < 1e-12 || r2 < 1e-12) {
    // degenerate spheres: only delta = r2 (resp. r1) is attainable
    double need = r1 < 1e-12 ? r2 : r1;
    if (std::abs(delta - need) <= slack) return HypIsometry::identity();
    throw Unattainable("adjust_distance_rotation: degenerate center distance");
  }

  TangentFrame f = tangent_frame(z, w, y);
  double phi0 = std::atan2(f.sin_angle, f.cos_angle);

  // distance from the rotated w to y as a function of the angle at z
  auto d_of = [&](double psi) {
    double c = std::cosh(r1) * std::cosh(r2) -
               std::sinh(r1) * std::sinh(r2) * std::cos(psi);
    if (c < 1.0) c = 1.0;
    return std::acosh(c);
  };
  double lo = 0.0, hi = 3.14159265358979323846;
  double psi;
  if (delta <= d_of(lo))
    psi = lo;
  else if (delta >= d_of(hi))
    psi = hi;
  else {
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      (d_of(mid) < delta ? lo : hi) = mid;
    }
    psi = 0.5 * (lo + hi);
  }
  double theta = phi0 - psi;
  return HypIsometry(f.active, plane_rotation_block(f.n1, f.n2, f.jd, theta));
}

std::pair<HypIsometry, HypIsometry> steinhaus_factor(const HypIsometry& g,
                                                     const HPoint& x,
                                                     const HPoint& y,
                                                     const HPoint& z) {
  double dxy = dist(x, y);
  if (dxy < 1e-12) throw CoincidentPoints("steinhaus_factor: x == y");
  if (dist(x, z) < 1e-12 || dist(y, z) < 1e-12)
    throw CollinearCenter("steinhaus_factor: z on the geodesic through x, y");
  double c = std::cos(angle(x, y, z));
  if (1.0 - std::abs(c) < 1e-10)
    throw CollinearCenter("steinhaus_factor: z on the geodesic through x, y");

  HPoint gx = g.apply(x);
  HypIsometry rho1 = adjust_distance_rotation(z, gx, y, dxy);
  HPoint moved = rho1.apply(gx);
  HypIsometry rho2 = dist(moved, x) < 1e-12 ? HypIsometry::identity()
                                            : rotation_mapping(y, moved, x);
  return {rho1, rho2};
}

}  // namespace lorentzlab
