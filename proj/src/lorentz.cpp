#include "lorentzlab/lorentz.hpp"

#include <cmath>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/tolerances.hpp"

namespace lorentzlab {

SparseVec apply_J(const SparseVec& x) {
  SparseVec::Map out;
  for (const auto& [i, v] : x.entries()) out[i] = (i == 0) ? v : -v;
  return SparseVec(std::move(out));
}

double lorentz_form(const SparseVec& x, const SparseVec& y) {
  const SparseVec* a = &x;
  const SparseVec* b = &y;
  if (a->entries().size() > b->entries().size()) std::swap(a, b);
  double acc = 0.0;
  for (const auto& [i, v] : a->entries()) {
    double w = (*b)[i];
    acc += (i == 0) ? v * w : -v * w;
  }
  return acc;
}

namespace {

// Residual of v against the frame, in the Lorentz form. For a frame vector p
// with Q=+1 the component of v along p is (v,p) p; for n with Q=-1 it is
// -(v,n) n.
SparseVec frame_residual(const SparseVec& v, const LorentzFrame& frame) {
  SparseVec r = v - frame.positive * lorentz_form(v, frame.positive);
  for (const SparseVec& n : frame.negatives) r = r + n * lorentz_form(r, n);
  return r;
}

}  // namespace

LorentzFrame q_orthonormalize(const std::vector<SparseVec>& vectors,
                              const SparseVec& pivot) {
  double qp = q_form(pivot);
  if (qp <= tol_for(pivot.norm_sq()))
    throw DegenerateSpan("q_orthonormalize: pivot is not Q-positive");
  LorentzFrame frame;
  frame.positive = pivot * (1.0 / std::sqrt(qp));
  for (const SparseVec& v : vectors) {
    if (std::abs(q_form(v)) <= tol_for(v.norm_sq()))
      throw DegenerateSpan("q_orthonormalize: isotropic input vector");
    SparseVec r = frame_residual(v, frame);
    double q = q_form(r);
    if (std::abs(q) <= tol_for(v.norm_sq()))
      throw DegenerateSpan("q_orthonormalize: degenerate residual");
    if (q > 0.0)
      throw DegenerateSpan("q_orthonormalize: residual is Q-positive");
    frame.negatives.push_back(r * (1.0 / std::sqrt(-q)));
  }
  return frame;
}

FrameBuild frame_from_span(const std::vector<SparseVec>& vectors,
                           const SparseVec& pivot) {
  double qp = q_form(pivot);
  if (qp <= tol_for(pivot.norm_sq()))
    throw DegenerateSpan("frame_from_span: pivot is not Q-positive");
  FrameBuild out;
  out.frame.positive = pivot * (1.0 / std::sqrt(qp));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    SparseVec r = frame_residual(vectors[k], out.frame);
    double q = q_form(r);
    // Residuals against a frame containing a positive vector live in a
    // negative-definite complement, so only near-zero residuals are skipped.
    double scale = vectors[k].norm_sq() + 1.0;
    if (-q <= 1e-12 * scale) continue;
    out.frame.negatives.push_back(r * (1.0 / std::sqrt(-q)));
    out.accepted.push_back(k);
  }
  return out;
}

LorentzFrame extend_frame(LorentzFrame frame,
                          const std::vector<SparseVec>& candidates) {
  for (const SparseVec& v : candidates) {
    SparseVec r = frame_residual(v, frame);
    double q = q_form(r);
    double scale = v.norm_sq() + 1.0;
    if (-q <= 1e-12 * scale) continue;
    frame.negatives.push_back(r * (1.0 / std::sqrt(-q)));
  }
  return frame;
}

}  // namespace lorentzlab
