#pragma once

#include <cstddef>
#include <vector>

#include "lorentzlab/sparse_vec.hpp"

namespace lorentzlab {

/// J e0 = e0, J ei = -ei for i >= 1.
SparseVec apply_J(const SparseVec& x);

/// The Lorentz bilinear form (x, y) = x0 y0 - sum_{i>=1} x_i y_i = <x, J y>.
double lorentz_form(const SparseVec& x, const SparseVec& y);

inline double q_form(const SparseVec& x) { return lorentz_form(x, x); }

/// One Q=+1 vector together with pairwise Lorentz-orthogonal Q=-1 vectors.
struct LorentzFrame {
  SparseVec positive;
  std::vector<SparseVec> negatives;

  std::size_t dim() const { return 1 + negatives.size(); }
};

/// Gram-Schmidt adapted to the signature (1, oo) form.
///
/// The pivot (Q > 0) becomes the normalized positive vector; each input
/// vector is orthogonalized against the frame built so far and normalized to
/// Q = -1. Throws DegenerateSpan when an input vector is Q-isotropic or when
/// the residual of a vector is Q-degenerate (duplicate or isotropic span).
LorentzFrame q_orthonormalize(const std::vector<SparseVec>& vectors,
                              const SparseVec& pivot);

/// Skip-policy variant used for Witt-style span matching: degenerate
/// residuals are skipped instead of raising, and `accepted` records which
/// input positions contributed a frame vector.
struct FrameBuild {
  LorentzFrame frame;
  std::vector<std::size_t> accepted;
};
FrameBuild frame_from_span(const std::vector<SparseVec>& vectors,
                           const SparseVec& pivot);

/// Extends `frame` to a frame of span(frame) + span(candidates), skipping
/// dependent candidates.
LorentzFrame extend_frame(LorentzFrame frame,
                          const std::vector<SparseVec>& candidates);

}  // namespace lorentzlab
