#pragma once

#include <cstddef>
#include <vector>

#include "lorentzlab/euclid.hpp"
#include "lorentzlab/isometry.hpp"
#include "lorentzlab/models.hpp"
#include "lorentzlab/rng.hpp"

namespace lorentzlab {

/// Random vector supported on indices lo..hi with iid normal entries.
SparseVec random_vec(Rng& rng, std::size_t lo, std::size_t hi, double scale = 1.0);
/// Unit vector on indices lo..hi.
SparseVec random_unit(Rng& rng, std::size_t lo, std::size_t hi);

/// Random point of H with Klein norm at most `radius` (< 1), supported on
/// ball indices 1..dims.
HPoint random_hpoint(Rng& rng, std::size_t dims, double radius = 0.8);
IdealPoint random_ideal(Rng& rng, std::size_t dims);

/// Random orthogonal block of the given size (QR of a Gaussian matrix).
Eigen::MatrixXd random_orthogonal(Rng& rng, std::size_t n);

/// Generic isometry of H supported on indices 0..dims: a random rotation at
/// e0 composed with a transvection of length up to max_length.
HypIsometry random_hyp_isometry(Rng& rng, std::size_t dims,
                                double max_length = 1.5);

/// Generic Euclidean isometry on indices 1..dims.
EucIsometry random_euc_isometry(Rng& rng, std::size_t dims,
                                double translation_scale = 1.0);

}  // namespace lorentzlab
