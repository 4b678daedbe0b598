#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "lorentzlab/sparse_vec.hpp"

namespace lorentzlab {

using IndexSet = std::vector<std::size_t>;  // sorted, unique

/// Position of `index` in the sorted set, or npos.
std::size_t index_position(const IndexSet& active, std::size_t index);

IndexSet union_active(const IndexSet& a, const IndexSet& b);
IndexSet sorted_unique(IndexSet v);
/// Union of {0} (when with_zero) and the supports of the given vectors.
IndexSet support_union(const std::vector<SparseVec>& vs, bool with_zero);

/// Splits x into its dense part over `active` and the untouched remainder.
struct DenseSplit {
  Eigen::VectorXd dense;
  SparseVec rest;
};
DenseSplit split_on(const SparseVec& x, const IndexSet& active);

SparseVec to_sparse(const Eigen::VectorXd& dense, const IndexSet& active);
Eigen::VectorXd to_dense(const SparseVec& x, const IndexSet& active);

/// Re-embeds a block living on `from` into coordinates of `to` (identity on
/// the added indices). `from` must be a subset of `to`.
Eigen::MatrixXd embed_block(const Eigen::MatrixXd& block, const IndexSet& from,
                            const IndexSet& to);

/// Diagonal of J restricted to `active` (+1 at index 0, -1 elsewhere).
Eigen::VectorXd j_diag(const IndexSet& active);

}  // namespace lorentzlab
