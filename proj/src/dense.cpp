#include "lorentzlab/dense.hpp"

#include <algorithm>

namespace lorentzlab {

std::size_t index_position(const IndexSet& active, std::size_t index) {
  auto it = std::lower_bound(active.begin(), active.end(), index);
  if (it == active.end() || *it != index) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - active.begin());
}

IndexSet sorted_unique(IndexSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

IndexSet union_active(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet support_union(const std::vector<SparseVec>& vs, bool with_zero) {
  IndexSet out;
  if (with_zero) out.push_back(0);
  for (const SparseVec& v : vs)
    for (const auto& [i, val] : v.entries()) out.push_back(i);
  return sorted_unique(std::move(out));
}

DenseSplit split_on(const SparseVec& x, const IndexSet& active) {
  DenseSplit out;
  out.dense = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(active.size()));
  SparseVec::Map rest;
  for (const auto& [i, v] : x.entries()) {
    std::size_t pos = index_position(active, i);
    if (pos == static_cast<std::size_t>(-1))
      rest[i] = v;
    else
      out.dense[static_cast<Eigen::Index>(pos)] = v;
  }
  out.rest = SparseVec(std::move(rest));
  return out;
}

SparseVec to_sparse(const Eigen::VectorXd& dense, const IndexSet& active) {
  SparseVec::Map out;
  for (std::size_t p = 0; p < active.size(); ++p) {
    double v = dense[static_cast<Eigen::Index>(p)];
    if (v != 0.0) out[active[p]] = v;
  }
  return SparseVec(std::move(out));
}

Eigen::VectorXd to_dense(const SparseVec& x, const IndexSet& active) {
  return split_on(x, active).dense;
}

Eigen::MatrixXd embed_block(const Eigen::MatrixXd& block, const IndexSet& from,
                            const IndexSet& to) {
  Eigen::Index n = static_cast<Eigen::Index>(to.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  std::vector<Eigen::Index> pos(from.size());
  for (std::size_t k = 0; k < from.size(); ++k)
    pos[k] = static_cast<Eigen::Index>(index_position(to, from[k]));
  for (std::size_t r = 0; r < from.size(); ++r)
    for (std::size_t c = 0; c < from.size(); ++c)
      out(pos[r], pos[c]) = block(static_cast<Eigen::Index>(r),
                                  static_cast<Eigen::Index>(c));
  return out;
}

Eigen::VectorXd j_diag(const IndexSet& active) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(active.size()));
  for (std::size_t p = 0; p < active.size(); ++p)
    d[static_cast<Eigen::Index>(p)] = (active[p] == 0) ? 1.0 : -1.0;
  return d;
}

}  // namespace lorentzlab
