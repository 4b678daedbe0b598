#include "lorentzlab/sparse_vec.hpp"

#include <cmath>

#include "lorentzlab/tolerances.hpp"

namespace lorentzlab {

SparseVec::SparseVec(std::initializer_list<Entry> entries) {
  for (const auto& [i, v] : entries) entries_[i] += v;
  prune();
}

SparseVec::SparseVec(const std::vector<Entry>& entries) {
  for (const auto& [i, v] : entries) entries_[i] += v;
  prune();
}

SparseVec::SparseVec(Map entries) : entries_(std::move(entries)) { prune(); }

SparseVec SparseVec::unit(std::size_t index) { return SparseVec{{index, 1.0}}; }

void SparseVec::prune() {
  const double drop = tolerances().drop;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (std::abs(it->second) < drop)
      it = entries_.erase(it);
    else
      ++it;
  }
}

double SparseVec::operator[](std::size_t index) const {
  auto it = entries_.find(index);
  return it == entries_.end() ? 0.0 : it->second;
}

std::size_t SparseVec::max_index() const {
  return entries_.empty() ? 0 : entries_.rbegin()->first;
}

SparseVec SparseVec::operator+(const SparseVec& o) const {
  Map out = entries_;
  for (const auto& [i, v] : o.entries_) out[i] += v;
  return SparseVec(std::move(out));
}

SparseVec SparseVec::operator-(const SparseVec& o) const {
  Map out = entries_;
  for (const auto& [i, v] : o.entries_) out[i] -= v;
  return SparseVec(std::move(out));
}

SparseVec SparseVec::operator*(double s) const {
  Map out = entries_;
  for (auto& [i, v] : out) v *= s;
  return SparseVec(std::move(out));
}

SparseVec SparseVec::operator-() const { return (*this) * -1.0; }

double SparseVec::dot(const SparseVec& o) const {
  // iterate the smaller support
  const SparseVec* a = this;
  const SparseVec* b = &o;
  if (a->entries_.size() > b->entries_.size()) std::swap(a, b);
  double acc = 0.0;
  for (const auto& [i, v] : a->entries_) acc += v * (*b)[i];
  return acc;
}

double SparseVec::norm_sq() const {
  double acc = 0.0;
  for (const auto& [i, v] : entries_) acc += v * v;
  return acc;
}

double SparseVec::norm() const { return std::sqrt(norm_sq()); }

double SparseVec::sup_dist(const SparseVec& o) const {
  double m = 0.0;
  for (const auto& [i, v] : entries_) m = std::max(m, std::abs(v - o[i]));
  for (const auto& [i, v] : o.entries_) m = std::max(m, std::abs(v - (*this)[i]));
  return m;
}

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

}  // namespace lorentzlab
