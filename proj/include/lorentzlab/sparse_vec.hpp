#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

namespace lorentzlab {

/// Finitely supported real vector over the countable basis e0, e1, e2, ...
///
/// Values are immutable after construction. Entries with magnitude below the
/// drop threshold are removed on construction, so the stored support is
/// always minimal and enumerated in increasing index order.
class SparseVec {
 public:
  using Entry = std::pair<std::size_t, double>;
  using Map = std::map<std::size_t, double>;

  SparseVec() = default;
  SparseVec(std::initializer_list<Entry> entries);
  explicit SparseVec(const std::vector<Entry>& entries);
  explicit SparseVec(Map entries);

  static SparseVec unit(std::size_t index);

  double operator[](std::size_t index) const;
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  std::size_t max_index() const;  // 0 when empty
  const Map& entries() const { return entries_; }

  SparseVec operator+(const SparseVec& o) const;
  SparseVec operator-(const SparseVec& o) const;
  SparseVec operator*(double s) const;
  SparseVec operator-() const;

  /// Plain l2 inner product <x, y>.
  double dot(const SparseVec& o) const;
  double norm_sq() const;
  double norm() const;
  /// max_i |x_i - y_i|
  double sup_dist(const SparseVec& o) const;

  bool operator==(const SparseVec& o) const { return entries_ == o.entries_; }

 private:
  Map entries_;
  void prune();
};

inline SparseVec operator*(double s, const SparseVec& v) { return v * s; }

}  // namespace lorentzlab
