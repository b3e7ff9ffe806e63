#pragma once

#include "gmm/geometry.hpp"

#include <string_view>
#include <vector>

namespace gmm {

enum class ReplacementStrategy { Cyclic, MaxNorm };

std::string_view to_string(ReplacementStrategy s);

/// One linearization of f: the test point z, f(z) and grad f(z).
struct BundleEntry {
  Vector z;
  double f = 0.0;
  Vector g;
  double g_dual_norm_sq = 0.0;  // ||g||_*^2, filled by make_entry

  static BundleEntry make(const EuclideanGeometry& geom, Vector z, double f, Vector g);
};

/// Piece-wise linear lower model
///   l(y) = max_i { f_i + <g_i, y - z_i> }
/// over at most `capacity` stored linearizations, with the Gram matrix
/// Q = G^* B^{-1} G kept up to date one row/column per insertion.
class Bundle {
public:
  Bundle(EuclideanGeometry geom, Eigen::Index capacity, ReplacementStrategy strategy);

  Eigen::Index size() const { return static_cast<Eigen::Index>(entries_.size()); }
  Eigen::Index capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  bool full() const { return size() == capacity_; }
  ReplacementStrategy strategy() const { return strategy_; }
  const EuclideanGeometry& geometry() const { return geom_; }

  const BundleEntry& entry(Eigen::Index slot) const { return entries_.at(static_cast<std::size_t>(slot)); }
  const std::vector<BundleEntry>& entries() const { return entries_; }

  /// Slot holding the most recently inserted entry (the current iterate).
  Eigen::Index current_index() const { return current_; }
  Eigen::Index cyclic_cursor() const { return cursor_; }

  /// Columns g_i, n x size().
  auto gradients() const { return G_.leftCols(size()); }
  /// f_*^{(i)} = <g_i, z_i> - f_i
  auto f_star() const { return f_star_.head(size()); }
  /// Gram matrix restricted to the occupied slots.
  auto gram() const { return Q_.topLeftCorner(size(), size()); }

  /// Stores the entry of the new iterate. Below capacity it is appended;
  /// otherwise the slot chosen by the strategy is overwritten (the cyclic
  /// cursor or the largest ||g||_*^2, lowest index on ties). Returns the slot.
  Eigen::Index insert(BundleEntry entry);

  /// Overwrites an occupied slot and refreshes its Gram row/column. The slot
  /// becomes the current index.
  void replace(Eigen::Index slot, BundleEntry entry);

  /// Recomputes row and column `slot` of Q from the stored gradients.
  void gram_update(Eigen::Index slot);

  /// l(y)
  double model_value(const Vector& y) const;

  /// f_bar^{(i)} = f_i + <g_i, x_bar - z_i>, i.e. G^* x_bar - f_*.
  Vector recompute_fbar(const Vector& x_bar) const;

  /// G lambda for lambda indexed by slot.
  Vector combine(const Vector& lambda) const;

  /// Q from scratch; used to validate the incremental updates.
  Matrix full_gram() const;

private:
  Eigen::Index choose_slot() const;
  void refresh(Eigen::Index slot);

  EuclideanGeometry geom_;
  Eigen::Index capacity_;
  ReplacementStrategy strategy_;
  std::vector<BundleEntry> entries_;
  Matrix G_;
  Vector f_star_;
  Matrix Q_;
  Eigen::Index current_ = -1;
  Eigen::Index cursor_ = 0;
};

}  // namespace gmm
