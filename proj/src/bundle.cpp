#include "gmm/bundle.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace gmm {

std::string_view to_string(ReplacementStrategy s) {
  switch (s) {
    case ReplacementStrategy::Cyclic:
      return "cyclic";
    case ReplacementStrategy::MaxNorm:
      return "max-norm";
  }
  return "unknown";
}

BundleEntry BundleEntry::make(const EuclideanGeometry& geom, Vector z, double f, Vector g) {
  if (z.size() != geom.dim() || g.size() != geom.dim()) {
    throw std::invalid_argument("BundleEntry: dimension mismatch");
  }
  BundleEntry e;
  e.g_dual_norm_sq = geom.dual_norm_sq(g);
  e.z = std::move(z);
  e.f = f;
  e.g = std::move(g);
  return e;
}

Bundle::Bundle(EuclideanGeometry geom, Eigen::Index capacity, ReplacementStrategy strategy)
    : geom_(std::move(geom)), capacity_(capacity), strategy_(strategy) {
  if (capacity_ < 1) throw std::invalid_argument("Bundle: capacity must be at least 1");
  entries_.reserve(static_cast<std::size_t>(capacity_));
  G_ = Matrix::Zero(geom_.dim(), capacity_);
  f_star_ = Vector::Zero(capacity_);
  Q_ = Matrix::Zero(capacity_, capacity_);
}

Eigen::Index Bundle::choose_slot() const {
  if (strategy_ == ReplacementStrategy::Cyclic) return cursor_;
  Eigen::Index best = 0;
  double best_norm = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < size(); ++i) {
    const double v = entries_[static_cast<std::size_t>(i)].g_dual_norm_sq;
    if (v > best_norm) {
      best_norm = v;
      best = i;
    }
  }
  return best;
}

Eigen::Index Bundle::insert(BundleEntry entry) {
  if (entry.z.size() != geom_.dim() || entry.g.size() != geom_.dim()) {
    throw std::invalid_argument("Bundle::insert: dimension mismatch");
  }
  Eigen::Index slot;
  if (!full()) {
    slot = size();
    entries_.push_back(std::move(entry));
  } else {
    slot = choose_slot();
    if (strategy_ == ReplacementStrategy::Cyclic) cursor_ = (cursor_ + 1) % capacity_;
    entries_[static_cast<std::size_t>(slot)] = std::move(entry);
  }
  refresh(slot);
  return slot;
}

void Bundle::replace(Eigen::Index slot, BundleEntry entry) {
  if (slot < 0 || slot >= size()) {
    throw std::out_of_range("Bundle::replace: slot " + std::to_string(slot) + " out of range");
  }
  if (entry.z.size() != geom_.dim() || entry.g.size() != geom_.dim()) {
    throw std::invalid_argument("Bundle::replace: dimension mismatch");
  }
  entries_[static_cast<std::size_t>(slot)] = std::move(entry);
  refresh(slot);
}

void Bundle::refresh(Eigen::Index slot) {
  const BundleEntry& e = entries_[static_cast<std::size_t>(slot)];
  G_.col(slot) = e.g;
  f_star_[slot] = e.g.dot(e.z) - e.f;
  gram_update(slot);
  current_ = slot;
}

void Bundle::gram_update(Eigen::Index slot) {
  if (slot < 0 || slot >= size()) {
    throw std::out_of_range("Bundle::gram_update: slot " + std::to_string(slot) +
                            " out of range");
  }
  const Vector scaled = geom_.apply_inverse(G_.col(slot));
  for (Eigen::Index j = 0; j < size(); ++j) {
    const double q = G_.col(j).dot(scaled);
    Q_(j, slot) = q;
    Q_(slot, j) = q;
  }
  // Keep the diagonal equal to the cached norm bit for bit.
  Q_(slot, slot) = entries_[static_cast<std::size_t>(slot)].g_dual_norm_sq;
}

double Bundle::model_value(const Vector& y) const {
  if (empty()) throw std::logic_error("Bundle::model_value: empty bundle");
  if (y.size() != geom_.dim()) throw std::invalid_argument("Bundle::model_value: dimension mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) {
    const double v = e.f + e.g.dot(y - e.z);
    if (v > best) best = v;
  }
  return best;
}

Vector Bundle::recompute_fbar(const Vector& x_bar) const {
  if (empty()) throw std::logic_error("Bundle::recompute_fbar: empty bundle");
  if (x_bar.size() != geom_.dim()) {
    throw std::invalid_argument("Bundle::recompute_fbar: dimension mismatch");
  }
  Vector fbar(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    const auto& e = entries_[static_cast<std::size_t>(i)];
    fbar[i] = e.f + e.g.dot(x_bar - e.z);
  }
  return fbar;
}

Vector Bundle::combine(const Vector& lambda) const {
  if (lambda.size() != size()) throw std::invalid_argument("Bundle::combine: dimension mismatch");
  return gradients() * lambda;
}

Matrix Bundle::full_gram() const {
  Matrix Q(size(), size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    for (Eigen::Index j = 0; j < size(); ++j) {
      Q(i, j) = geom_.dual_inner(G_.col(i), G_.col(j));
    }
  }
  return Q;
}

}  // namespace gmm
