#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idlearn/varset.hpp"

namespace idlearn {

/// Largest number of cells any dense table may hold.
inline constexpr std::size_t kMaxTableCells = std::size_t{1} << 24;

/// Mixed-radix index over the configurations of a variable set. Variables are
/// laid out in ascending VarId order with the last one varying fastest.
class ConfigIndexer {
 public:
  ConfigIndexer() = default;
  /// `cards` is indexed by VarId. Throws Error(state_space_too_large) when the
  /// product of cardinalities exceeds `max_cells`.
  ConfigIndexer(VarSet vars, std::span<const int> cards, std::size_t max_cells = kMaxTableCells);

  VarSet vars() const { return vars_; }
  const std::vector<VarId>& order() const { return order_; }
  std::size_t size() const { return size_; }

  /// Index of the configuration read from `point` (indexed by VarId).
  std::size_t index(std::span<const int> point) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      idx += static_cast<std::size_t>(point[order_[i]]) * strides_[i];
    }
    return idx;
  }

  /// Writes the configuration with index `idx` into `point`.
  void decode(std::size_t idx, std::span<int> point) const {
    for (std::size_t i = 0; i < order_.size(); ++i) {
      point[order_[i]] = static_cast<int>((idx / strides_[i]) % radix_[i]);
    }
  }

 private:
  VarSet vars_;
  std::vector<VarId> order_;
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Pairwise (tree) summation.
double pairwise_sum(std::span<const double> xs);

/// Dense probability mass table over a small variable set.
class PmfTable {
 public:
  PmfTable() = default;
  /// `cards` is the full per-VarId cardinality list of the host graph.
  PmfTable(VarSet vars, std::vector<int> cards, std::vector<double> probs);
  /// Zero-filled table.
  PmfTable(VarSet vars, std::vector<int> cards);

  VarSet vars() const { return indexer_.vars(); }
  const std::vector<VarId>& order() const { return indexer_.order(); }
  const std::vector<int>& cardinalities() const { return cards_; }
  const ConfigIndexer& indexer() const { return indexer_; }
  std::size_t size() const { return probs_.size(); }

  const std::vector<double>& probs() const { return probs_; }
  std::vector<double>& probs() { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  double& operator[](std::size_t i) { return probs_[i]; }

  double at(std::span<const int> point) const { return probs_[indexer_.index(point)]; }

  double total() const { return pairwise_sum(probs_); }
  bool is_normalized(double tol = 1e-9) const;

  /// Sum out every variable not in `keep`; keep must be a subset of vars().
  PmfTable marginal(VarSet keep) const;

 private:
  ConfigIndexer indexer_;
  std::vector<int> cards_;
  std::vector<double> probs_;
};

}  // namespace idlearn
