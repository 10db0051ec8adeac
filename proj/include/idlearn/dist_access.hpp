#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "idlearn/pmf_table.hpp"
#include "idlearn/samples.hpp"

namespace idlearn {

/// Read access to an observational distribution. Marginals come back as
/// unnormalized weight tables (probabilities for exact tables, counts for
/// samples); divide by total_weight() for probabilities.
class DistAccess {
 public:
  virtual ~DistAccess() = default;

  virtual VarSet scope() const = 0;
  virtual const std::vector<int>& cardinalities() const = 0;

  /// Weight table over `vars` (a subset of scope()). The reference stays valid
  /// for the lifetime of the access object.
  virtual const PmfTable& weights(VarSet vars) const = 0;
  virtual double total_weight() const = 0;

  /// True when weights are exact probabilities rather than sample counts.
  virtual bool exact() const = 0;

  /// P(vars = point restricted to vars).
  double probability(VarSet vars, std::span<const int> point) const {
    return weights(vars).at(point) / total_weight();
  }
};

/// Exact access backed by a joint table.
class TableAccess final : public DistAccess {
 public:
  explicit TableAccess(PmfTable joint);

  VarSet scope() const override { return joint_.vars(); }
  const std::vector<int>& cardinalities() const override { return joint_.cardinalities(); }
  const PmfTable& weights(VarSet vars) const override;
  double total_weight() const override { return total_; }
  bool exact() const override { return true; }

  const PmfTable& joint() const { return joint_; }

 private:
  PmfTable joint_;
  double total_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, std::unique_ptr<PmfTable>> cache_;
};

/// Empirical access over a sample batch. Count tables are built on first use
/// with one pass over the rows (split across `threads` workers, merged in a
/// fixed order) and cached.
class EmpiricalAccess final : public DistAccess {
 public:
  EmpiricalAccess(std::shared_ptr<const SampleSet> samples, std::vector<int> cards,
                  int threads = 1);

  VarSet scope() const override { return samples_->columns(); }
  const std::vector<int>& cardinalities() const override { return cards_; }
  const PmfTable& weights(VarSet vars) const override;
  double total_weight() const override { return static_cast<double>(samples_->size()); }
  bool exact() const override { return false; }

  const SampleSet& samples() const { return *samples_; }

 private:
  PmfTable count(VarSet vars) const;

  std::shared_ptr<const SampleSet> samples_;
  std::vector<int> cards_;
  int threads_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, std::unique_ptr<PmfTable>> cache_;
};

}  // namespace idlearn
