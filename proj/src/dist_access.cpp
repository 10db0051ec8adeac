#include "idlearn/dist_access.hpp"

#include <algorithm>
#include <thread>

#include "idlearn/error.hpp"

namespace idlearn {

TableAccess::TableAccess(PmfTable joint) : joint_(std::move(joint)), total_(joint_.total()) {}

const PmfTable& TableAccess::weights(VarSet vars) const {
  if (!joint_.vars().contains(vars)) {
    throw Error(ErrorCode::scope_mismatch, "marginal requested outside the table's variables");
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[vars.bits()];
  if (!slot) slot = std::make_unique<PmfTable>(joint_.marginal(vars));
  return *slot;
}

EmpiricalAccess::EmpiricalAccess(std::shared_ptr<const SampleSet> samples, std::vector<int> cards,
                                 int threads)
    : samples_(std::move(samples)), cards_(std::move(cards)), threads_(std::max(1, threads)) {
  if (static_cast<int>(cards_.size()) != samples_->num_vars()) {
    throw Error(ErrorCode::scope_mismatch, "cardinality list does not match the sample width");
  }
}

const PmfTable& EmpiricalAccess::weights(VarSet vars) const {
  if (!scope().contains(vars)) {
    throw Error(ErrorCode::scope_mismatch, "marginal requested outside the sampled columns");
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(vars.bits());
    if (it != cache_.end()) return *it->second;
  }
  auto table = std::make_unique<PmfTable>(count(vars));
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[vars.bits()];
  if (!slot) slot = std::move(table);
  return *slot;
}

PmfTable EmpiricalAccess::count(VarSet vars) const {
  PmfTable out(vars, cards_);
  const ConfigIndexer& idx = out.indexer();
  const std::size_t rows = samples_->size();
  const std::size_t min_chunk = 1 << 16;
  const int workers =
      static_cast<int>(std::min<std::size_t>(threads_, std::max<std::size_t>(1, rows / min_chunk)));

  auto tally = [&](std::size_t lo, std::size_t hi, std::vector<double>& acc) {
    for (std::size_t r = lo; r < hi; ++r) acc[idx.index(samples_->row(r))] += 1.0;
  };

  if (workers <= 1) {
    tally(0, rows, out.probs());
    return out;
  }
  std::vector<std::vector<double>> partial(workers, std::vector<double>(out.size(), 0.0));
  std::vector<std::thread> pool;
  const std::size_t step = (rows + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(rows, w * step);
    const std::size_t hi = std::min(rows, lo + step);
    pool.emplace_back(tally, lo, hi, std::ref(partial[w]));
  }
  for (auto& t : pool) t.join();
  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] += acc[i];
  }
  return out;
}

}  // namespace idlearn
