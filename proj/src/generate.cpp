#include "idlearn/generate.hpp"

#include "idlearn/error.hpp"
#include "idlearn/rng.hpp"

namespace idlearn {

SampleSet sample(const LearnedInterventional& li, std::uint64_t seed, std::size_t m) {
  const int n = li.graph.size();
  SampleSet out(n, li.outcome());
  out.reserve(m);
  Rng rng(seed);
  std::vector<int> row(n, 0);
  for (VarId v : li.x.domain()) row[v] = li.x.get(v);
  for (std::size_t s = 0; s < m; ++s) {
    for (const auto& f : li.factors) {
      const std::size_t r = f.row_of(row);
      row[f.target] = rng.draw(std::span<const double>(f.cdf).subspan(r * f.card, f.card));
    }
    out.push_back(row);
  }
  return out;
}

SampleSet sample_marginal(const LearnedInterventional& li, VarSet t, std::uint64_t seed,
                          std::size_t m) {
  if (!li.outcome().contains(t)) {
    throw Error(ErrorCode::scope_mismatch, "marginal sampling outside V \\ X");
  }
  return sample(li, seed, m).project(t);
}

PmfTable empirical_table(const SampleSet& samples, VarSet vars, const std::vector<int>& cards) {
  if (!samples.columns().contains(vars)) {
    throw Error(ErrorCode::scope_mismatch, "empirical table outside the sampled columns");
  }
  PmfTable out(vars, cards);
  const ConfigIndexer& idx = out.indexer();
  for (std::size_t i = 0; i < samples.size(); ++i) out[idx.index(samples.row(i))] += 1.0;
  if (!samples.empty()) {
    for (double& p : out.probs()) p /= static_cast<double>(samples.size());
  }
  return out;
}

}  // namespace idlearn
