#include "idlearn/pmf_table.hpp"

#include <cmath>
#include <string>

#include "idlearn/error.hpp"

namespace idlearn {

ConfigIndexer::ConfigIndexer(VarSet vars, std::span<const int> cards, std::size_t max_cells)
    : vars_(vars), order_(vars.to_vector()) {
  radix_.resize(order_.size());
  strides_.resize(order_.size());
  size_ = 1;
  for (std::size_t i = order_.size(); i-- > 0;) {
    radix_[i] = static_cast<std::size_t>(cards[order_[i]]);
    strides_[i] = size_;
    if (radix_[i] != 0 && size_ > max_cells / radix_[i]) {
      throw Error(ErrorCode::state_space_too_large,
                  "table over " + std::to_string(order_.size()) + " variables exceeds " +
                      std::to_string(max_cells) + " cells");
    }
    size_ *= radix_[i];
  }
}

double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 16;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

PmfTable::PmfTable(VarSet vars, std::vector<int> cards, std::vector<double> probs)
    : indexer_(vars, cards), cards_(std::move(cards)), probs_(std::move(probs)) {
  if (probs_.size() != indexer_.size()) {
    throw Error(ErrorCode::scope_mismatch, "table has " + std::to_string(probs_.size()) +
                                               " entries, expected " +
                                               std::to_string(indexer_.size()));
  }
}

PmfTable::PmfTable(VarSet vars, std::vector<int> cards)
    : indexer_(vars, cards), cards_(std::move(cards)) {
  probs_.assign(indexer_.size(), 0.0);
}

bool PmfTable::is_normalized(double tol) const {
  for (double p : probs_) {
    if (!(p >= 0.0)) return false;
  }
  return std::abs(total() - 1.0) <= tol;
}

PmfTable PmfTable::marginal(VarSet keep) const {
  if (!vars().contains(keep)) {
    throw Error(ErrorCode::scope_mismatch, "marginal over variables outside the table");
  }
  if (keep == vars()) return *this;
  PmfTable out(keep, cards_);
  // Neumaier-compensated accumulation per output cell.
  std::vector<double> comp(out.size(), 0.0);
  std::vector<int> point(cards_.size(), 0);
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    indexer_.decode(i, point);
    const std::size_t j = out.indexer_.index(point);
    const double s = out.probs_[j];
    const double t = s + probs_[i];
    comp[j] += std::abs(s) >= std::abs(probs_[i]) ? (s - t) + probs_[i] : (probs_[i] - t) + s;
    out.probs_[j] = t;
  }
  for (std::size_t j = 0; j < out.size(); ++j) out.probs_[j] += comp[j];
  return out;
}

}  // namespace idlearn
