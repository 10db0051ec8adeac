#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idlearn/varset.hpp"

namespace idlearn {

/// Batch of assignments over a fixed column set. Rows are stored full-width
/// (one slot per graph variable) so they can be used directly as evaluation
/// points; slots outside `columns()` hold whatever the producer put there.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(int num_vars, VarSet columns) : num_vars_(num_vars), columns_(columns) {}

  int num_vars() const { return num_vars_; }
  VarSet columns() const { return columns_; }
  std::size_t size() const { return num_vars_ == 0 ? 0 : data_.size() / num_vars_; }
  bool empty() const { return size() == 0; }

  void reserve(std::size_t rows) { data_.reserve(rows * num_vars_); }
  void push_back(std::span<const int> row) { data_.insert(data_.end(), row.begin(), row.end()); }

  std::span<const int> row(std::size_t i) const {
    return std::span<const int>(data_).subspan(i * num_vars_, num_vars_);
  }
  int at(std::size_t i, VarId v) const { return data_[i * num_vars_ + v]; }

  /// Same rows restricted to `keep` (a subset of columns()).
  SampleSet project(VarSet keep) const {
    SampleSet out = *this;
    out.columns_ = keep & columns_;
    return out;
  }

  const std::vector<int>& data() const { return data_; }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  int num_vars_ = 0;
  VarSet columns_;
  std::vector<int> data_;
};

}  // namespace idlearn
