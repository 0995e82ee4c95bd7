#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace nashnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Partition of the joint strategy x = col(x_1, ..., x_N) into agent blocks
/// of sizes n_1, ..., n_N. The same layout indexes each agent's estimate
/// vector inside a stacked estimate of length N * n.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<std::size_t> dims);

  std::size_t agents() const noexcept { return dims_.size(); }
  std::size_t total() const noexcept { return total_; }
  std::size_t size(std::size_t i) const { return dims_.at(i); }
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }

  /// Length of a stacked estimate vector, N * n.
  std::size_t stack_size() const noexcept { return agents() * total_; }

  /// Position of agent i's estimate of agent j's strategy inside the stack.
  std::size_t stack_offset(std::size_t i, std::size_t j) const {
    return i * total_ + offset(j);
  }

  bool operator==(const BlockLayout&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

}  // namespace nashnet
