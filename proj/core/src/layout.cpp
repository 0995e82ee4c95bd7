#include "nashnet/layout.hpp"

#include "nashnet/errors.hpp"

namespace nashnet {

BlockLayout::BlockLayout(std::vector<std::size_t> dims)
    : dims_(std::move(dims)) {
  offsets_.reserve(dims_.size());
  for (std::size_t d : dims_) {
    if (d == 0) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "every agent needs at least one decision variable");
    }
    offsets_.push_back(total_);
    total_ += d;
  }
}

}  // namespace nashnet
