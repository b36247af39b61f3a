// Copyright 2026 The degas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "degas/block_vector.hpp"

#include <algorithm>

#include "degas/errors.hpp"

namespace degas {

BlockPartition::BlockPartition(const std::vector<int>& block_sizes) {
  if (block_sizes.empty()) throw InvalidArgument("partition needs at least one block");
  sizes_.reserve(block_sizes.size());
  offsets_.reserve(block_sizes.size() + 1);
  offsets_.push_back(0);
  for (int s : block_sizes) {
    if (s <= 0) throw InvalidArgument("block sizes must be positive, got " + std::to_string(s));
    sizes_.push_back(static_cast<std::size_t>(s));
    offsets_.push_back(offsets_.back() + static_cast<std::size_t>(s));
  }
}

BlockPartition BlockPartition::uniform(std::size_t blocks, std::size_t block_size) {
  return BlockPartition(std::vector<int>(blocks, static_cast<int>(block_size)));
}

bool BlockPartition::equal_blocks() const {
  return std::all_of(sizes_.begin(), sizes_.end(), [&](std::size_t s) { return s == sizes_.front(); });
}

PartitionPtr make_partition(const std::vector<int>& block_sizes) {
  return std::make_shared<const BlockPartition>(block_sizes);
}

PartitionPtr make_uniform_partition(std::size_t blocks, std::size_t block_size) {
  if (blocks == 0 || block_size == 0) throw InvalidArgument("uniform partition needs blocks, size >= 1");
  return std::make_shared<const BlockPartition>(BlockPartition::uniform(blocks, block_size));
}

BlockVector::BlockVector(PartitionPtr partition)
    : BlockVector(partition, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(partition ? partition->dim() : 0))) {}

BlockVector::BlockVector(PartitionPtr partition, Eigen::VectorXd values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (!partition_) throw InvalidArgument("null partition");
  if (static_cast<std::size_t>(values_.size()) != partition_->dim()) {
    throw InvalidArgument("vector length " + std::to_string(values_.size()) + " does not match partition dimension " +
                          std::to_string(partition_->dim()));
  }
}

}  // namespace degas
