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

#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace degas {

/// Split of a d-dimensional vector into m consecutive blocks of sizes d_1..d_m.
class BlockPartition {
 public:
  /// Throws InvalidArgument on an empty list or a non-positive size.
  explicit BlockPartition(const std::vector<int>& block_sizes);

  static BlockPartition uniform(std::size_t blocks, std::size_t block_size);

  std::size_t blocks() const { return sizes_.size(); }
  std::size_t dim() const { return offsets_.back(); }
  std::size_t size(std::size_t i) const { return sizes_[i]; }
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  const std::vector<std::size_t>& offsets() const { return offsets_; }
  bool equal_blocks() const;

  bool operator==(const BlockPartition& other) const { return sizes_ == other.sizes_; }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
};

using PartitionPtr = std::shared_ptr<const BlockPartition>;

PartitionPtr make_partition(const std::vector<int>& block_sizes);
PartitionPtr make_uniform_partition(std::size_t blocks, std::size_t block_size = 1);

/// Dense vector tied to a block partition.
class BlockVector {
 public:
  explicit BlockVector(PartitionPtr partition);
  BlockVector(PartitionPtr partition, Eigen::VectorXd values);

  const BlockPartition& partition() const { return *partition_; }
  const PartitionPtr& partition_ptr() const { return partition_; }
  std::size_t dim() const { return static_cast<std::size_t>(values_.size()); }

  const Eigen::VectorXd& values() const { return values_; }
  /// Mutable access; the length must not change.
  Eigen::VectorXd& values() { return values_; }

  Eigen::VectorBlock<const Eigen::VectorXd> block(std::size_t i) const {
    return values_.segment(partition_->offset(i), partition_->size(i));
  }
  Eigen::VectorBlock<Eigen::VectorXd> block(std::size_t i) {
    return values_.segment(partition_->offset(i), partition_->size(i));
  }

  bool conforms_to(const BlockPartition& p) const { return *partition_ == p; }

 private:
  PartitionPtr partition_;
  Eigen::VectorXd values_;
};

}  // namespace degas
