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
#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace degas {

struct Dataset {
  Eigen::MatrixXd features;  ///< N x d
  Eigen::VectorXd labels;    ///< N
  std::string provenance;
  /// Ground truth used to generate synthetic data.
  std::optional<Eigen::VectorXd> planted;

  std::size_t samples() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
};

enum class DataFormat { kLibsvm, kCsv };

DataFormat parse_data_format(const std::string& name);

struct LoadOptions {
  /// Feature dimension; inferred from the largest index when absent (libsvm).
  std::optional<std::size_t> dim;
  /// Rewrite labels {0, 1} as {-1, +1} (a warning is printed to stderr).
  bool map_binary_labels = false;
};

/// LIBSVM lines "label idx:value ..." with 1-based indices, or CSV rows
/// "f_1,...,f_d,label". Blank lines and lines starting with '#' are skipped.
/// Throws ParseError naming the offending line.
Dataset load_dataset(const std::string& path, DataFormat format, const LoadOptions& options = {});
Dataset parse_dataset(const std::string& text, DataFormat format, const LoadOptions& options = {},
                      const std::string& provenance = "<memory>");

enum class LabelKind { kRegression, kClassification };

/// Gaussian features, a planted truth with round(sparsity * d) nonzeros of
/// magnitude in [1, 2] and random sign, labels A x + noise * N(0,1)
/// (classification: the sign of that).
Dataset synth_problem(std::uint64_t seed, std::size_t n, std::size_t d, double sparsity, double noise,
                      LabelKind kind = LabelKind::kRegression);

}  // namespace degas
