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

#include "degas/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <vector>

#include "degas/errors.hpp"
#include "degas/rng.hpp"

namespace degas {

DataFormat parse_data_format(const std::string& name) {
  if (name == "libsvm") return DataFormat::kLibsvm;
  if (name == "csv") return DataFormat::kCsv;
  throw InvalidArgument("unknown data format '" + name + "' (libsvm, csv)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view token, std::size_t line) {
  token = trim(token);
  // from_chars rejects an explicit plus sign, which LIBSVM labels often carry.
  if (token.size() > 1 && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  }
  return v;
}

struct Row {
  double label = 0.0;
  std::vector<std::pair<std::size_t, double>> entries;  // 0-based column
};

Row parse_libsvm_line(std::string_view text, std::size_t line) {
  Row row;
  std::size_t pos = 0;
  bool have_label = false;
  std::size_t last_index = 0;
  while (pos < text.size()) {
    const auto start = text.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = text.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view token = text.substr(start, end - start);
    pos = end;
    if (!have_label) {
      row.label = parse_real(token, line);
      have_label = true;
      continue;
    }
    const auto colon = token.find(':');
    if (colon == std::string_view::npos) throw ParseError(line, "expected index:value, got '" + std::string(token) + "'");
    std::size_t index = 0;
    const auto idx = token.substr(0, colon);
    const auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
    if (idx.empty() || ec != std::errc() || ptr != idx.data() + idx.size() || index == 0) {
      throw ParseError(line, "feature index must be a positive integer, got '" + std::string(idx) + "'");
    }
    if (index <= last_index) throw ParseError(line, "feature indices must increase");
    last_index = index;
    row.entries.emplace_back(index - 1, parse_real(token.substr(colon + 1), line));
  }
  if (!have_label) throw ParseError(line, "missing label");
  return row;
}

Row parse_csv_line(std::string_view text, std::size_t line) {
  std::vector<double> fields;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = text.find(',', pos);
    fields.push_back(parse_real(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos), line));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (fields.size() < 2) throw ParseError(line, "a CSV row needs at least one feature and a label");
  Row row;
  row.label = fields.back();
  for (std::size_t j = 0; j + 1 < fields.size(); ++j) row.entries.emplace_back(j, fields[j]);
  return row;
}

void map_labels(Dataset& data, const LoadOptions& options) {
  if (!options.map_binary_labels) return;
  const auto& b = data.labels;
  const bool binary01 = (b.array() == 0.0 || b.array() == 1.0).all();
  const bool has_zero = (b.array() == 0.0).any();
  if (binary01 && has_zero) {
    std::cerr << "warning: " << data.provenance << ": mapping labels {0, 1} to {-1, +1}\n";
    data.labels = (2.0 * b.array() - 1.0).matrix();
  }
}

}  // namespace

Dataset parse_dataset(const std::string& text, DataFormat format, const LoadOptions& options,
                      const std::string& provenance) {
  std::vector<Row> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    Row row = format == DataFormat::kLibsvm ? parse_libsvm_line(body, line_no) : parse_csv_line(body, line_no);
    if (format == DataFormat::kCsv) {
      if (width != 0 && row.entries.size() != width) {
        throw ParseError(line_no, "expected " + std::to_string(width) + " features, got " +
                                      std::to_string(row.entries.size()));
      }
      width = row.entries.size();
    } else if (!row.entries.empty()) {
      width = std::max(width, row.entries.back().first + 1);
      if (options.dim && row.entries.back().first >= *options.dim) {
        throw ParseError(line_no, "feature index " + std::to_string(row.entries.back().first + 1) +
                                      " exceeds dimension " + std::to_string(*options.dim));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument(provenance + ": no data rows");
  const std::size_t d = options.dim.value_or(width);
  if (format == DataFormat::kCsv && options.dim && *options.dim != width) {
    throw InvalidArgument(provenance + ": CSV has " + std::to_string(width) + " features, expected " +
                          std::to_string(*options.dim));
  }
  if (d == 0) throw InvalidArgument(provenance + ": no features");

  Dataset data;
  data.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  data.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    data.labels[static_cast<Eigen::Index>(r)] = rows[r].label;
    for (const auto& [j, v] : rows[r].entries) {
      data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
    }
  }
  data.provenance = provenance + (format == DataFormat::kLibsvm ? " (libsvm)" : " (csv)");
  map_labels(data, options);
  return data;
}

Dataset load_dataset(const std::string& path, DataFormat format, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open dataset '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), format, options, path);
}

Dataset synth_problem(std::uint64_t seed, std::size_t n, std::size_t d, double sparsity, double noise,
                      LabelKind kind) {
  if (n == 0 || d == 0) throw InvalidArgument("synthetic problem needs n, d >= 1");
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) throw InvalidArgument("sparsity must lie in [0, 1]");
  if (!(noise >= 0.0)) throw InvalidArgument("noise must be >= 0");
  RandomStream rng(seed, streams::kData);

  // Partial Fisher-Yates picks the support.
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  const auto support = static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(d)));
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < support; ++j) {
    std::swap(order[j], order[j + rng.below(d - j)]);
    const double magnitude = rng.uniform(1.0, 2.0);
    truth[static_cast<Eigen::Index>(order[j])] = rng.uniform() < 0.5 ? -magnitude : magnitude;
  }

  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) data.features(r, c) = rng.normal();
  }
  data.labels = data.features * truth;
  for (Eigen::Index r = 0; r < data.labels.size(); ++r) data.labels[r] += noise * rng.normal();
  if (kind == LabelKind::kClassification) {
    data.labels = data.labels.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
  }
  std::ostringstream prov;
  prov << "synthetic(seed=" << seed << ",n=" << n << ",d=" << d << ",sparsity=" << sparsity << ",noise=" << noise
       << (kind == LabelKind::kClassification ? ",classification" : ",regression") << ")";
  data.provenance = prov.str();
  data.planted = std::move(truth);
  return data;
}

}  // namespace degas
