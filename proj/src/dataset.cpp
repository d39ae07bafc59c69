// Copyright 2026 The FastABC Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fastabc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>

namespace fastabc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string where(std::size_t line) { return "line " + std::to_string(line); }

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file " + path.string());
  return in;
}

}  // namespace

RawDataset parse_csv(std::istream& in) {
  std::vector<double> values;
  Index n_cols = -1;
  Index n_rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Index cols = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view field = rest.substr(0, comma);
      double v = 0.0;
      if (!parse_double(field, v))
        throw InputError(where(line_no) + ": non-numeric field '" +
                         std::string(trim(field)) + "'");
      values.push_back(v);
      ++cols;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (n_cols < 0) n_cols = cols;
    if (cols != n_cols)
      throw InputError(where(line_no) + ": expected " + std::to_string(n_cols) +
                       " fields, found " + std::to_string(cols));
    ++n_rows;
  }
  if (n_rows == 0) throw InputError("empty CSV input");
  if (n_cols < 2) throw InputError("CSV needs a label and at least one feature");

  RawDataset out;
  out.format = DataFormat::Csv;
  out.features.resize(n_rows, n_cols - 1);
  out.labels.resize(n_rows);
  for (Index i = 0; i < n_rows; ++i) {
    out.labels[i] = values[i * n_cols];
    for (Index j = 1; j < n_cols; ++j)
      out.features(i, j - 1) = values[i * n_cols + j];
  }
  return out;
}

RawDataset load_csv(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  return parse_csv(in);
}

RawDataset parse_libsvm(std::istream& in, Index min_features) {
  std::vector<double> labels;
  std::vector<std::vector<std::pair<Index, double>>> rows;
  Index d = min_features;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos)
      rest = trim(rest.substr(0, hash));
    if (rest.empty()) continue;

    auto next_token = [&]() {
      const auto start = rest.find_first_not_of(" \t");
      if (start == std::string_view::npos) return std::string_view{};
      rest.remove_prefix(start);
      const auto end = rest.find_first_of(" \t");
      const std::string_view tok = rest.substr(0, end);
      rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
      return tok;
    };

    double label = 0.0;
    const std::string_view label_tok = next_token();
    if (!parse_double(label_tok, label))
      throw InputError(where(line_no) + ": bad label '" +
                       std::string(label_tok) + "'");
    std::vector<std::pair<Index, double>> entries;
    std::unordered_set<Index> seen;
    for (std::string_view tok = next_token(); !tok.empty();
         tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw InputError(where(line_no) + ": malformed pair '" +
                         std::string(tok) + "'");
      long long idx = 0;
      const std::string_view idx_str = tok.substr(0, colon);
      const auto [ptr, ec] = std::from_chars(
          idx_str.data(), idx_str.data() + idx_str.size(), idx);
      double v = 0.0;
      if (ec != std::errc() || ptr != idx_str.data() + idx_str.size() ||
          idx < 1 || !parse_double(tok.substr(colon + 1), v))
        throw InputError(where(line_no) + ": malformed pair '" +
                         std::string(tok) + "'");
      if (!seen.insert(idx).second)
        throw InputError(where(line_no) + ": duplicate index " +
                         std::to_string(idx));
      entries.emplace_back(static_cast<Index>(idx - 1), v);
      d = std::max<Index>(d, idx);
    }
    labels.push_back(label);
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw InputError("empty libsvm input");
  if (d < 1) d = 1;

  RawDataset out;
  out.format = DataFormat::Libsvm;
  out.features = Eigen::MatrixXd::Zero(static_cast<Index>(rows.size()), d);
  out.labels.resize(static_cast<Index>(rows.size()));
  for (Index i = 0; i < static_cast<Index>(rows.size()); ++i) {
    out.labels[i] = labels[i];
    for (const auto& [j, v] : rows[i]) out.features(i, j) = v;
  }
  return out;
}

RawDataset load_libsvm(const std::filesystem::path& path, Index min_features) {
  std::ifstream in = open_or_throw(path);
  return parse_libsvm(in, min_features);
}

RawDataset load_dataset(const std::filesystem::path& path,
                        Index min_features) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  bool libsvm = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    libsvm = line.find(':') != std::string::npos;
    break;
  }
  in.clear();
  in.seekg(0);
  return libsvm ? parse_libsvm(in, min_features) : parse_csv(in);
}

LabelMap LabelMap::fit(const Eigen::VectorXd& labels) {
  LabelMap out;
  out.classes.assign(labels.data(), labels.data() + labels.size());
  for (double v : out.classes)
    if (!std::isfinite(v)) throw InputError("non-finite class label");
  std::sort(out.classes.begin(), out.classes.end());
  out.classes.erase(std::unique(out.classes.begin(), out.classes.end()),
                    out.classes.end());
  return out;
}

std::vector<int> LabelMap::encode(const Eigen::VectorXd& labels) const {
  std::vector<int> out(labels.size());
  for (Index i = 0; i < labels.size(); ++i) {
    const auto it =
        std::lower_bound(classes.begin(), classes.end(), labels[i]);
    if (it == classes.end() || *it != labels[i])
      throw InputError("row " + std::to_string(i) + ": label " +
                       std::to_string(labels[i]) +
                       " was not seen during training");
    out[i] = static_cast<int>(it - classes.begin());
  }
  return out;
}

}  // namespace fastabc
