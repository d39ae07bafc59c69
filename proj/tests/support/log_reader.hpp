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

// Reference reader for trainlog / testlog files: whitespace-separated
// "iter loss [errors] seconds [base]".

#ifndef FASTABC_TESTS_LOG_READER_HPP_
#define FASTABC_TESTS_LOG_READER_HPP_

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace logreader {

struct Row {
  int iteration = 0;
  double loss = 0.0;
  std::optional<long> errors;
  double seconds = 0.0;
  std::optional<int> base;
};

inline std::vector<Row> read(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream s(line);
    std::vector<std::string> f;
    for (std::string w; s >> w;) f.push_back(w);
    if (f.empty()) continue;
    if (f.size() < 3 || f.size() > 5)
      throw std::runtime_error("bad log line: " + line);
    Row r;
    r.iteration = std::stoi(f[0]);
    if (f[1].find_first_of("eE") == std::string::npos)
      throw std::runtime_error("loss not in scientific notation: " + line);
    r.loss = std::stod(f[1]);
    if (f.size() == 3) {
      r.seconds = std::stod(f[2]);
    } else {
      r.errors = std::stol(f[2]);
      r.seconds = std::stod(f[3]);
      if (f.size() == 5) r.base = std::stoi(f[4]);
    }
    if (!rows.empty() && r.iteration != rows.back().iteration + 1)
      throw std::runtime_error("iterations not consecutive: " + line);
    if (rows.empty() && r.iteration != 1)
      throw std::runtime_error("log does not start at iteration 1");
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<Row> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read(in);
}

}  // namespace logreader

#endif  // FASTABC_TESTS_LOG_READER_HPP_
