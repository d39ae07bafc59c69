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

// Plain-text model files. Doubles are written in shortest round-trip form,
// so save -> load -> save is byte-identical and loaded models predict
// bit-exactly like the originals.

#ifndef FASTABC_MODEL_IO_HPP_
#define FASTABC_MODEL_IO_HPP_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <variant>

#include "fastabc/logit_boost.hpp"
#include "fastabc/lp_boost.hpp"

namespace fastabc {

using Model = std::variant<RegressionModel, ClassificationModel>;

inline constexpr const char* kModelMagic = "fastabc-model";
inline constexpr int kModelVersion = 1;

void write_model(std::ostream& out, const Model& model);
std::string model_to_string(const Model& model);

/// Throws InputError on a malformed or inconsistent file.
Model read_model(std::istream& in);
Model model_from_string(const std::string& text);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace fastabc

#endif  // FASTABC_MODEL_IO_HPP_
