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

#include "fastabc/boosting.hpp"

#include <cmath>
#include <string>

namespace fastabc {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::Regression: return "regression";
    case Method::RobustLogit: return "robustlogit";
    case Method::Mart: return "mart";
    case Method::AbcRobustLogit: return "abcrobustlogit";
    case Method::AbcMart: return "abcmart";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Regression, Method::RobustLogit, Method::Mart,
                   Method::AbcRobustLogit, Method::AbcMart}) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

bool is_abc(Method method) {
  return method == Method::AbcRobustLogit || method == Method::AbcMart;
}

void BoostConfig::validate() const {
  if (leaves < 2) throw ConfigError("J must be >= 2");
  if (!(shrinkage > 0.0 && shrinkage <= 1.0))
    throw ConfigError("shrinkage v must be in (0, 1]");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  binner.validate();
}

void AbcConfig::validate(int n_classes) const {
  if (search < 1 || search > n_classes)
    throw ConfigError("search must be in [1, " + std::to_string(n_classes) +
                      "], got " + std::to_string(search));
  if (gap < 0) throw ConfigError("gap must be >= 0");
  if (warmup < 0) throw ConfigError("warmup must be >= 0");
}

}  // namespace fastabc
