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

#include "fastabc/logs.hpp"

#include <cstdio>

namespace fastabc {

std::string format_log_line(const IterationLog& rec, bool base_column) {
  char buf[128];
  int len = 0;
  if (rec.errors) {
    len = std::snprintf(buf, sizeof buf, "%4d %20.14e %7ld %.5f", rec.iteration,
                        rec.loss, *rec.errors, rec.seconds);
  } else {
    len = std::snprintf(buf, sizeof buf, "%4d %20.14e %.5f", rec.iteration,
                        rec.loss, rec.seconds);
  }
  std::string line(buf, static_cast<std::size_t>(len));
  if (base_column) {
    len = std::snprintf(buf, sizeof buf, " %3d",
                        rec.base_class ? *rec.base_class : -1);
    line.append(buf, static_cast<std::size_t>(len));
  }
  return line;
}

}  // namespace fastabc
