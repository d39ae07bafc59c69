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

// trainlog / testlog lines, one per iteration:
//
//   regression:      "%4d %20.14e %.5f"          iter loss seconds
//   classification:  "%4d %20.14e %7d %.5f"      iter loss errors seconds
//
// ABC models append the base class of the iteration ("%3d", -1 during
// warm-up) as a fifth column.

#ifndef FASTABC_LOGS_HPP_
#define FASTABC_LOGS_HPP_

#include <string>

#include "fastabc/boosting.hpp"

namespace fastabc {

std::string format_log_line(const IterationLog& rec, bool base_column = false);

}  // namespace fastabc

#endif  // FASTABC_LOGS_HPP_
