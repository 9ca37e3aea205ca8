// Copyright 2025 The MLDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MLDP_REPORT_H_
#define MLDP_REPORT_H_

#include <string>

namespace mldp {

// Renders the human-readable summary of a finished run directory (the
// metrics table plus any PUC tables), writes it to <dir>/report.txt and
// returns it. Best values per (dim, epsilon) setting are marked with '*'.
// An empty or metrics-less directory yields a header-only report.
std::string EmitReport(const std::string& output_dir);

}  // namespace mldp

#endif  // MLDP_REPORT_H_
