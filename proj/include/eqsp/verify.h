// Copyright 2026 The eqsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks shared by `eqsp verify` and the acceptance test binary.
// Each suite is deterministic (fixed stream keys) and reports the measured
// quantities next to the bound it was held to.

#ifndef EQSP_VERIFY_H
#define EQSP_VERIFY_H

#include <string>
#include <vector>

namespace eqsp {

struct SuiteInfo {
    std::string id;
    std::string title;
    bool heavy = false;  // minutes rather than seconds; skipped by default in `verify`
};

struct CheckResult {
    std::string id;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    std::vector<std::string> lines;  // human-readable measurements
};

struct VerifyOptions {
    int threads = 1;
};

/// All suites, in a fixed order.
const std::vector<SuiteInfo> &verify_suites();

/// Runs one suite by id. Throws ConfigError for an unknown id. Exceptions from
/// the library inside a suite are caught and reported as a failed check.
CheckResult run_suite(const std::string &id, const VerifyOptions &options);

}  // namespace eqsp

#endif
