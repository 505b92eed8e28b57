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

// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero if any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "eqsp/verify.h"

#ifndef EQSP_CLI_PATH
#error "EQSP_CLI_PATH must point at the eqsp executable"
#endif

namespace {

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs the CLI twice with the same arguments and compares the CSVs byte for byte.
bool cli_rerun_identical(std::vector<std::string> &lines) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("eqsp_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string args =
        " run --protocol bitflip --gamma 0.1 --L 1 --seed-first 2 --seed-last 4 --eps-count 8 --out ";
    std::string a = (dir / "a.csv").string();
    std::string b = (dir / "b.csv").string();
    int ra = std::system((std::string(EQSP_CLI_PATH) + args + a + " > /dev/null").c_str());
    int rb = std::system(("EQSP_THREADS=2 " + std::string(EQSP_CLI_PATH) + args + b + " > /dev/null").c_str());
    std::string ta = slurp(a);
    std::string tb = slurp(b);
    bool ok = ra == 0 && rb == 0 && !ta.empty() && ta == tb;
    lines.push_back("cli run repeated (1 and 2 threads): exit " + std::to_string(ra) + "/" + std::to_string(rb) +
                    ", " + std::to_string(ta.size()) + " bytes, identical " + (ta == tb ? "yes" : "no"));
    fs::remove_all(dir);
    return ok;
}

}  // namespace

int main() {
    eqsp::VerifyOptions opt;
    int failures = 0;
    int index = 0;
    for (const eqsp::SuiteInfo &s : eqsp::verify_suites()) {
        index++;
        eqsp::CheckResult r = eqsp::run_suite(s.id, opt);
        if (s.id == "determinism") {
            r.pass = cli_rerun_identical(r.lines) && r.pass;
        }
        std::printf("%s criterion %d (%s): %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", index, r.id.c_str(),
                    r.title.c_str(), r.seconds);
        for (const std::string &line : r.lines) {
            std::printf("    %s\n", line.c_str());
        }
        std::fflush(stdout);
        failures += r.pass ? 0 : 1;
    }
    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
