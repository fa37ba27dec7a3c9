// Copyright 2026 The nhbosonic Authors
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

#include <CLI11.hpp>

#include <cstdio>

#include "nhb/verification.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<std::string> only;
  std::string out;
  bool quiet = false;
  app.add_option("--only", only, "Criterion id (repeatable)");
  app.add_option("--out", out, "Write result bundles below this directory");
  app.add_flag("--quiet", quiet, "Omit per-checkpoint details");
  CLI11_PARSE(app, argc, argv);

  nhb::VerifyOptions options;
  options.out_dir = out;
  bool ok = true;
  try {
    for (const auto& r : nhb::run_acceptance(only, options)) {
      ok = ok && r.pass;
      std::printf("%s %s %s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.title.c_str());
      if (!quiet) {
        for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return ok ? 0 : 1;
}
