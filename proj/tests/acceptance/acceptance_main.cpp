// Acceptance suite: runs every certificate at the default scale (grid
// [0, 20/B] with 4000 nodes, dt from the CFL rule, t_end = 6/((k-1)B)) and
// prints one pass/fail line per criterion. Exits nonzero if any criterion
// fails.

#include <cstdio>
#include <cstring>
#include <string>

#include "core/checks.hpp"

int main(int argc, char** argv) {
  gfkit::CheckOptions opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--nodes") == 0 && i + 1 < argc) {
      opts.n_nodes = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--check") == 0 && i + 1 < argc) {
      opts.only.push_back(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--nodes N] [--check NAME]...\n", argv[0]);
      return 2;
    }
  }

  std::printf("acceptance suite: grid [0, %g] with %d nodes, B = %g, slack = %g\n",
              opts.x_max_factor / opts.B, opts.n_nodes, opts.B, opts.slack);

  std::vector<gfkit::CheckResult> results;
  try {
    results = gfkit::run_acceptance_checks(opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 2;
  }

  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %2d %-26s %s\n", r.pass ? "PASS" : "FAIL", r.criterion, r.name.c_str(),
                r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failures, results.size());
  return failures == 0 ? 0 : 1;
}
