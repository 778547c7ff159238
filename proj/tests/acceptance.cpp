// Acceptance suite: runs every verification criterion, prints one line per
// criterion, exits nonzero when any hard criterion fails.
//
//   acceptance                 run everything
//   acceptance --skip stretch  skip the long Y_555 stretch criterion
//   acceptance --only N        run a single criterion by number

#include <cstdio>
#include <cstring>
#include <string>

#include "coxflate/verify.hpp"

int main(int argc, char** argv) {
  bool skip_stretch = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--skip") == 0 && i + 1 < argc &&
        std::strcmp(argv[i + 1], "stretch") == 0) {
      skip_stretch = true;
      ++i;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
      ++i;
    } else {
      std::fprintf(stderr, "usage: acceptance [--skip stretch] [--only N]\n");
      return 2;
    }
  }

  coxflate::verify::SuiteOptions opts;
  opts.skip_stretch = skip_stretch;
  opts.only = only;
  auto results = coxflate::verify::run_all(opts);

  bool failed = false;
  for (const auto& r : results) {
    const char* tag = r.skipped ? "SKIP" : r.pass ? "PASS" : (r.soft ? "WARN" : "FAIL");
    std::printf("%s criterion %d: %s [%s] (%.2fs)\n", tag, r.id, r.name.c_str(),
                r.detail.c_str(), r.seconds);
    if (!r.pass && !r.soft && !r.skipped) failed = true;
  }
  return failed ? 1 : 0;
}
