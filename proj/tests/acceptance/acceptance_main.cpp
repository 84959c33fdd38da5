// Acceptance gate runner: executes every criterion, prints one line per
// criterion, and exits with the number of failures.
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "report/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"extremal acceptance gate"};
  std::string scale = "full";
  extremal::AcceptanceOptions opt;
  app.add_option("--scale", scale, "criterion sizes: full or reduced")
      ->check(CLI::IsMember({"full", "reduced"}));
  app.add_option("--seed", opt.seed, "master seed (default 20260815)");
  app.add_option("--workers", opt.workers,
                 "worker threads per criterion (0 = hardware)");
  app.add_flag("--mutate-oracle", opt.mutate_oracle,
               "corrupt one reference value; the gate must then report a "
               "failure (self-check of the gate itself)");
  CLI11_PARSE(app, argc, argv);
  opt.full = scale == "full";

  const auto results = extremal::run_acceptance(opt, &std::cout);
  int failures = 0;
  for (const auto& r : results) failures += r.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed (%s scale, seed %llu)\n",
              int(results.size()) - failures, results.size(), scale.c_str(),
              static_cast<unsigned long long>(opt.seed));
  return failures;
}
