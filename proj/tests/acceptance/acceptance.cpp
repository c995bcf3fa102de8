#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <vector>

#include "criteria.hpp"

using namespace sheetgen::acceptance;

int main() {
  Models models;
  const std::vector<std::function<Outcome()>> criteria{
      [] { return persistence_oracle(); },
      [&] { return lspia_quality(models); },
      [&] { return threshold_pattern(models); },
      [&] { return threshold_magnitudes(models); },
      [&] { return noise_robustness(models); },
      [&] { return density_robustness(models); },
      [&] { return slicing_correctness(models); },
      [&] { return slicing_performance(models); },
      [&] { return field_properties(models); },
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.name = "criterion " + std::to_string(i + 1);
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, o.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
