// Acceptance runner: one PASS/FAIL line per criterion, details indented
// below it. Exit status 1 if any selected criterion fails.
//
//   aud_acceptance                  all criteria
//   aud_acceptance --criterion 5    a single criterion
//   aud_acceptance --seed 7         a different master seed

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "aud/validation.hpp"

int main(int argc, char** argv) {
  aud::validation::ValidationOptions options;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--criterion" || arg == "--seed") && i + 1 < argc) {
      const std::string value = argv[++i];
      if (arg == "--criterion") {
        ids.push_back(std::stoi(value));
      } else {
        options.seed = std::stoull(value);
      }
    } else {
      std::cerr << "usage: aud_acceptance [--criterion N]... [--seed S]\n";
      return 2;
    }
  }
  if (ids.empty()) ids = aud::validation::all_criteria();

  bool all_passed = true;
  for (int id : ids) {
    const auto result = aud::validation::run_criterion(id, options);
    aud::validation::ValidationReport report;
    report.seed = options.seed;
    report.criteria.push_back(result);
    aud::validation::write_text(std::cout, report);
    std::cout.flush();
    all_passed = all_passed && result.passed();
  }
  return all_passed ? EXIT_SUCCESS : EXIT_FAILURE;
}
