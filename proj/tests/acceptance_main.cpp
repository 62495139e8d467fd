// Runs acceptance criteria 1-10 and prints one pass/fail line per criterion.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "dioprime/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = dioprime::ExperimentConfig{}.seed;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--seed=", 0) == 0)
      seed = std::stoull(arg.substr(7));
    else
      ids.push_back(std::stoi(arg));
  }
  try {
    const auto results = dioprime::acceptance::run_acceptance(seed, ids);
    bool all = true;
    for (const auto& r : results) {
      std::cout << r.line() << "\n";
      all = all && r.ok();
    }
    std::cout << (all ? "all criteria passed" : "some criteria FAILED") << std::endl;
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
  } catch (const std::exception& e) {
    std::cerr << "acceptance run aborted: " << e.what() << "\n";
    return 2;
  }
}
