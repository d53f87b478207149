#include "acceptance_suite.hpp"

#include <algorithm>
#include <iostream>

int main() {
  auto results = cmono::acceptance::run_all(std::cout);
  auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
  return passed == static_cast<long>(results.size()) ? 0 : 1;
}
