#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pmbm::cli {

/// Runs one command line (args exclude the program name). Returns the process
/// exit code: 0 success, 1 compute failure, 2 invalid input or usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace pmbm::cli

namespace pmbm::cli {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Desk-scale adjointness, Jacobian and oracle-equivalence checks. A nonzero
/// `offset_corruption` scales the blur's stored offsets by (1 + value) before
/// the adjointness check; it exists to show that the check can fail.
std::vector<SelftestCheck> run_selftest(double offset_corruption = 0.0);

}  // namespace pmbm::cli
