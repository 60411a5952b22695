#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace machlimit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool verbose = false;
};

// Runs the full acceptance suite: every criterion at its pinned tolerance,
// one result per criterion.  Read-only except for scratch memory.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt = {});

bool all_passed(const std::vector<CriterionResult>& results);
void print_results(const std::vector<CriterionResult>& results, std::ostream& os);

}  // namespace machlimit
