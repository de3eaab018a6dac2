#ifndef RISKQUAD_VERIFY_HPP
#define RISKQUAD_VERIFY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "riskquad/wgrm.hpp"

namespace riskquad {

/// One functional under test together with the pass/fail outcome it must
/// produce for every axiom.
struct ZooEntry {
  std::string name;
  std::size_t dimension = 0;
  Functional functional;
  std::map<std::string, bool> expected;  // axiom -> must pass
};

/// The built-in catalog: equal-weight mean, a non-uniform weighted mean, the
/// max component, the first coordinate, and a genuine two-vertex sup over
/// monotone weights.
std::vector<ZooEntry> functional_zoo();

struct VerifyResult {
  bool ok = false;
  std::string text;  // human-readable report, one block per section
};

/// Runs the axiom catalog, the weight-recovery round-trips, the quadrangle
/// identity suite and the uncertainty-aversion counterexample.  `ok` is true
/// iff every observed outcome matches the catalog and every residual is in
/// tolerance.
VerifyResult run_verification(const std::vector<ZooEntry>& zoo, std::size_t trials,
                              std::uint64_t seed);

}  // namespace riskquad

#endif
