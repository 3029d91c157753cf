#pragma once

#include <cstdint>
#include <string>

namespace regbin::testing {

struct CheckResult {
  bool ok = true;
  std::size_t cases = 0;
  std::string detail;  // first counterexample
};

// Every forward assignment agrees with every non-degenerate sign-monotone
// Boolean function on up to `max_regulators` regulators.
CheckResult check_forward_soundness(int max_regulators = 4);

// backward_step picks the exhaustive-scan argmin of tau on random star graphs.
CheckResult check_tau_argmin(std::uint64_t seed, int trials, int max_regulators = 8);

CheckResult check_pseudometric(std::uint64_t seed, int trials);

CheckResult check_hill_complementarity(std::uint64_t seed, int trials);

// Halving dt moves every snapshot of every simulation fixture by < tol.
CheckResult check_step_refinement(double tol = 1e-5);

// Repeated runs agree and stop within 10 x |genes| sweeps on every fixture.
CheckResult check_determinism_termination();

// Consistency-or-Frozen after termination on random graphs of <= 8 genes.
CheckResult check_random_graph_invariant(std::uint64_t seed, int graphs = 200, int max_genes = 8);

}  // namespace regbin::testing
