#pragma once

#include <string>
#include <vector>

namespace fragnet {

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;  // failure reason, or a measured figure of merit
};

/// The full invariant suite over the shipped defaults: response-curve shape,
/// kernel bands and ordering, recurrence identities, engine integrity and
/// determinism, metric consistency, and the IO determinism contract. The
/// check subcommand runs this and maps any failure to a nonzero exit.
std::vector<CheckResult> run_all_checks();

}  // namespace fragnet
