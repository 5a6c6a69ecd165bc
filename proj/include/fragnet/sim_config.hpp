#pragma once

#include <cstdint>

#include "fragnet/decay.hpp"
#include "fragnet/homophily.hpp"

namespace fragnet {

/// Dynamics variant:
///   base      - one preferential primary tie per node per step
///   weak_ties - primary tie plus one secondary tie through the new neighbor
///   bias      - base dynamics plus rewiring of similar ties toward
///               dissimilar partners, controlled by phi
enum class Mode { base, weak_ties, bias };

/// Full run description shared by the deterministic integrator, the agent
/// engine and the CLI. Members built from validated types; validate() covers
/// the cross-field rules.
struct SimConfig {
    HomophilyFunction f;            // power(0.5) by default
    KernelTriple kernels;           // weibull(1.2, 1.5, 2.0, gamma 0.5)
    Mode mode = Mode::base;
    DecayMode decay_mode = DecayMode::per_step;
    double phi = 0.0;               // rewiring budget, [0,1], bias mode only
    int n = 1000;                   // agent count, even, >= 4
    int horizon = 200;              // steps to run
    std::uint64_t seed = 1;         // master seed; replicas derive from it
    int replicas = 1;
    double eps = 0.01;              // fragmentation threshold on x
    double type_ratio = 0.5;        // fraction of nodes in the first group
    bool strict_dissimilar = false; // restrict secondary ties to dissimilar partners
    bool mf_reference = false;      // attach a mean-field comparison to agent runs

    void validate() const;          // throws std::invalid_argument naming the field
};

}  // namespace fragnet
