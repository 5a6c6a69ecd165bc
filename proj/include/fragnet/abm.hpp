#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fragnet/rng.hpp"
#include "fragnet/series.hpp"
#include "fragnet/sim_config.hpp"

namespace fragnet {

enum class NodeType : std::uint8_t { type_a, type_b };
enum class EdgeOrigin : std::uint8_t { primary, secondary, rewired };

struct EdgeRecord {
    std::uint32_t u = 0, v = 0;  // endpoints, u < v
    int birth = 0;               // step the tie was formed (or last rewired)
    EdgeOrigin origin = EdgeOrigin::primary;
    bool similar = false;        // endpoint types equal

    /// kernel classification: rewired ties decay under the biased kernel
    EdgeClass kernel_class() const {
        if (origin == EdgeOrigin::rewired)
            return EdgeClass::biased;
        return similar ? EdgeClass::similar : EdgeClass::dissimilar;
    }
};

/// Undirected simple graph with typed nodes and aged edges. Adjacency lists
/// and the class counters are maintained incrementally; verify_network
/// recomputes everything from scratch.
struct NetworkState {
    int t = 0;
    std::vector<NodeType> types;
    std::vector<EdgeRecord> edges;
    std::vector<std::vector<std::uint32_t>> adj;
    std::int64_t n_similar = 0;
    std::int64_t n_dissimilar = 0;

    std::uint32_t n() const { return static_cast<std::uint32_t>(types.size()); }
    std::size_t degree(std::uint32_t i) const { return adj[i].size(); }
    bool has_edge(std::uint32_t a, std::uint32_t b) const;
    void add_edge(std::uint32_t a, std::uint32_t b, int birth, EdgeOrigin origin);
    void remove_edge_at(std::size_t idx);  // swap-remove

    /// dissimilar-neighbor fraction; 0.5 for isolated nodes (uninformed prior)
    double node_mix(std::uint32_t i) const;
};

/// Per-step accounting of the four phases.
struct StepStats {
    std::int64_t drawn_similar = 0;      // preferential draws that came up Similar
    std::int64_t drawn_total = 0;
    std::int64_t formed_similar = 0;     // committed primary ties by class
    std::int64_t formed_dissimilar = 0;
    std::int64_t formed_secondary_similar = 0;
    std::int64_t formed_secondary_dissimilar = 0;
    std::int64_t skipped_exhaustion = 0; // no eligible partner of the drawn type
    std::int64_t skipped_collision = 0;  // another node committed the same tie first
    std::int64_t skipped_secondary = 0;  // no eligible two-hop partner
    std::int64_t rewired = 0;
    std::int64_t rewire_exhausted = 0;   // rewiring drawn but no dissimilar partner free
    std::int64_t decayed = 0;

    std::int64_t skipped_total() const {
        return skipped_exhaustion + skipped_collision + skipped_secondary;
    }
    std::int64_t formed_total() const {
        return formed_similar + formed_dissimilar + formed_secondary_similar +
               formed_secondary_dissimilar;
    }
};

/// One formation-phase decision, exposed for instrumented runs.
struct DrawRecord {
    std::uint32_t node = 0;
    double x_i = 0.0;          // mix the node acted on
    bool want_similar = false; // outcome of the preference draw
};

/// t=0 network: a uniformly random perfect matching over the typed nodes
/// (every node has degree exactly 1). Requires even n >= 4.
NetworkState init_network(const SimConfig& cfg, Rng& rng);

/// Uniform draw over nodes of the required similarity class that are neither
/// `node` itself nor already adjacent to it. Returns nothing (and consumes no
/// randomness) when no candidate exists.
std::optional<std::uint32_t> select_partner(const NetworkState& net, std::uint32_t node,
                                            bool want_similar, Rng& rng);

/// One synchronous step, four phases in fixed order:
///   1. formation: every node draws Similar with prob f(x_i) against the
///      start-of-step state (the first preferential step uses the uninformed
///      prior x_i = 0.5, as the matching edge carries no preference signal),
///      picks a uniform eligible partner, and the intents are committed in
///      node-id order; a tie that already got committed this step is skipped
///   2. weak ties (weak_ties mode): every node with a committed primary tie
///      draws one uniform neighbor-of-the-new-neighbor (excluding itself and
///      current neighbors; optionally restricted to dissimilar partners)
///   3. rewiring (bias mode): every pre-existing similar tie is rewired with
///      prob phi*(1-k_b(age)); a uniformly chosen endpoint keeps the tie and
///      the far end moves to a uniform dissimilar non-neighbor; birth resets
///   4. decay: every pre-existing tie survives with
///      conditional_survival(kernel, age, decay_mode); one draw per tie
/// Randomness is consumed in exactly the order written above, node-id order
/// within phases 1-2 and edge-store order within phases 3-4. When `draws` is
/// given, every phase-1 decision is appended to it (identical dynamics).
StepStats abm_step(NetworkState& net, const SimConfig& cfg, Rng& rng,
                   std::vector<DrawRecord>* draws = nullptr);

struct ReplicaResult {
    int replica = 0;
    std::uint64_t seed = 0;              // derived stream seed
    MetricSeries series;                 // rows t = 0..horizon
    std::vector<StepStats> step_stats;   // entries for t = 1..horizon
    double x_hat_0 = 0.0;
};

/// One full replica with its derived seed; deterministic for fixed
/// (config, replica index).
ReplicaResult run_abm_replica(const SimConfig& cfg, int replica);

/// All replicas, sequentially, ordered by replica index. Callers that want
/// parallelism schedule run_abm_replica themselves; results are independent.
std::vector<ReplicaResult> run_abm(const SimConfig& cfg);

struct IntegrityReport {
    bool ok = true;
    std::string problem;
};

/// Full structural audit: no self-loops, no duplicate edges, endpoint order,
/// class flags consistent with node types, adjacency lists in sync with the
/// edge store, counters matching a recount.
IntegrityReport verify_network(const NetworkState& net);

}  // namespace fragnet
