#include "fragnet/abm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace fragnet {

void SimConfig::validate() const {
    if (n < 4)
        throw std::invalid_argument("config: run.n must be >= 4");
    if (n % 2 != 0)
        throw std::invalid_argument("config: run.n must be even (t=0 matching pairs all nodes)");
    if (horizon < 0)
        throw std::invalid_argument("config: run.horizon must be >= 0");
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::invalid_argument(
            "config: run.phi must lie in [0,1]; rewiring more similar ties than exist is "
            "contradictory");
    if (replicas < 1)
        throw std::invalid_argument("config: run.replicas must be >= 1");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("config: run.eps must lie in (0,1)");
    const int first_group = static_cast<int>(std::floor(n * type_ratio));
    if (first_group < 2 || first_group > n - 2)
        throw std::invalid_argument(
            "config: run.type_ratio must leave at least two nodes in each group");
}

bool NetworkState::has_edge(std::uint32_t a, std::uint32_t b) const {
    const auto& list = adj[a].size() <= adj[b].size() ? adj[a] : adj[b];
    const std::uint32_t probe = adj[a].size() <= adj[b].size() ? b : a;
    return std::find(list.begin(), list.end(), probe) != list.end();
}

void NetworkState::add_edge(std::uint32_t a, std::uint32_t b, int birth, EdgeOrigin origin) {
    if (a == b)
        throw std::logic_error("network: self-loop rejected");
    EdgeRecord rec;
    rec.u = std::min(a, b);
    rec.v = std::max(a, b);
    rec.birth = birth;
    rec.origin = origin;
    rec.similar = types[a] == types[b];
    edges.push_back(rec);
    adj[a].push_back(b);
    adj[b].push_back(a);
    (rec.similar ? n_similar : n_dissimilar) += 1;
}

void NetworkState::remove_edge_at(std::size_t idx) {
    const EdgeRecord rec = edges[idx];
    const auto drop = [this](std::uint32_t from, std::uint32_t gone) {
        auto& list = adj[from];
        auto it = std::find(list.begin(), list.end(), gone);
        *it = list.back();
        list.pop_back();
    };
    drop(rec.u, rec.v);
    drop(rec.v, rec.u);
    (rec.similar ? n_similar : n_dissimilar) -= 1;
    edges[idx] = edges.back();
    edges.pop_back();
}

double NetworkState::node_mix(std::uint32_t i) const {
    if (adj[i].empty())
        return 0.5;
    std::size_t dis = 0;
    for (std::uint32_t nb : adj[i])
        if (types[nb] != types[i])
            ++dis;
    return static_cast<double>(dis) / static_cast<double>(adj[i].size());
}

NetworkState init_network(const SimConfig& cfg, Rng& rng) {
    cfg.validate();
    NetworkState net;
    net.t = 0;
    const auto n = static_cast<std::uint32_t>(cfg.n);
    const auto first_group = static_cast<std::uint32_t>(std::floor(cfg.n * cfg.type_ratio));
    net.types.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        net.types[i] = i < first_group ? NodeType::type_a : NodeType::type_b;
    net.adj.assign(n, {});

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (std::uint32_t i = n - 1; i >= 1; --i) {
        const auto j = static_cast<std::uint32_t>(rng.uniform_below(i + 1));
        std::swap(order[i], order[j]);
    }
    net.edges.reserve(n / 2);
    for (std::uint32_t k = 0; k < n; k += 2)
        net.add_edge(order[k], order[k + 1], 0, EdgeOrigin::primary);
    return net;
}

std::optional<std::uint32_t> select_partner(const NetworkState& net, std::uint32_t node,
                                            bool want_similar, Rng& rng) {
    const NodeType own = net.types[node];
    std::vector<std::uint32_t> candidates;
    candidates.reserve(net.n());
    // degrees are small relative to n, so a membership scan per candidate
    // would be wasteful; mark the exclusion set once instead
    thread_local std::vector<char> excluded;
    excluded.assign(net.n(), 0);
    excluded[node] = 1;
    for (std::uint32_t nb : net.adj[node])
        excluded[nb] = 1;
    for (std::uint32_t cand = 0; cand < net.n(); ++cand) {
        if (excluded[cand])
            continue;
        const bool similar = net.types[cand] == own;
        if (similar == want_similar)
            candidates.push_back(cand);
    }
    if (candidates.empty())
        return std::nullopt;
    return candidates[rng.uniform_below(candidates.size())];
}

StepStats abm_step(NetworkState& net, const SimConfig& cfg, Rng& rng,
                   std::vector<DrawRecord>* draws) {
    const int t_new = net.t + 1;
    StepStats stats;

    // phase 1: formation. All draws happen against the unmodified state,
    // then intents commit in node-id order.
    struct Intent {
        std::uint32_t from, to;
        bool valid = false;
    };
    std::vector<Intent> intents(net.n());
    for (std::uint32_t i = 0; i < net.n(); ++i) {
        const double x_i = net.t == 0 ? 0.5 : net.node_mix(i);
        const bool want_similar = rng.uniform01() < cfg.f(x_i);
        if (draws)
            draws->push_back({i, x_i, want_similar});
        ++stats.drawn_total;
        if (want_similar)
            ++stats.drawn_similar;
        const auto partner = select_partner(net, i, want_similar, rng);
        if (!partner) {
            ++stats.skipped_exhaustion;
            continue;
        }
        intents[i] = {i, *partner, true};
    }
    std::vector<std::uint32_t> committed_to(net.n(), std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t i = 0; i < net.n(); ++i) {
        if (!intents[i].valid)
            continue;
        const std::uint32_t j = intents[i].to;
        if (net.has_edge(i, j)) {
            ++stats.skipped_collision;
            continue;
        }
        net.add_edge(i, j, t_new, EdgeOrigin::primary);
        committed_to[i] = j;
        (net.types[i] == net.types[j] ? stats.formed_similar : stats.formed_dissimilar) += 1;
    }

    // phase 2: weak ties through the fresh primary neighbor
    if (cfg.mode == Mode::weak_ties) {
        std::vector<std::uint32_t> candidates;
        for (std::uint32_t i = 0; i < net.n(); ++i) {
            const std::uint32_t j = committed_to[i];
            if (j == std::numeric_limits<std::uint32_t>::max())
                continue;
            candidates.clear();
            for (std::uint32_t h : net.adj[j]) {
                if (h == i || net.has_edge(i, h))
                    continue;
                if (cfg.strict_dissimilar && net.types[h] == net.types[i])
                    continue;
                candidates.push_back(h);
            }
            if (candidates.empty()) {
                ++stats.skipped_secondary;
                continue;
            }
            const std::uint32_t h = candidates[rng.uniform_below(candidates.size())];
            net.add_edge(i, h, t_new, EdgeOrigin::secondary);
            (net.types[i] == net.types[h] ? stats.formed_secondary_similar
                                          : stats.formed_secondary_dissimilar) += 1;
        }
    }

    // phase 3: rewiring of aged similar ties
    if (cfg.mode == Mode::bias && cfg.phi > 0.0) {
        const DecayKernel& kb = cfg.kernels.biased();
        for (std::size_t e = 0; e < net.edges.size(); ++e) {
            // copy: select_partner below must not see a half-updated record
            const EdgeRecord rec = net.edges[e];
            if (rec.birth >= t_new || !rec.similar)
                continue;
            const std::int64_t age = t_new - rec.birth;
            const double prob = cfg.phi * (1.0 - kb.retention(age));
            if (!(rng.uniform01() < prob))
                continue;
            const std::uint32_t keep = rng.uniform01() < 0.5 ? rec.u : rec.v;
            const std::uint32_t far = keep == rec.u ? rec.v : rec.u;
            const auto partner = select_partner(net, keep, /*want_similar=*/false, rng);
            if (!partner) {
                ++stats.rewire_exhausted;
                continue;
            }
            const auto drop = [&net](std::uint32_t from, std::uint32_t gone) {
                auto& list = net.adj[from];
                auto it = std::find(list.begin(), list.end(), gone);
                *it = list.back();
                list.pop_back();
            };
            drop(keep, far);
            drop(far, keep);
            net.adj[keep].push_back(*partner);
            net.adj[*partner].push_back(keep);
            EdgeRecord& live = net.edges[e];
            live.u = std::min(keep, *partner);
            live.v = std::max(keep, *partner);
            live.birth = t_new;
            live.origin = EdgeOrigin::rewired;
            live.similar = false;
            net.n_similar -= 1;
            net.n_dissimilar += 1;
            ++stats.rewired;
        }
    }

    // phase 4: decay of everything older than this step
    for (std::size_t e = 0; e < net.edges.size();) {
        const EdgeRecord& rec = net.edges[e];
        if (rec.birth >= t_new) {
            ++e;
            continue;
        }
        const std::int64_t age = t_new - rec.birth;
        const DecayKernel& k = cfg.kernels.for_class(rec.kernel_class());
        const double survive = k.conditional_survival(age, cfg.decay_mode);
        if (rng.uniform01() < survive) {
            ++e;
        } else {
            net.remove_edge_at(e);
            ++stats.decayed;
        }
    }

    net.t = t_new;
    return stats;
}

namespace {

MetricRow observe(const NetworkState& net, const StepStats* stats) {
    MetricRow row;
    row.t = net.t;
    const std::int64_t total = net.n_similar + net.n_dissimilar;
    row.x_hat = total > 0 ? static_cast<double>(net.n_dissimilar) / static_cast<double>(total)
                          : std::numeric_limits<double>::quiet_NaN();
    row.mean_degree = 2.0 * static_cast<double>(total) / static_cast<double>(net.n());
    row.n_similar = static_cast<double>(net.n_similar);
    row.n_dissimilar = static_cast<double>(net.n_dissimilar);
    row.skipped = stats ? stats->skipped_total() : 0;
    row.rewired = stats ? stats->rewired : 0;
    return row;
}

}  // namespace

ReplicaResult run_abm_replica(const SimConfig& cfg, int replica) {
    cfg.validate();
    ReplicaResult result;
    result.replica = replica;
    result.seed = derived_seed(cfg.seed, static_cast<std::uint64_t>(replica));
    Rng rng(result.seed);

    NetworkState net = init_network(cfg, rng);
    result.series.provenance = "abm";
    result.series.replica = replica;
    result.series.rows.reserve(static_cast<std::size_t>(cfg.horizon) + 1);
    result.series.rows.push_back(observe(net, nullptr));
    result.x_hat_0 = result.series.rows.front().x_hat;
    result.step_stats.reserve(static_cast<std::size_t>(cfg.horizon));
    for (int t = 1; t <= cfg.horizon; ++t) {
        const StepStats stats = abm_step(net, cfg, rng);
        result.step_stats.push_back(stats);
        result.series.rows.push_back(observe(net, &stats));
    }
    return result;
}

std::vector<ReplicaResult> run_abm(const SimConfig& cfg) {
    std::vector<ReplicaResult> results;
    results.reserve(static_cast<std::size_t>(cfg.replicas));
    for (int r = 0; r < cfg.replicas; ++r)
        results.push_back(run_abm_replica(cfg, r));
    return results;
}

IntegrityReport verify_network(const NetworkState& net) {
    const auto fail = [](std::string msg) {
        IntegrityReport r;
        r.ok = false;
        r.problem = std::move(msg);
        return r;
    };

    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::int64_t sim = 0, dis = 0;
    for (const auto& rec : net.edges) {
        if (rec.u >= rec.v)
            return fail("endpoint order violated (or self-loop)");
        if (rec.v >= net.n())
            return fail("endpoint out of range");
        if (!seen.insert({rec.u, rec.v}).second)
            return fail("duplicate edge");
        if (rec.similar != (net.types[rec.u] == net.types[rec.v]))
            return fail("class flag inconsistent with node types");
        if (rec.birth < 0 || rec.birth > net.t)
            return fail("birth outside [0, t]");
        (rec.similar ? sim : dis) += 1;
    }
    if (sim != net.n_similar || dis != net.n_dissimilar)
        return fail("class counters out of sync");

    std::size_t adj_total = 0;
    for (std::uint32_t i = 0; i < net.n(); ++i) {
        adj_total += net.adj[i].size();
        for (std::uint32_t nb : net.adj[i]) {
            if (nb == i)
                return fail("adjacency self-reference");
            if (!seen.count({std::min(i, nb), std::max(i, nb)}))
                return fail("adjacency entry without edge record");
        }
    }
    if (adj_total != 2 * net.edges.size())
        return fail("adjacency size does not match edge store");
    return {};
}

}  // namespace fragnet
