#include "rpcm/pcm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace rpcm {

bool ConsistencyGraph::has_edge(int i, int j) const {
    const auto& adj = adjacency[i];
    return std::binary_search(adj.begin(), adj.end(), j);
}

double score_raw(const Association& a, const Association& b, const RadarScan& source,
                 const RadarScan& target) {
    const double d_source = (source.points[a.source_index] - source.points[b.source_index]).norm();
    const double d_target = (target.points[a.target_index] - target.points[b.target_index]).norm();
    return std::abs(d_source - d_target);
}

double sigma_v_squared(const Association& a, const Association& b, const RadarScan& source,
                       const RadarScan& target, double min_separation) {
    const Vec3 dp = source.points[a.source_index] - source.points[b.source_index];
    const Vec3 dr = target.points[a.target_index] - target.points[b.target_index];
    const double np2 = dp.squaredNorm();
    const double nr2 = dr.squaredNorm();
    if (np2 < min_separation * min_separation || nr2 < min_separation * min_separation) {
        throw DegeneratePair("sigma_v_squared: pair separation below " +
                             std::to_string(min_separation));
    }
    const Mat3 cov_source = source.covariances[a.source_index] + source.covariances[b.source_index];
    const Mat3 cov_target = target.covariances[a.target_index] + target.covariances[b.target_index];
    return dp.dot(cov_source * dp) / np2 + dr.dot(cov_target * dr) / nr2;
}

double score_normalized(const Association& a, const Association& b, const RadarScan& source,
                        const RadarScan& target, double min_separation) {
    const double d_source = (source.points[a.source_index] - source.points[b.source_index]).norm();
    const double d_target = (target.points[a.target_index] - target.points[b.target_index]).norm();
    const double v = d_source - d_target;
    return v * v / sigma_v_squared(a, b, source, target, min_separation);
}

ConsistencyGraph build_consistency_graph(const AssociationSet& associations,
                                         const RadarScan& source, const RadarScan& target,
                                         const PcmConfig& cfg) {
    const std::size_t n = associations.size();
    ConsistencyGraph g;
    g.vertex_count = n;
    g.adjacency.assign(n, {});

    const double min_sep2 = cfg.min_pair_separation * cfg.min_pair_separation;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Association& a = associations[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Association& b = associations[j];
            ++g.score_evaluations;

            if (a.source_index == b.source_index || a.target_index == b.target_index) {
                continue;
            }
            const Vec3 dp = source.points[a.source_index] - source.points[b.source_index];
            const Vec3 dr = target.points[a.target_index] - target.points[b.target_index];
            const double np2 = dp.squaredNorm();
            const double nr2 = dr.squaredNorm();
            if (np2 < min_sep2 || nr2 < min_sep2) {
                continue;
            }

            const double v = std::sqrt(np2) - std::sqrt(nr2);
            double score;
            if (cfg.score_kind == ScoreKind::Raw) {
                score = std::abs(v);
            } else {
                const Mat3 cov_src =
                    source.covariances[a.source_index] + source.covariances[b.source_index];
                const Mat3 cov_tgt =
                    target.covariances[a.target_index] + target.covariances[b.target_index];
                const double var = dp.dot(cov_src * dp) / np2 + dr.dot(cov_tgt * dr) / nr2;
                score = v * v / var;
            }

            if (score < cfg.threshold) {
                g.adjacency[i].push_back(static_cast<int>(j));
                g.adjacency[j].push_back(static_cast<int>(i));
                ++g.edge_count;
            }
        }
    }
    // Inner loop pushes j ascending; the mirrored entries also arrive in
    // ascending i, so lists are already sorted.
    return g;
}

std::vector<int> smallest_last_ordering(const ConsistencyGraph& g) {
    const int n = static_cast<int>(g.vertex_count);
    std::vector<int> order;
    order.reserve(n);
    if (n == 0) return order;

    std::vector<int> degree(n);
    int max_degree = 0;
    for (int v = 0; v < n; ++v) {
        degree[v] = static_cast<int>(g.adjacency[v].size());
        max_degree = std::max(max_degree, degree[v]);
    }

    // O(n + m) bucket queue: one FIFO list per residual degree, implemented as
    // intrusive doubly-linked lists. Initial fill is in index order; a vertex
    // whose degree drops moves to the tail of the lower bucket.
    std::vector<int> next(n, -1), prev(n, -1), bucket_of(n, 0);
    std::vector<int> head(max_degree + 1, -1), tail(max_degree + 1, -1);

    auto append = [&](int bucket, int v) {
        bucket_of[v] = bucket;
        next[v] = -1;
        prev[v] = tail[bucket];
        if (tail[bucket] >= 0) {
            next[tail[bucket]] = v;
        } else {
            head[bucket] = v;
        }
        tail[bucket] = v;
    };
    auto unlink = [&](int v) {
        const int bucket = bucket_of[v];
        if (prev[v] >= 0) {
            next[prev[v]] = next[v];
        } else {
            head[bucket] = next[v];
        }
        if (next[v] >= 0) {
            prev[next[v]] = prev[v];
        } else {
            tail[bucket] = prev[v];
        }
    };

    for (int v = 0; v < n; ++v) append(degree[v], v);

    std::vector<bool> removed(n, false);
    int current = 0;
    for (int step = 0; step < n; ++step) {
        while (head[current] < 0) ++current;
        const int v = head[current];
        unlink(v);
        removed[v] = true;
        order.push_back(v);

        for (int u : g.adjacency[v]) {
            if (removed[u]) continue;
            unlink(u);
            append(--degree[u], u);
        }
        // A neighbor may now sit one bucket below the cursor.
        if (current > 0) --current;
    }
    return order;
}

Clique greedy_clique(const ConsistencyGraph& g, const std::vector<int>& order) {
    assert(order.size() == g.vertex_count);
    Clique clique;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        const auto& adj = g.adjacency[v];
        bool adjacent_to_all = true;
        for (int c : clique) {
            if (!std::binary_search(adj.begin(), adj.end(), c)) {
                adjacent_to_all = false;
                break;
            }
        }
        if (adjacent_to_all) clique.push_back(v);
    }
    std::sort(clique.begin(), clique.end());

#ifndef NDEBUG
    for (std::size_t i = 0; i < clique.size(); ++i) {
        for (std::size_t j = i + 1; j < clique.size(); ++j) {
            assert(g.has_edge(clique[i], clique[j]));
        }
    }
#endif
    return clique;
}

namespace {

struct BronKerbosch {
    const std::vector<std::uint64_t>& adj;
    std::uint64_t best = 0;
    int best_size = 0;

    static int popcount(std::uint64_t x) { return static_cast<int>(__builtin_popcountll(x)); }

    void expand(std::uint64_t r, std::uint64_t p, std::uint64_t x) {
        if (p == 0 && x == 0) {
            const int size = popcount(r);
            if (size > best_size) {
                best_size = size;
                best = r;
            }
            return;
        }
        if (popcount(r) + popcount(p) <= best_size) return;

        // Pivot u maximizing |P & N(u)| over P | X.
        std::uint64_t px = p | x;
        int pivot = -1, pivot_cover = -1;
        for (std::uint64_t m = px; m != 0; m &= m - 1) {
            const int u = __builtin_ctzll(m);
            const int cover = popcount(p & adj[u]);
            if (cover > pivot_cover) {
                pivot_cover = cover;
                pivot = u;
            }
        }

        std::uint64_t candidates = p & ~adj[pivot];
        for (std::uint64_t m = candidates; m != 0; m &= m - 1) {
            const int v = __builtin_ctzll(m);
            const std::uint64_t bit = std::uint64_t{1} << v;
            expand(r | bit, p & adj[v], x & adj[v]);
            p &= ~bit;
            x |= bit;
        }
    }
};

}  // namespace

Clique max_clique_exact(const ConsistencyGraph& g) {
    const std::size_t n = g.vertex_count;
    if (n > 64) {
        throw TooLarge("max_clique_exact: " + std::to_string(n) + " vertices exceeds the 64 guard");
    }
    if (n == 0) return {};

    std::vector<std::uint64_t> adj(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        for (int u : g.adjacency[v]) {
            adj[v] |= std::uint64_t{1} << u;
        }
    }

    BronKerbosch bk{adj};
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    bk.expand(0, all, 0);

    Clique clique;
    for (std::uint64_t m = bk.best; m != 0; m &= m - 1) {
        clique.push_back(__builtin_ctzll(m));
    }
    return clique;
}

AssociationSet select_inliers(const AssociationSet& associations, const RadarScan& source,
                              const RadarScan& target, const PcmConfig& cfg) {
    if (associations.empty()) return {};
    const ConsistencyGraph g = build_consistency_graph(associations, source, target, cfg);
    const std::vector<int> order = smallest_last_ordering(g);
    const Clique clique = greedy_clique(g, order);

    AssociationSet out;
    out.reserve(clique.size());
    for (int v : clique) {
        out.push_back(associations[v]);
    }
    return out;
}

}  // namespace rpcm
