#pragma once

#include <cstdint>
#include <vector>

#include "rpcm/association.hpp"

namespace rpcm {

enum class ScoreKind {
    Raw,         // |d_source - d_target|, thresholded in meters (tau)
    Normalized,  // v^2 / sigma_v^2, unitless threshold (alpha)
};

struct PcmConfig {
    ScoreKind score_kind = ScoreKind::Raw;
    /// Edge threshold: tau in meters for Raw, alpha (unitless) for Normalized.
    double threshold = 0.25;
    /// Pairs whose source-side or target-side separation falls below this get
    /// no edge: the distance gradient is undefined at coincident points.
    double min_pair_separation = 1e-6;
};

/// Undirected consistency graph over an association set. Vertex i corresponds
/// to association i, in input order. Adjacency lists are sorted.
struct ConsistencyGraph {
    std::size_t vertex_count = 0;
    std::vector<std::vector<int>> adjacency;
    std::size_t edge_count = 0;
    /// Number of candidate pairs scored during construction: n(n-1)/2.
    std::uint64_t score_evaluations = 0;

    bool has_edge(int i, int j) const;
};

/// Sorted vertex indices; every pair adjacent in the originating graph.
using Clique = std::vector<int>;

/// Raw pairwise consistency score: | ||p-q|| - ||r-s|| |, meters. Invariant
/// under rigid motion of either scan; symmetric in (a, b).
double score_raw(const Association& a, const Association& b, const RadarScan& source,
                 const RadarScan& target);

/// First-order variance of the pairwise distance-difference residual
/// v = ||p-q|| - ||r-s||, from the four per-point covariances projected onto
/// the two pair directions.
/// Throws DegeneratePair when a pair separation is below min_separation.
double sigma_v_squared(const Association& a, const Association& b, const RadarScan& source,
                       const RadarScan& target, double min_separation = 1e-6);

/// Uncertainty-normalized consistency score v^2 / sigma_v^2 (unitless).
double score_normalized(const Association& a, const Association& b, const RadarScan& source,
                        const RadarScan& target, double min_separation = 1e-6);

/// Scores all n(n-1)/2 association pairs and connects (i, j) iff the score is
/// strictly below cfg.threshold and the two associations share neither their
/// source nor their target point (index inequality and separation >=
/// cfg.min_pair_separation).
ConsistencyGraph build_consistency_graph(const AssociationSet& associations,
                                         const RadarScan& source, const RadarScan& target,
                                         const PcmConfig& cfg);

/// Smallest-last ordering: repeatedly remove a vertex of minimum residual
/// degree (ties broken by lowest index), recording the removal order.
std::vector<int> smallest_last_ordering(const ConsistencyGraph& g);

/// Walks the ordering in reverse and greedily adds each vertex adjacent to
/// all current members. Deterministic; returns at least one vertex on a
/// non-empty graph.
Clique greedy_clique(const ConsistencyGraph& g, const std::vector<int>& order);

/// Exact maximum clique via Bron-Kerbosch with pivoting. Test oracle only;
/// throws TooLarge above 64 vertices.
Clique max_clique_exact(const ConsistencyGraph& g);

/// Full PCM inlier selection: build graph, order smallest-last, grow a greedy
/// clique, and return the associations at the clique's vertices in input
/// order. May return fewer associations than min usable by a solver; the
/// caller decides the fallback.
AssociationSet select_inliers(const AssociationSet& associations, const RadarScan& source,
                              const RadarScan& target, const PcmConfig& cfg);

}  // namespace rpcm
