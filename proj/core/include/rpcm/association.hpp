#pragma once

#include <span>
#include <vector>

#include "rpcm/radar_model.hpp"

namespace rpcm {

/// One putative correspondence: source point index, matched target point
/// index, and the Euclidean distance at generation time.
struct Association {
    int source_index = -1;
    int target_index = -1;
    double distance = 0.0;
};

/// Ordered putative correspondences. At most one entry per source index;
/// target indices may repeat (1-NN matching).
using AssociationSet = std::vector<Association>;

/// Exact nearest-neighbor index over a fixed point set (k-d tree with median
/// splits). Results are identical to a brute-force linear scan, including
/// tie-breaking: among equidistant points the lowest index wins.
///
/// Immutable after construction; concurrent queries are safe.
class KdTree {
public:
    /// Throws EmptyInput for an empty point list.
    explicit KdTree(std::span<const Vec3> points);

    struct Hit {
        int index = -1;
        double distance = 0.0;
    };

    Hit nearest(const Vec3& query) const;

    /// The k nearest points sorted by (distance, index) ascending. Returns
    /// fewer than k hits when the tree holds fewer points.
    std::vector<Hit> knn(const Vec3& query, int k) const;

    std::size_t size() const { return points_.size(); }

private:
    struct Node {
        int axis = -1;  // -1 marks a leaf
        double split = 0.0;
        int left = -1;
        int right = -1;
        int begin = 0;  // leaf range into order_
        int end = 0;
    };

    int build(int begin, int end);

    std::vector<Vec3> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;

    static constexpr int kLeafSize = 8;

    struct NearestState;
    struct KnnState;
    void search(int node, const Vec3& query, NearestState& state) const;
    void search_knn(int node, const Vec3& query, KnnState& state) const;
};

/// 1-nearest-neighbor putative correspondences with a maximum-distance gate:
/// for every source point, the closest target point, kept iff the distance
/// is <= max_distance. May return an empty set.
AssociationSet putative_correspondences(const RadarScan& source, const RadarScan& target,
                                        double max_distance);

/// Same, reusing a prebuilt index over the target points.
AssociationSet putative_correspondences(const RadarScan& source, const KdTree& target_index,
                                        double max_distance);

}  // namespace rpcm
