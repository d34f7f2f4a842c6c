#include "rpcm/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rpcm {

namespace {

// Lexicographic (squared distance, index): the brute-force tie-break order.
bool closer(double d2_a, int idx_a, double d2_b, int idx_b) {
    return d2_a < d2_b || (d2_a == d2_b && idx_a < idx_b);
}

}  // namespace

struct KdTree::NearestState {
    double best_d2 = std::numeric_limits<double>::infinity();
    int best_index = -1;
};

struct KdTree::KnnState {
    // Max-heap on (d2, index); front() is the current worst kept hit.
    std::vector<std::pair<double, int>> heap;
    int k = 0;

    static bool worse(const std::pair<double, int>& a, const std::pair<double, int>& b) {
        return closer(a.first, a.second, b.first, b.second);
    }

    bool full() const { return static_cast<int>(heap.size()) == k; }

    double worst_d2() const {
        return full() ? heap.front().first : std::numeric_limits<double>::infinity();
    }

    void offer(double d2, int index) {
        if (!full()) {
            heap.emplace_back(d2, index);
            std::push_heap(heap.begin(), heap.end(), worse);
        } else if (closer(d2, index, heap.front().first, heap.front().second)) {
            std::pop_heap(heap.begin(), heap.end(), worse);
            heap.back() = {d2, index};
            std::push_heap(heap.begin(), heap.end(), worse);
        }
    }
};

KdTree::KdTree(std::span<const Vec3> points)
    : points_(points.begin(), points.end()) {
    if (points_.empty()) {
        throw EmptyInput("KdTree: empty point list");
    }
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<int>(points_.size()));
}

int KdTree::build(int begin, int end) {
    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    if (end - begin <= kLeafSize) {
        Node& leaf = nodes_[node_index];
        leaf.begin = begin;
        leaf.end = end;
        return node_index;
    }

    // Split on the widest axis at the median.
    Vec3 lo = points_[order_[begin]];
    Vec3 hi = lo;
    for (int i = begin + 1; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });

    const double split = points_[order_[mid]][axis];
    const int left = build(begin, mid);
    const int right = build(mid, end);

    Node& node = nodes_[node_index];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return node_index;
}

void KdTree::search(int node_index, const Vec3& query, NearestState& state) const {
    const Node& node = nodes_[node_index];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            const double d2 = (points_[idx] - query).squaredNorm();
            if (closer(d2, idx, state.best_d2, state.best_index)) {
                state.best_d2 = d2;
                state.best_index = idx;
            }
        }
        return;
    }
    const double diff = query[node.axis] - node.split;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    search(near, query, state);
    // <= keeps equidistant candidates reachable so the index tie-break is exact.
    if (diff * diff <= state.best_d2) {
        search(far, query, state);
    }
}

void KdTree::search_knn(int node_index, const Vec3& query, KnnState& state) const {
    const Node& node = nodes_[node_index];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            state.offer((points_[idx] - query).squaredNorm(), idx);
        }
        return;
    }
    const double diff = query[node.axis] - node.split;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    search_knn(near, query, state);
    if (!state.full() || diff * diff <= state.worst_d2()) {
        search_knn(far, query, state);
    }
}

KdTree::Hit KdTree::nearest(const Vec3& query) const {
    NearestState state;
    search(root_, query, state);
    return {state.best_index, std::sqrt(state.best_d2)};
}

std::vector<KdTree::Hit> KdTree::knn(const Vec3& query, int k) const {
    KnnState state;
    state.k = std::min<int>(std::max(k, 0), static_cast<int>(points_.size()));
    if (state.k == 0) return {};
    state.heap.reserve(state.k);
    search_knn(root_, query, state);

    std::sort(state.heap.begin(), state.heap.end(), KnnState::worse);
    std::vector<Hit> hits;
    hits.reserve(state.heap.size());
    for (const auto& [d2, idx] : state.heap) {
        hits.push_back({idx, std::sqrt(d2)});
    }
    return hits;
}

AssociationSet putative_correspondences(const RadarScan& source, const KdTree& target_index,
                                        double max_distance) {
    AssociationSet out;
    out.reserve(source.size());
    for (std::size_t i = 0; i < source.points.size(); ++i) {
        const KdTree::Hit hit = target_index.nearest(source.points[i]);
        if (hit.distance <= max_distance) {
            out.push_back({static_cast<int>(i), hit.index, hit.distance});
        }
    }
    return out;
}

AssociationSet putative_correspondences(const RadarScan& source, const RadarScan& target,
                                        double max_distance) {
    if (source.empty() || target.empty()) {
        throw EmptyInput("putative_correspondences: empty scan");
    }
    const KdTree index(target.points);
    return putative_correspondences(source, index, max_distance);
}

}  // namespace rpcm
