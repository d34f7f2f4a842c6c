#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "rpcm/association.hpp"

using namespace rpcm;

namespace {

// Brute-force 1-NN with the lowest-index tie-break.
int linear_nearest(const std::vector<Vec3>& points, const Vec3& query) {
    int best = 0;
    double best_d2 = (points[0] - query).squaredNorm();
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double d2 = (points[i] - query).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

TEST_SUITE_BEGIN("association");

TEST_CASE("single-point tree answers every query") {
    const std::vector<Vec3> one = {Vec3(3, -2, 1)};
    const KdTree tree(one);
    const auto hit = tree.nearest(Vec3(100, 100, 100));
    CHECK(hit.index == 0);
}

TEST_CASE("cube corners") {
    std::vector<Vec3> corners;
    for (int x = 0; x <= 1; ++x)
        for (int y = 0; y <= 1; ++y)
            for (int z = 0; z <= 1; ++z) corners.emplace_back(x, y, z);
    const KdTree tree(corners);
    const auto hit = tree.nearest(Vec3(0.1, 0, 0));
    CHECK(hit.index == 0);
    CHECK(hit.distance == doctest::Approx(0.1));
}

TEST_CASE("kd-tree matches linear scan on random data") {
    std::mt19937_64 rng(31);
    const auto points = test::random_points(rng, 500);
    const KdTree tree(points);
    for (int q = 0; q < 100; ++q) {
        const Vec3 query = test::random_points(rng, 1)[0];
        const auto hit = tree.nearest(query);
        CHECK(hit.index == linear_nearest(points, query));
    }
}

TEST_CASE("kd-tree tie-break on duplicated points picks the lowest index") {
    std::vector<Vec3> points = {Vec3(5, 5, 5), Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(5, 5, 5)};
    const KdTree tree(points);
    CHECK(tree.nearest(Vec3(0.1, 0, 0)).index == 1);
    CHECK(tree.nearest(Vec3(5, 5, 5)).index == 0);
}

TEST_CASE("knn is sorted and matches brute force") {
    std::mt19937_64 rng(32);
    const auto points = test::random_points(rng, 200);
    const KdTree tree(points);
    for (int q = 0; q < 30; ++q) {
        const Vec3 query = test::random_points(rng, 1)[0];
        const auto hits = tree.knn(query, 10);
        REQUIRE(hits.size() == 10);
        // Ordered by distance.
        for (std::size_t i = 1; i < hits.size(); ++i) {
            CHECK(hits[i - 1].distance <= hits[i].distance);
        }
        // Brute-force top 10.
        std::vector<std::pair<double, int>> all;
        for (std::size_t i = 0; i < points.size(); ++i) {
            all.emplace_back((points[i] - query).norm(), static_cast<int>(i));
        }
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i < hits.size(); ++i) {
            CHECK(hits[i].index == all[i].second);
        }
    }
}

TEST_CASE("empty input is rejected") {
    CHECK_THROWS_AS(KdTree(std::vector<Vec3>{}), EmptyInput);
}

TEST_CASE("identical scans associate index to index at distance zero") {
    std::mt19937_64 rng(33);
    const RadarScan scan = test::make_scan(test::random_points(rng, 50));
    const AssociationSet set = putative_correspondences(scan, scan, 10.0);
    REQUIRE(set.size() == 50);
    for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(set[i].source_index == static_cast<int>(i));
        CHECK(set[i].target_index == static_cast<int>(i));
        CHECK(set[i].distance == 0.0);
    }
}

TEST_CASE("closest target wins within the gate") {
    const RadarScan source = test::make_scan({Vec3(0, 0, 0)});
    const RadarScan target = test::make_scan({Vec3(0.5, 0, 0), Vec3(2, 0, 0)});
    const AssociationSet set = putative_correspondences(source, target, 10.0);
    REQUIRE(set.size() == 1);
    CHECK(set[0].source_index == 0);
    CHECK(set[0].target_index == 0);
    CHECK(set[0].distance == doctest::Approx(0.5));
}

TEST_CASE("gate excludes distant matches") {
    const RadarScan source = test::make_scan({Vec3(0, 0, 0)});
    const RadarScan target = test::make_scan({Vec3(11, 0, 0)});
    CHECK(putative_correspondences(source, target, 10.0).empty());
}

TEST_CASE("putative correspondences equal the brute-force definition") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> size_dist(1, 60);
        const RadarScan source = test::make_scan(test::random_points(rng, size_dist(rng)));
        const RadarScan target = test::make_scan(test::random_points(rng, size_dist(rng)));
        const double gate = 8.0;

        const AssociationSet fast = putative_correspondences(source, target, gate);

        AssociationSet brute;
        for (std::size_t i = 0; i < source.size(); ++i) {
            const int j = linear_nearest(target.points, source.points[i]);
            const double d = (source.points[i] - target.points[j]).norm();
            if (d <= gate) {
                brute.push_back({static_cast<int>(i), j, d});
            }
        }

        REQUIRE(fast.size() == brute.size());
        CHECK(fast.size() <= source.size());
        for (std::size_t k = 0; k < fast.size(); ++k) {
            CHECK(fast[k].source_index == brute[k].source_index);
            CHECK(fast[k].target_index == brute[k].target_index);
            CHECK(fast[k].distance == doctest::Approx(brute[k].distance).epsilon(1e-12));
            CHECK(fast[k].distance <= gate);
        }
    }
}

TEST_SUITE_END();
