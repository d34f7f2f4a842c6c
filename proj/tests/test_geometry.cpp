#include <doctest.h>

#include "helpers.hpp"
#include "rpcm/geometry.hpp"

using namespace rpcm;
using test::kPi;
using test::random_transform;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("compose identity and translations") {
    const RigidTransform t = RigidTransform::from_parts(rot_z(0.3), Vec3(1, 2, 3));
    const RigidTransform composed = compose(RigidTransform::identity(), t);
    CHECK(test::transform_distance(composed, t) < 1e-15);

    const RigidTransform a = RigidTransform::from_translation(Vec3(1, 0, 0));
    const RigidTransform b = RigidTransform::from_translation(Vec3(0, 2, 0));
    CHECK((compose(a, b).translation - Vec3(1, 2, 0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("compose rotations: Rz(90) twice is Rz(180)") {
    const RigidTransform rz90 = RigidTransform::from_parts(rot_z(kPi / 2), Vec3::Zero());
    const RigidTransform twice = compose(rz90, rz90);
    CHECK((twice.rotation - rot_z(kPi)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("inverse basics") {
    CHECK(test::transform_distance(inverse(RigidTransform::identity()),
                                   RigidTransform::identity()) == 0.0);
    const RigidTransform t = RigidTransform::from_translation(Vec3(1, 2, 3));
    CHECK((inverse(t).translation - Vec3(-1, -2, -3)).norm() == doctest::Approx(0.0));

    const RigidTransform rt =
        compose(RigidTransform::from_parts(rot_z(kPi / 2), Vec3::Zero()),
                RigidTransform::from_translation(Vec3(1, 0, 0)));
    const RigidTransform round_trip = compose(inverse(rt), rt);
    CHECK(round_trip.translation.norm() < 1e-9);
    CHECK(rotation_angle(round_trip) < 1e-9);
}

TEST_CASE("apply") {
    CHECK((apply(RigidTransform::identity(), Vec3(1, 2, 3)) - Vec3(1, 2, 3)).norm() == 0.0);
    CHECK((apply(RigidTransform::from_translation(Vec3(0, 0, 5)), Vec3(1, 1, 1)) -
           Vec3(1, 1, 6))
              .norm() == 0.0);
    const RigidTransform rz90 = RigidTransform::from_parts(rot_z(kPi / 2), Vec3::Zero());
    CHECK((apply(rz90, Vec3(1, 0, 0)) - Vec3(0, 1, 0)).norm() < 1e-15);
}

TEST_CASE("rotation_angle") {
    CHECK(rotation_angle(RigidTransform::identity()) == 0.0);
    CHECK(rotation_angle(RigidTransform::from_parts(rot_z(kPi / 2), Vec3::Zero())) ==
          doctest::Approx(kPi / 2));
    CHECK(rotation_angle(RigidTransform::from_parts(rot_x(kPi / 6) * rot_y(0.0), Vec3::Zero())) ==
          doctest::Approx(kPi / 6));
}

TEST_CASE("compose then invert is identity on random transforms") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        const RigidTransform t = random_transform(rng);
        const RigidTransform id = compose(t, inverse(t));
        CHECK(id.translation.norm() < 1e-9);
        CHECK(rotation_angle(id) < 1e-9);
    }
}

TEST_CASE("compose is associative") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const RigidTransform a = random_transform(rng);
        const RigidTransform b = random_transform(rng);
        const RigidTransform c = random_transform(rng);
        CHECK(test::transform_distance(compose(compose(a, b), c), compose(a, compose(b, c))) <
              1e-9);
    }
}

TEST_CASE("apply preserves pairwise distances") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const RigidTransform t = random_transform(rng);
        const auto points = test::random_points(rng, 10);
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            const double before = (points[i] - points[i + 1]).norm();
            const double after = (apply(t, points[i]) - apply(t, points[i + 1])).norm();
            CHECK(std::abs(before - after) < 1e-9);
        }
    }
}

TEST_CASE("estimate_rigid_pt2pt identical sets give identity") {
    std::mt19937_64 rng(3);
    const auto points = test::random_points(rng, 8);
    const RigidTransform t = estimate_rigid_pt2pt(points, points);
    CHECK(t.translation.norm() < 1e-12);
    CHECK(rotation_angle(t) < 1e-12);
}

TEST_CASE("estimate_rigid_pt2pt pure translation") {
    std::mt19937_64 rng(4);
    const auto source = test::random_points(rng, 4);
    std::vector<Vec3> target;
    for (const Vec3& p : source) target.push_back(p + Vec3(1, 2, 3));
    const RigidTransform t = estimate_rigid_pt2pt(source, target);
    CHECK((t.translation - Vec3(1, 2, 3)).norm() < 1e-12);
    CHECK(rotation_angle(t) < 1e-12);
}

TEST_CASE("estimate_rigid_pt2pt recovers random transforms exactly") {
    std::mt19937_64 rng(5);
    for (int seed = 0; seed < 100; ++seed) {
        const RigidTransform truth = random_transform(rng);
        const auto source = test::random_points(rng, 10);
        std::vector<Vec3> target;
        for (const Vec3& p : source) target.push_back(apply(truth, p));
        const RigidTransform est = estimate_rigid_pt2pt(source, target);
        CHECK((est.translation - truth.translation).norm() < 1e-9);
        CHECK(rotation_angle(compose(inverse(est), truth)) < 1e-9);
    }
}

TEST_CASE("estimate_rigid_pt2pt degenerate inputs") {
    const std::vector<Vec3> two = {Vec3(0, 0, 0), Vec3(1, 0, 0)};
    CHECK_THROWS_AS(estimate_rigid_pt2pt(two, two), DegenerateConfiguration);

    // Collinear: centered source has rank 1.
    const std::vector<Vec3> line = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)};
    CHECK_THROWS_AS(estimate_rigid_pt2pt(line, line), DegenerateConfiguration);
}

TEST_CASE("orthonormalize projects a drifted matrix back to SO(3)") {
    std::mt19937_64 rng(9);
    const RigidTransform t = random_transform(rng);
    Mat3 drifted = t.rotation;
    drifted(0, 1) += 1e-6;
    CHECK(!is_rotation(drifted));
    CHECK(is_rotation(orthonormalize(drifted)));
}

TEST_SUITE_END();
