#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wifidop/dop.hpp"

using namespace wifidop;

namespace {

Environment grid_env(std::vector<AccessPoint> aps, double threshold_mw = 0.0) {
    Environment env;
    env.aps = std::move(aps);
    env.dimension = 3;
    env.ss_threshold = threshold_mw;
    return env;
}

GeometryMatrix rows_only(std::vector<Vec3> rows) {
    GeometryMatrix g;
    g.rows = std::move(rows);
    g.ranges.assign(g.rows.size(), 1.0);
    return g;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("visible_aps: zero readings are not received") {
    const auto env = grid_env({{"A", Vec3{0, 0, 0}}, {"B", Vec3{1, 0, 0}}, {"C", Vec3{0, 1, 0}}});
    RssScan scan;
    scan.readings = {{"A", 1e-5}, {"B", 0.0}, {"C", 2e-6}};
    CHECK(visible_aps(env, scan) == std::vector<std::string>{"A", "C"});

    CHECK(visible_aps(env, RssScan{}).empty());

    scan.readings["Z"] = 1e-6;
    CHECK_THROWS_AS(visible_aps(env, scan), UnknownAp);
}

TEST_CASE("qualify_aps: threshold filter") {
    auto env = grid_env({{"A", Vec3{0, 0, 0}}, {"C", Vec3{0, 1, 0}}});
    RssScan scan;
    scan.readings = {{"A", 1e-5}, {"C", 2e-6}};
    const std::vector<std::string> visible{"A", "C"};

    env.ss_threshold = 1e-6;
    auto [q1, e1] = qualify_aps(env, visible, scan);
    CHECK(q1 == std::vector<std::string>{"A", "C"});
    CHECK(e1.empty());

    env.ss_threshold = 5e-6;
    auto [q2, e2] = qualify_aps(env, visible, scan);
    CHECK(q2 == std::vector<std::string>{"A"});
    REQUIRE(e2.size() == 1);
    CHECK(e2[0].id == "C");
    CHECK(e2[0].reason == ExclusionReason::BelowThreshold);

    env.ss_threshold = 0.0;
    auto [q3, e3] = qualify_aps(env, visible, scan);
    CHECK(q3 == visible);
    CHECK(e3.empty());
}

TEST_CASE("build_geometry: unit rows and ranges") {
    const auto env = grid_env({{"A", Vec3{1, 0, 0}}, {"B", Vec3{3, 4, 0}}});

    const auto g = build_geometry(env, Vec3::Zero(), {"A", "B"});
    REQUIRE(g.size() == 2);
    CHECK(g.rows[0].isApprox(Vec3{1, 0, 0}, 1e-12));
    CHECK(g.ranges[0] == doctest::Approx(1.0));
    CHECK(g.rows[1].isApprox(Vec3{0.6, 0.8, 0.0}, 1e-12));
    CHECK(g.ranges[1] == doctest::Approx(5.0));

    CHECK_THROWS_AS(build_geometry(env, Vec3{1, 0, 0}, {"A"}), DegenerateRange);
}

TEST_CASE("compute_dop: diagonal hand value") {
    const auto g = rows_only({Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, 0, 0}});
    // N = diag(2, 1, 1) so Tr(N^-1) = 2.5.
    CHECK(compute_dop(g, 3) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
}

TEST_CASE("compute_dop: too few rows or singular geometry is infinite") {
    CHECK(compute_dop(rows_only({Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}), 3) == kInf);

    // Four directions all in the user's z-plane: third column of H is zero.
    const double r = std::sqrt(0.5);
    CHECK(compute_dop(rows_only({Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{-1, 0, 0},
                                 Vec3{r, r, 0}}),
                      3) == kInf);
}

TEST_CASE("compute_dop: 2-D mode re-normalizes projections") {
    // Three equally spaced horizontal directions with arbitrary z components:
    // after projection and re-normalization N = diag(3/2, 3/2).
    std::vector<Vec3> rows;
    for (int k = 0; k < 3; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / 3.0;
        Vec3 dir{std::cos(angle), std::sin(angle), 0.4 * (k - 1)};
        rows.push_back(dir.normalized());
    }
    CHECK(compute_dop(rows_only(rows), 2) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-9));

    // Two usable rows are not enough in 2-D.
    CHECK(compute_dop(rows_only({Vec3{1, 0, 0}, Vec3{0, 1, 0}}), 2) == kInf);

    // A row pointing straight up carries no horizontal information.
    auto with_vertical = rows;
    with_vertical.push_back(Vec3{0, 0, 1});
    CHECK(compute_dop(rows_only(with_vertical), 2) ==
          doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("weighted dop scales like 1/sqrt(w) under a uniform weight") {
    const auto g = rows_only({Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, 0, 0}});
    const double plain = compute_dop(g, 3);
    const double weighted = compute_weighted_dop(g, {4.0, 4.0, 4.0, 4.0}, 3);
    CHECK(weighted == doctest::Approx(plain / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(compute_weighted_dop(g, {1.0}, 3), ValidationError);
}

TEST_CASE("dop invariances over random layouts") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> n_aps(4, 10);
    int tested = 0;
    while (tested < 300) {
        const int n = n_aps(rng);
        std::vector<Vec3> rows;
        Vec3 user{oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5),
                  oracle::uniform(rng, -2, 2)};
        std::vector<Vec3> aps;
        for (int k = 0; k < n; ++k) {
            aps.emplace_back(oracle::uniform(rng, -20, 20), oracle::uniform(rng, -20, 20),
                             oracle::uniform(rng, -6, 6));
            rows.push_back((aps.back() - user).normalized());
        }
        const auto g = rows_only(rows);
        const double dop = compute_dop(g, 3);
        if (!std::isfinite(dop) || dop > 100.0) {
            continue;  // keep layouts non-degenerate so 1e-9 tolerances are meaningful
        }
        ++tested;

        CHECK(dop >= std::sqrt(9.0 / n) - 1e-9);
        CHECK(std::abs(dop - oracle::trace_dop3(rows)) / dop < 1e-9);

        // Translation invariance.
        const Vec3 shift{oracle::uniform(rng, -50, 50), oracle::uniform(rng, -50, 50),
                         oracle::uniform(rng, -50, 50)};
        std::vector<Vec3> translated;
        for (const auto& ap : aps) {
            translated.push_back((ap + shift - (user + shift)).normalized());
        }
        CHECK(std::abs(compute_dop(rows_only(translated), 3) - dop) < 1e-9);

        // Rotation invariance.
        const auto rot = oracle::random_rotation(rng);
        std::vector<Vec3> rotated;
        for (const auto& ap : aps) {
            rotated.push_back(
                (oracle::rotate(rot, ap) - oracle::rotate(rot, user)).normalized());
        }
        CHECK(std::abs(compute_dop(rows_only(rotated), 3) - dop) < 1e-9);

        // Adding a row never increases the DOP.
        auto grown = rows;
        grown.push_back(Vec3{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1),
                             oracle::uniform(rng, -1, 1)}
                            .normalized());
        CHECK(compute_dop(rows_only(grown), 3) <= dop + 1e-12);
    }
}

TEST_CASE("assess: full chain classifications") {
    // A tetrahedron-like spread around the user: good geometry.
    const auto env = grid_env({{"A", Vec3{5, 0, -2}},
                               {"B", Vec3{-5, 3, -2}},
                               {"C", Vec3{0, -5, -2}},
                               {"D", Vec3{0, 0, 6}},
                               {"E", Vec3{4, 4, 1}}},
                              1e-9);
    const Vec3 user{0.2, -0.3, 0.5};

    SUBCASE("well spread qualified APs are Good") {
        RssScan scan;
        scan.readings = {{"A", 1e-5}, {"B", 1e-5}, {"C", 1e-5}, {"D", 1e-5}};
        const auto a = assess(env, scan, user);
        CHECK(a.visible_count == 4);
        CHECK(a.qualified_count == 4);
        CHECK(std::isfinite(a.dop));
        CHECK(a.dop < 5.0);
        CHECK(a.classification == Classification::Good);

        // Cross-check the value against the cofactor oracle.
        std::vector<Vec3> rows;
        for (const auto& id : {"A", "B", "C", "D"}) {
            rows.push_back((env.ap(id).position - user).normalized());
        }
        CHECK(a.dop == doctest::Approx(oracle::trace_dop3(rows)).epsilon(1e-9));
    }

    SUBCASE("five visible, three qualified: insufficient") {
        Environment thresholded = env;
        thresholded.ss_threshold = 1e-6;
        RssScan scan;
        scan.readings = {{"A", 1e-5}, {"B", 1e-5}, {"C", 1e-5}, {"D", 1e-8}, {"E", 1e-8}};
        const auto a = assess(thresholded, scan, user);
        CHECK(a.visible_count == 5);
        CHECK(a.qualified_count == 3);
        CHECK(a.dop == kInf);
        CHECK(a.classification == Classification::Insufficient);
        CHECK(a.excluded_aps.size() == 2);
    }

    SUBCASE("nothing visible: insufficient") {
        RssScan scan;
        scan.readings = {{"A", 0.0}, {"B", 0.0}};
        const auto a = assess(env, scan, user);
        CHECK(a.visible_count == 0);
        CHECK(a.dop == kInf);
        CHECK(a.classification == Classification::Insufficient);
    }

    SUBCASE("good_dop_max controls the Good boundary") {
        RssScan scan;
        scan.readings = {{"A", 1e-5}, {"B", 1e-5}, {"C", 1e-5}, {"D", 1e-5}};
        AssessOptions tight;
        tight.good_dop_max = 0.5;  // below the mathematical floor for 4 APs
        CHECK(assess(env, scan, user, tight).classification == Classification::Degraded);
    }

    SUBCASE("enough APs but singular geometry is Degraded with infinite dop") {
        const auto collinear = grid_env({{"A", Vec3{1, 0, 0}},
                                         {"B", Vec3{2, 0, 0}},
                                         {"C", Vec3{3, 0, 0}},
                                         {"D", Vec3{4, 0, 0}}});
        RssScan scan;
        scan.readings = {{"A", 1e-5}, {"B", 1e-5}, {"C", 1e-5}, {"D", 1e-5}};
        const auto a = assess(collinear, scan, Vec3{0, 0, 0});
        CHECK(a.qualified_count == 4);
        CHECK(a.dop == kInf);
        CHECK(a.classification == Classification::Degraded);
    }
}

TEST_CASE("assess: weighted variant stays finite and positive") {
    const auto env = grid_env({{"A", Vec3{5, 0, -2}, 100.0},
                               {"B", Vec3{-5, 3, -2}, 100.0},
                               {"C", Vec3{0, -5, -2}, 100.0},
                               {"D", Vec3{0, 0, 6}, 100.0}});
    RssScan scan;
    scan.readings = {{"A", 1e-5}, {"B", 2e-5}, {"C", 1.5e-5}, {"D", 3e-5}};
    AssessOptions weighted;
    weighted.weighting_model = PropagationModel::friis();
    const auto a = assess(env, scan, Vec3{0.2, -0.3, 0.5}, weighted);
    CHECK(std::isfinite(a.dop));
    CHECK(a.dop > 0.0);
}

TEST_CASE("classification names round-trip") {
    for (const auto c : {Classification::Good, Classification::Degraded,
                         Classification::Insufficient}) {
        CHECK(classification_from_string(to_string(c)) == c);
    }
    CHECK_THROWS_AS(classification_from_string("Sideways"), ValidationError);
}
