#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pettylab/body.hpp"
#include "pettylab/samples.hpp"

using namespace pettylab;

namespace {

HPolytope square(double h) {
    const std::vector<Vec> normals = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    return make_hpolytope(2, normals, Vec(4, h));
}

HPolytope cube(double h) {
    std::vector<Vec> normals;
    for (std::size_t axis = 0; axis < 3; ++axis)
        for (double s : {1.0, -1.0}) {
            Vec n(3, 0.0);
            n[axis] = s;
            normals.push_back(n);
        }
    return make_hpolytope(3, normals, Vec(6, h));
}

} // namespace

TEST_CASE("make_hpolytope validation") {
    CHECK_THROWS_AS(make_hpolytope(2, {{1, 0}, {0, 1}, {-1, -1}}, Vec{1.0, 1.0, -1.0}),
                    validation_error);
    CHECK_THROWS_AS(make_hpolytope(2, {{1, 0}, {0, 1}}, Vec{1.0, 1.0}), validation_error);
    // normals in a halfplane: unbounded
    CHECK_THROWS_WITH(make_hpolytope(2, {{1, 0}, {0, 1}, {1, 1}}, Vec{1.0, 1.0, 1.0}),
                      Catch::Matchers::ContainsSubstring("unbounded"));
}

TEST_CASE("support evaluation on the square") {
    const HPolytope p = square(1.0);
    CHECK(support_eval(p, {1.0, 0.0}) == Catch::Approx(1.0).margin(1e-10));
    CHECK(support_eval(p, {1.0, 1.0}) == Catch::Approx(2.0).margin(1e-10));
    CHECK(support_eval(p, {-0.5, 0.25}) == Catch::Approx(0.75).margin(1e-10));
}

TEST_CASE("lp and polar hull support routes agree") {
    std::mt19937_64 rng(501);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t dim : {std::size_t{2}, std::size_t{3}}) {
        for (int rep = 0; rep < 10; ++rep) {
            const HPolytope p = random_body(dim, rng);
            std::vector<Direction> dirs;
            for (int k = 0; k < 25; ++k) {
                Vec u(dim);
                for (double& c : u) c = gauss(rng);
                if (norm(u) < 1e-6) continue;
                dirs.push_back(Direction::from_vector(u));
            }
            const Vec fast = support_batch(p, dirs);
            for (std::size_t i = 0; i < dirs.size(); ++i)
                CHECK(fast[i] == Catch::Approx(support_eval(p, dirs[i].coords)).margin(1e-8));
        }
    }
}

TEST_CASE("tighten removes slack and is idempotent") {
    // the diagonal cut at sqrt(2)/2 passes through (1,0)-(0,1): support 1
    // along (1,1)/sqrt(2) is already binding, but a loose copy is not
    std::vector<Vec> normals = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}};
    const double d = std::sqrt(0.5);
    HPolytope loose = make_hpolytope(2, normals, Vec{1.0, 1.0, 1.0, 1.0, 5.0});
    const HPolytope tight = tighten(loose);
    CHECK(tight.supports[4] == Catch::Approx(2.0 * d).margin(1e-10));
    for (int i = 0; i < 4; ++i) CHECK(tight.supports[i] == Catch::Approx(1.0).margin(1e-10));

    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        const HPolytope p = random_body(rep % 2 == 0 ? 2 : 3, rng);
        const HPolytope once = tighten(p);
        const HPolytope twice = tighten(once);
        for (std::size_t i = 0; i < p.supports.size(); ++i) {
            CHECK(once.supports[i] <= p.supports[i] + 1e-10);
            CHECK(twice.supports[i] == Catch::Approx(once.supports[i]).margin(1e-10));
        }
    }
}

TEST_CASE("vertices of simple bodies") {
    const VertexSet sv = vertices(square(1.0));
    REQUIRE(sv.points.size() == 4);
    for (const Vec& v : sv.points) {
        CHECK(std::fabs(v[0]) == Catch::Approx(1.0).margin(1e-10));
        CHECK(std::fabs(v[1]) == Catch::Approx(1.0).margin(1e-10));
    }
    const VertexSet cv = vertices(cube(1.0));
    CHECK(cv.points.size() == 8);
    CHECK(hull_volume(cv) == Catch::Approx(8.0).epsilon(1e-10));
}

TEST_CASE("volume and polar volume of reference bodies") {
    CHECK(volume(square(1.0)) == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(volume(cube(1.5)) == Catch::Approx(27.0).epsilon(1e-12));
    CHECK(polar_volume(square(1.0)) == Catch::Approx(2.0).epsilon(1e-12));
    const double h = std::sqrt(2.0 / M_PI);
    CHECK(polar_volume(square(h)) == Catch::Approx(M_PI).epsilon(1e-12));
    CHECK(polar_volume(cube(1.0)) == Catch::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("volume scaling laws") {
    std::mt19937_64 rng(909);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t dim = rep % 2 == 0 ? 2 : 3;
        const HPolytope p = random_body(dim, rng);
        const double v = volume(p);
        const double pv = polar_volume(p);
        for (double c : {0.5, 2.0, 3.7}) {
            HPolytope scaled_body = p;
            for (double& s : scaled_body.supports) s *= c;
            const double factor = std::pow(c, static_cast<double>(dim));
            CHECK(volume(scaled_body) == Catch::Approx(v * factor).epsilon(1e-10));
            CHECK(polar_volume(scaled_body) == Catch::Approx(pv / factor).epsilon(1e-10));
        }
    }
}

TEST_CASE("duality round trip recovers tight supports") {
    std::mt19937_64 rng(333);
    for (int rep = 0; rep < 20; ++rep) {
        const HPolytope p = random_body(rep % 2 == 0 ? 2 : 3, rng);
        const VertexSet vs = vertices(p);
        for (std::size_t i = 0; i < p.normals.size(); ++i) {
            double h = -1e300;
            for (const Vec& v : vs.points) h = std::max(h, dot(p.normals[i].coords, v));
            CHECK(h == Catch::Approx(p.supports[i]).margin(1e-10));
        }
    }
}

TEST_CASE("surface area measure of reference bodies") {
    const DiscreteMeasure sm = surface_area_measure(square(1.0));
    REQUIRE(sm.atoms.size() == 4);
    for (const Atom& a : sm.atoms) CHECK(a.weight == Catch::Approx(2.0).margin(1e-10));

    const DiscreteMeasure cm = surface_area_measure(cube(1.0));
    REQUIRE(cm.atoms.size() == 6);
    for (const Atom& a : cm.atoms) CHECK(a.weight == Catch::Approx(4.0).margin(1e-9));
}

TEST_CASE("support times facet measure sums to n times volume") {
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t dim = rep % 2 == 0 ? 2 : 3;
        const HPolytope p = random_body(dim, rng);
        const DiscreteMeasure sm = surface_area_measure(p);
        std::vector<Direction> dirs;
        for (const Atom& a : sm.atoms) dirs.push_back(a.direction);
        const Vec h = support_batch(p, dirs);
        double acc = 0.0;
        for (std::size_t i = 0; i < sm.atoms.size(); ++i) acc += h[i] * sm.atoms[i].weight;
        CHECK(acc / static_cast<double>(dim) == Catch::Approx(volume(p)).epsilon(1e-10));
    }
}

TEST_CASE("volume radius") {
    CHECK(vrad(M_PI, 2) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(vrad(8.0 * 4.0 * M_PI / 3.0, 3) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(vrad(0.0, 2), validation_error);
}

TEST_CASE("linear images transform volumes by the determinant") {
    Mat t(2, 2);
    t(0, 0) = 2.0;
    t(0, 1) = 1.0;
    t(1, 1) = 1.5;
    std::mt19937_64 rng(808);
    for (int rep = 0; rep < 10; ++rep) {
        const HPolytope p = random_body(2, rng);
        const HPolytope tp = linear_image(p, t);
        CHECK(volume(tp) == Catch::Approx(3.0 * volume(p)).epsilon(1e-10));
    }
    const Mat id = Mat::identity(2);
    const HPolytope p = square(1.3);
    const HPolytope same = linear_image(p, id);
    for (std::size_t i = 0; i < p.supports.size(); ++i)
        CHECK(same.supports[i] == Catch::Approx(p.supports[i]).margin(1e-12));
    Mat sing(2, 2);
    sing(0, 0) = 1.0;
    sing(0, 1) = 2.0;
    sing(1, 0) = 2.0;
    sing(1, 1) = 4.0;
    CHECK_THROWS_AS(linear_image(p, sing), validation_error);
}

TEST_CASE("monotonicity of supports under inclusion") {
    std::mt19937_64 rng(25);
    const HPolytope p = random_body(2, rng);
    HPolytope q = p;
    for (double& h : q.supports) h *= 1.7;
    std::vector<Direction> dirs;
    for (const auto& [d, w] : sphere_grid(2, 64)) {
        (void)w;
        dirs.push_back(d);
    }
    const Vec hp = support_batch(p, dirs);
    const Vec hq = support_batch(q, dirs);
    for (std::size_t i = 0; i < dirs.size(); ++i) CHECK(hp[i] <= hq[i] + 1e-12);
}

TEST_CASE("ball approximants") {
    const HPolytope b2 = ball_hpolytope(2, 1.0, 720);
    CHECK(volume(b2) == Catch::Approx(M_PI).epsilon(1e-4));
    CHECK(polar_volume(b2) == Catch::Approx(M_PI).epsilon(1e-4));
    const HPolytope b3 = ball_hpolytope(3, 2.0, 600);
    CHECK(volume(b3) == Catch::Approx(8.0 * 4.0 * M_PI / 3.0).epsilon(2e-2));
    // circumscribed approximant: never smaller than the ball
    CHECK(volume(b3) >= 8.0 * 4.0 * M_PI / 3.0);
}

TEST_CASE("hausdorff distance via support functions") {
    std::vector<Direction> grid;
    for (const auto& [d, w] : sphere_grid(2, 360)) {
        (void)w;
        grid.push_back(d);
    }
    const HPolytope p = square(1.0);
    const HPolytope q = square(1.1);
    CHECK(hausdorff_distance(p, p, grid) == Catch::Approx(0.0).margin(1e-12));
    // largest gap sits on the diagonal: 0.1 * sqrt(2)
    CHECK(hausdorff_distance(p, q, grid) == Catch::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-3));
    CHECK(hausdorff_distance(p, q, grid) == hausdorff_distance(q, p, grid));
}

TEST_CASE("polar volume quadrature in dimension 4") {
    std::vector<Vec> normals;
    for (std::size_t axis = 0; axis < 4; ++axis)
        for (double s : {1.0, -1.0}) {
            Vec n(4, 0.0);
            n[axis] = s;
            normals.push_back(n);
        }
    const HPolytope c4 = make_hpolytope(4, normals, Vec(8, 1.0));
    const double exact = 16.0 / 24.0;  // cross-polytope
    const double approx_vol = polar_volume(c4);
    CHECK(approx_vol == Catch::Approx(exact).epsilon(0.1));
    CHECK(polar_volume(c4) == approx_vol);  // seeded, deterministic
}
