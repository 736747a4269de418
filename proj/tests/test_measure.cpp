#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pettylab/measure.hpp"

using namespace pettylab;
using RawAtoms = std::vector<std::pair<Vec, double>>;

namespace {

DiscreteMeasure cross_measure() {
    RawAtoms raw = {{Vec{1, 0}, 1.0}, {Vec{-1, 0}, 1.0}, {Vec{0, 1}, 1.0}, {Vec{0, -1}, 1.0}};
    return make_measure(2, raw);
}

} // namespace

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(2) == Catch::Approx(M_PI).epsilon(1e-14));
    CHECK(unit_ball_volume(3) == Catch::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
    CHECK(unit_ball_volume(4) == Catch::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
    CHECK(sphere_surface_measure(2) == Catch::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(sphere_surface_measure(3) == Catch::Approx(4.0 * M_PI).epsilon(1e-14));
}

TEST_CASE("make_measure normalizes and validates") {
    RawAtoms raw = {{Vec{2, 0}, 0.5}, {Vec{0, 3}, 1.5}, {Vec{-1, 0}, 1.0}, {Vec{0, -1}, 1.0}};
    DiscreteMeasure mu = make_measure(2, raw);
    REQUIRE(mu.atoms.size() == 4);
    CHECK(norm(mu.atoms[0].direction.coords) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(mu.total_mass() == Catch::Approx(4.0).epsilon(1e-14));

    CHECK_THROWS_AS(make_measure(2, RawAtoms{{Vec{1, 0}, 0.0}}), validation_error);
    CHECK_THROWS_AS(make_measure(2, RawAtoms{{Vec{1, 0}, -1.0}}), validation_error);
    CHECK_THROWS_AS(make_measure(2, RawAtoms{{Vec{0, 0}, 1.0}}), validation_error);
    CHECK_THROWS_AS(make_measure(2, RawAtoms{}), validation_error);
    CHECK_THROWS_AS(make_measure(1, RawAtoms{{Vec{1}, 1.0}}), validation_error);
}

TEST_CASE("make_measure merges duplicate directions") {
    RawAtoms raw = {{Vec{1, 0}, 1.0}, {Vec{2, 0}, 2.5}, {Vec{0, 1}, 1.0}, {Vec{-1, -1}, 1.0}};
    DiscreteMeasure mu = make_measure(2, raw);
    REQUIRE(mu.atoms.size() == 3);
    CHECK(mu.atoms[0].weight == Catch::Approx(3.5).epsilon(1e-14));
}

TEST_CASE("hemisphere check passes for spanning atoms") {
    DiscreteMeasure mu = cross_measure();
    const HemisphereResult res = hemisphere_check(mu);
    CHECK(res.passes);
    CHECK(mu.hemisphere_ok == HemisphereStatus::passes);
    CHECK_FALSE(res.witness.has_value());
}

TEST_CASE("hemisphere check fails with a valid witness") {
    RawAtoms raw = {{Vec{1, 0.1}, 1.0}, {Vec{0.3, 1}, 2.0}, {Vec{-0.8, 0.4}, 0.5}};
    DiscreteMeasure mu = make_measure(2, raw);
    const HemisphereResult res = hemisphere_check(mu);
    REQUIRE_FALSE(res.passes);
    REQUIRE(res.witness.has_value());
    // witness certifies Sum w <u, v>_+ = 0: every atom on the closed
    // negative side
    for (const Atom& a : mu.atoms)
        CHECK(dot(a.direction.coords, res.witness->coords) <= 1e-9);
}

TEST_CASE("hemisphere check fails on equator concentration in 3d") {
    RawAtoms raw = {{Vec{1, 0, 0}, 1.0},
                    {Vec{-1, 0.2, 0}, 1.0},
                    {Vec{0.3, -1, 0}, 2.0},
                    {Vec{-0.5, 0.9, 0}, 0.7}};
    DiscreteMeasure mu = make_measure(3, raw);
    const HemisphereResult res = hemisphere_check(mu);
    REQUIRE_FALSE(res.passes);
    REQUIRE(res.witness.has_value());
    for (const Atom& a : mu.atoms)
        CHECK(dot(a.direction.coords, res.witness->coords) <= 1e-9);
}

TEST_CASE("hemisphere check is weight invariant") {
    RawAtoms raw = {{Vec{1, 0.2}, 1.0}, {Vec{-0.7, 1}, 1.0}, {Vec{-0.2, -1}, 1.0}};
    for (double c : {0.01, 1.0, 250.0}) {
        RawAtoms scaled_atoms = raw;
        for (auto& [u, w] : scaled_atoms) w *= c;
        DiscreteMeasure mu = make_measure(2, scaled_atoms);
        CHECK(hemisphere_check(mu).passes);
    }
}

TEST_CASE("sphere grid 2d") {
    const auto eight = sphere_grid(2, 8);
    REQUIRE(eight.size() == 8);
    for (const auto& [d, w] : eight) {
        (void)d;
        CHECK(w == Catch::Approx(2.0 * M_PI / 8.0).epsilon(1e-14));
    }
    const auto fine = sphere_grid(2, 360);
    double total = 0.0;
    for (const auto& [d, w] : fine) {
        (void)d;
        CHECK(w > 0.0);
        total += w;
    }
    CHECK(total == Catch::Approx(2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("sphere grid 3d covers the whole sphere") {
    const auto grid = sphere_grid(3, 1000);
    double total = 0.0;
    for (const auto& [d, w] : grid) {
        CHECK(w > 0.0);
        CHECK(norm(d.coords) == Catch::Approx(1.0).epsilon(1e-12));
        total += w;
    }
    CHECK(total == Catch::Approx(4.0 * M_PI).epsilon(1e-9));
}

TEST_CASE("sphere grid rejects unsupported inputs") {
    CHECK_THROWS_AS(sphere_grid(2, 7), validation_error);
    CHECK_THROWS_AS(sphere_grid(4, 100), validation_error);
}

TEST_CASE("sphere grid is deterministic") {
    const auto a = sphere_grid(3, 321);
    const auto b = sphere_grid(3, 321);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first.coords == b[i].first.coords);
        CHECK(a[i].second == b[i].second);
    }
}

TEST_CASE("perturb_measure contracts") {
    DiscreteMeasure mu = cross_measure();
    const DiscreteMeasure same = perturb_measure(mu, 0.0, 99);
    for (std::size_t i = 0; i < mu.atoms.size(); ++i)
        CHECK(same.atoms[i].weight == mu.atoms[i].weight);

    const DiscreteMeasure a = perturb_measure(mu, 0.1, 7);
    const DiscreteMeasure b = perturb_measure(mu, 0.1, 7);
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
        CHECK(a.atoms[i].weight == b.atoms[i].weight);
        CHECK(a.atoms[i].direction.coords == mu.atoms[i].direction.coords);
        CHECK(a.atoms[i].weight >= 0.9 * mu.atoms[i].weight);
        CHECK(a.atoms[i].weight <= 1.1 * mu.atoms[i].weight);
    }
    CHECK(a.total_mass() >= 0.9 * mu.total_mass());
    CHECK(a.total_mass() <= 1.1 * mu.total_mass());
    CHECK_THROWS_AS(perturb_measure(mu, 1.0, 1), validation_error);
}

TEST_CASE("perturbation integral drift bound") {
    DiscreteMeasure mu = cross_measure();
    const double delta = 0.05;
    const DiscreteMeasure nu = perturb_measure(mu, delta, 3);
    auto f = [](const Vec& u) { return u[0] * u[0] - 0.3 * u[1]; };
    double base = 0.0, drift = 0.0, fmax = 0.0;
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
        base += f(mu.atoms[i].direction.coords) * mu.atoms[i].weight;
        drift += f(nu.atoms[i].direction.coords) * nu.atoms[i].weight;
        fmax = std::max(fmax, std::fabs(f(mu.atoms[i].direction.coords)));
    }
    CHECK(std::fabs(drift - base) <= delta * fmax * mu.total_mass() + 1e-12);
}
