#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pettylab/functionals.hpp"
#include "pettylab/samples.hpp"

using namespace pettylab;

namespace {

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

HPolytope square(double h) {
    const std::vector<Vec> normals = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    return make_hpolytope(2, normals, Vec(4, h));
}

} // namespace

TEST_CASE("mixed volume diagonal reduces to volume") {
    CHECK(mixed_volume_q(cube(1.0), cube(1.0), 1.0) == Catch::Approx(8.0).epsilon(1e-12));
    CHECK(mixed_volume_q(cube(1.0), cube(1.0), 2.7) == Catch::Approx(8.0).epsilon(1e-12));
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        const HPolytope k = random_body(rep % 2 == 0 ? 2 : 3, rng);
        CHECK(mixed_volume_q(k, k, 2.0) == Catch::Approx(volume(k)).epsilon(1e-10));
    }
}

TEST_CASE("first mixed volume of square and disc") {
    // (1/2) * perimeter * radius for q = 1 against a disc approximant
    const HPolytope disc = ball_hpolytope(2, 1.0, 720);
    CHECK(mixed_volume_q(square(1.0), disc, 1.0) == Catch::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("orlicz mixed volume coincides with the power case") {
    std::mt19937_64 rng(62);
    const OrliczFunction p2 = make_phi(PhiKind::power_increasing, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t dim = rep % 2 == 0 ? 2 : 3;
        const HPolytope k = random_body(dim, rng);
        const HPolytope l = random_body(dim, rng);
        CHECK(orlicz_mixed_volume(k, l, p2) ==
              Catch::Approx(mixed_volume_q(k, l, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("two-function mixed volume coincides with the power case") {
    // phi(t) = t^q, psi(t) = t^{q-1}: phi(h_L)/psi(h_K) = (h_L/h_K)^q h_K
    std::mt19937_64 rng(63);
    const OrliczFunction phi = make_phi(PhiKind::power_increasing, 2.0);
    const OrliczFunction psi = make_phi(PhiKind::power_increasing, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t dim = rep % 2 == 0 ? 2 : 3;
        const HPolytope k = random_body(dim, rng);
        const HPolytope l = random_body(dim, rng);
        CHECK(orlicz_mixed_volume_two(k, l, phi, psi) ==
              Catch::Approx(mixed_volume_q(k, l, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("homogeneous mixed volume fixed point and scaling") {
    const OrliczFunction phi = make_phi(PhiKind::exp_normalized);
    const FunctionalValue diag = hat_orlicz_mixed_volume(cube(1.0), cube(1.0), phi);
    CHECK(diag.value == Catch::Approx(3.0 * 8.0).epsilon(1e-10));
    CHECK(diag.residual <= 1e-9);

    std::mt19937_64 rng(64);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t dim = rep % 2 == 0 ? 2 : 3;
        const HPolytope k = random_body(dim, rng);
        const HPolytope l = random_body(dim, rng);
        const double base = hat_orlicz_mixed_volume(k, l, phi).value;
        for (double t : {0.5, 2.0}) {
            HPolytope tl = l;
            for (double& h : tl.supports) h *= t;
            CHECK(hat_orlicz_mixed_volume(k, tl, phi).value ==
                  Catch::Approx(t * base).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(
        hat_orlicz_mixed_volume(cube(1.0), cube(1.0), make_phi(PhiKind::power_decreasing, 1.0)),
        validation_error);
}

TEST_CASE("power identity links the two mixed volume flavors") {
    // V_q(K,L) = n^{-q} |K|^{1-q} hatV_q(K,L)^q
    std::mt19937_64 rng(65);
    for (double q : {1.0, 2.0, 3.0}) {
        const OrliczFunction phi = make_phi(PhiKind::power_increasing, q);
        for (int rep = 0; rep < 6; ++rep) {
            const std::size_t dim = rep % 2 == 0 ? 2 : 3;
            const HPolytope k = random_body(dim, rng);
            const HPolytope l = random_body(dim, rng);
            const auto n = static_cast<double>(dim);
            const double hat = hat_orlicz_mixed_volume(k, l, phi).value;
            const double expected =
                std::pow(n, -q) * std::pow(volume(k), 1.0 - q) * std::pow(hat, q);
            CHECK(mixed_volume_q(k, l, q) == Catch::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("ball p-capacity closed form and grid setup") {
    CHECK(ball_pcapacity(3, 2.0) == Catch::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(ball_pcapacity(3, 1.5) ==
          Catch::Approx(std::sqrt(3.0) * 4.0 * M_PI).epsilon(1e-14));

    const CapacitarySetup unit = ball_capacitary_setup(3, 2.0, 1.0, 1000);
    CHECK(unit.cp == Catch::Approx(4.0 * M_PI).epsilon(1e-12));
    const CapacitarySetup r2 = ball_capacitary_setup(3, 2.0, 2.0, 1000);
    CHECK(r2.cp == Catch::Approx(8.0 * M_PI).epsilon(1e-12));  // r^{n-p} scaling
    const CapacitarySetup p15 = ball_capacitary_setup(3, 1.5, 1.0, 500);
    CHECK(p15.cp == Catch::Approx(ball_pcapacity(3, 1.5)).epsilon(1e-12));
}

TEST_CASE("capacity from a measure matches the grid construction") {
    const CapacitarySetup ref = ball_capacitary_setup(3, 2.0, 1.0, 500);
    const CapacitarySetup recomputed = cp_from_measure(ref.body, 2.0, ref.mu_p);
    CHECK(recomputed.cp == Catch::Approx(ref.cp).epsilon(1e-12));
    for (std::size_t i = 0; i < ref.h_body.size(); ++i)
        CHECK(recomputed.h_body[i] == Catch::Approx(ref.h_body[i]).margin(1e-10));

    CHECK_THROWS_AS(cp_from_measure(ref.body, 1.0, ref.mu_p), validation_error);
    CHECK_THROWS_AS(cp_from_measure(ref.body, 3.0, ref.mu_p), validation_error);
    using RawAtoms = std::vector<std::pair<Vec, double>>;
    RawAtoms half = {{Vec{1, 0, 0.2}, 1.0}, {Vec{0.9, 0.3, 0.1}, 1.0}, {Vec{0.5, -0.4, 0.3}, 1.0},
                     {Vec{0.7, 0.1, -0.2}, 1.0}};
    CHECK_THROWS_AS(cp_from_measure(ref.body, 2.0, make_measure(3, half)), validation_error);
}

TEST_CASE("normalized capacitary measure is a probability measure") {
    const CapacitarySetup setup = ball_capacitary_setup(3, 2.5, 1.3, 300);
    const DiscreteMeasure star = normalized_capacitary_measure(setup);
    CHECK(star.total_mass() == Catch::Approx(1.0).epsilon(1e-12));
    for (const Atom& a : star.atoms) CHECK(a.weight > 0.0);
}

TEST_CASE("orlicz mixed p-capacity diagonal and ball pairs") {
    const CapacitarySetup setup = ball_capacitary_setup(3, 2.0, 1.0, 500);
    const OrliczFunction p2 = make_phi(PhiKind::power_increasing, 2.0);
    CHECK(orlicz_mixed_pcapacity(setup, setup.body, p2) ==
          Catch::Approx(setup.cp).epsilon(1e-12));
    const HPolytope twice = ball_hpolytope(3, 2.0, 500);
    CHECK(orlicz_mixed_pcapacity(setup, twice, p2) ==
          Catch::Approx(4.0 * setup.cp).epsilon(1e-12));
}

TEST_CASE("homogeneous mixed p-capacity fixed point and homogeneity") {
    const OrliczFunction phi = make_phi(PhiKind::exp_normalized);
    const CapacitarySetup unit = ball_capacitary_setup(3, 2.0, 1.0, 400);
    const FunctionalValue diag = hat_orlicz_mixed_pcapacity(unit, unit.body, phi);
    CHECK(diag.value == Catch::Approx(unit.cp).epsilon(1e-10));
    CHECK(diag.residual <= 1e-9);

    const HPolytope twice = ball_hpolytope(3, 2.0, 400);
    CHECK(hat_orlicz_mixed_pcapacity(unit, twice, phi).value ==
          Catch::Approx(2.0 * unit.cp).epsilon(1e-10));

    // hatC(sK, tL) = s^{n-p-1} t hatC(K, L)
    const double s = 0.7, t = 1.3, p = 2.0, n = 3.0;
    const CapacitarySetup scaled_setup = ball_capacitary_setup(3, p, s, 400);
    const HPolytope tl = ball_hpolytope(3, t, 400);
    const HPolytope l1 = ball_hpolytope(3, 1.0, 400);
    const double lhs = hat_orlicz_mixed_pcapacity(scaled_setup, tl, phi).value;
    const double rhs =
        std::pow(s, n - p - 1.0) * t * hat_orlicz_mixed_pcapacity(unit, l1, phi).value;
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("volume inequality audits hold on random pairs") {
    std::mt19937_64 rng(909);
    const OrliczFunction convex_phi = make_phi(PhiKind::exp_normalized);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t dim = rep % 2 == 0 ? 2 : 3;
        const HPolytope k = random_body(dim, rng);
        const HPolytope l = random_body(dim, rng);
        CHECK(audit_lq_minkowski(k, l, 1.0).margin >= -1e-9);
        CHECK(audit_lq_minkowski(k, l, 2.0).margin >= -1e-9);
        CHECK(audit_orlicz_minkowski(k, l, convex_phi).margin >= -1e-9);
        CHECK(audit_hat_minkowski(k, l, convex_phi).margin >= -1e-9);
    }
    // strict gap for visibly different shapes
    const HPolytope disc = ball_hpolytope(2, 1.0, 720);
    CHECK(audit_lq_minkowski(square(1.0), disc, 1.0).margin > 1e-2);
}

TEST_CASE("isocapacitary audit is exact for balls") {
    for (double p : {1.5, 2.0, 2.5}) {
        const CapacitarySetup setup = ball_capacitary_setup(3, p, 1.0, 400);
        const AuditReport rep = audit_isocapacitary(setup, unit_ball_volume(3));
        CHECK(std::fabs(rep.margin) <= 1e-10);
    }
}

TEST_CASE("capacitary audits on ball pairs") {
    const OrliczFunction p2 = make_phi(PhiKind::power_increasing, 2.0);
    const CapacitarySetup setup = ball_capacitary_setup(3, 2.0, 1.0, 400);
    for (double t : {0.6, 1.0, 1.8}) {
        const HPolytope l = ball_hpolytope(3, t, 400);
        const double cp_l = std::pow(t, 1.0) * ball_pcapacity(3, 2.0);  // t^{n-p}
        const AuditReport orl = audit_capacitary_orlicz(setup, l, cp_l, p2);
        CHECK(orl.margin >= -1e-9);
        CHECK(std::fabs(orl.margin) <= 1e-9);  // equality case
        const AuditReport hat = audit_capacitary_hat(setup, l, cp_l, p2);
        CHECK(hat.margin >= -1e-9);
        CHECK(std::fabs(hat.margin) <= 1e-9);
    }
}
