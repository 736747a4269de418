#pragma once

// Seeded generators for random test instances: hemisphere-valid
// measures and well-conditioned bodies in dimensions 2 and 3.

#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "pettylab/body.hpp"
#include "pettylab/measure.hpp"

namespace pettylab {

// Jittered equiangular normals keep every gap below a half circle, so
// the hemisphere condition holds by construction.
inline std::vector<Vec> random_spanning_directions(std::size_t dim, std::size_t count,
                                                   std::mt19937_64& rng) {
    std::vector<Vec> dirs;
    if (dim == 2) {
        std::uniform_real_distribution<double> jitter(-0.45, 0.45);
        for (std::size_t k = 0; k < count; ++k) {
            const double theta =
                2.0 * M_PI * (static_cast<double>(k) + jitter(rng)) / static_cast<double>(count);
            dirs.push_back({std::cos(theta), std::sin(theta)});
        }
    } else if (dim == 3) {
        std::uniform_real_distribution<double> jitter(-0.2, 0.2);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t axis = 0; axis < 3; ++axis) {
            for (double sign : {1.0, -1.0}) {
                Vec v(3, 0.0);
                v[axis] = sign;
                for (double& c : v) c += jitter(rng);
                dirs.push_back(scaled(v, 1.0 / norm(v)));
            }
        }
        while (dirs.size() < count) {
            Vec v = {gauss(rng), gauss(rng), gauss(rng)};
            const double len = norm(v);
            if (len < 1e-3) continue;
            dirs.push_back(scaled(v, 1.0 / len));
        }
    } else {
        throw validation_error("random directions support dimensions 2 and 3");
    }
    return dirs;
}

inline DiscreteMeasure random_measure(std::size_t dim, std::size_t atoms,
                                      std::mt19937_64& rng) {
    const std::vector<Vec> dirs = random_spanning_directions(dim, atoms, rng);
    std::uniform_real_distribution<double> weight(0.3, 2.0);
    std::vector<std::pair<Vec, double>> raw;
    for (const Vec& d : dirs) raw.emplace_back(d, weight(rng));
    DiscreteMeasure mu = make_measure(dim, raw);
    hemisphere_check(mu);
    return mu;
}

inline HPolytope random_body(std::size_t dim, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> extra(dim + 2, dim + 8);
    const std::vector<Vec> dirs = random_spanning_directions(dim, extra(rng), rng);
    std::uniform_real_distribution<double> support(0.5, 2.0);
    Vec h;
    for (std::size_t i = 0; i < dirs.size(); ++i) h.push_back(support(rng));
    return tighten(make_hpolytope(dim, dirs, h));
}

} // namespace pettylab
