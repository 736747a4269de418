#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "pettylab/errors.hpp"
#include "pettylab/linalg.hpp"
#include "pettylab/simplex.hpp"

namespace pettylab {

inline double unit_ball_volume(std::size_t dim) {
    return std::pow(M_PI, 0.5 * static_cast<double>(dim)) /
           std::tgamma(0.5 * static_cast<double>(dim) + 1.0);
}

inline double sphere_surface_measure(std::size_t dim) {
    return static_cast<double>(dim) * unit_ball_volume(dim);
}

// Unit vector on S^{n-1}.
struct Direction {
    Vec coords;

    std::size_t dim() const { return coords.size(); }

    static Direction from_vector(const Vec& v) {
        if (v.size() < 2) throw validation_error("direction needs dimension >= 2");
        const double len = norm(v);
        if (len <= 1e-14) throw validation_error("zero vector cannot be normalized");
        Direction d;
        d.coords = scaled(v, 1.0 / len);
        return d;
    }
};

inline double angular_distance(const Direction& a, const Direction& b) {
    const double c = std::clamp(dot(a.coords, b.coords), -1.0, 1.0);
    return std::acos(c);
}

struct Atom {
    Direction direction;
    double weight;
};

enum class HemisphereStatus : std::uint8_t { unchecked, passes, fails };

// Finite positive atomic measure on S^{n-1}.
struct DiscreteMeasure {
    std::size_t dim = 0;
    std::vector<Atom> atoms;
    HemisphereStatus hemisphere_ok = HemisphereStatus::unchecked;

    double total_mass() const {
        double m = 0.0;
        for (const Atom& a : atoms) m += a.weight;
        return m;
    }
};

constexpr double kDuplicateAngleTol = 1e-12;

inline DiscreteMeasure make_measure(std::size_t dim,
                                    const std::vector<std::pair<Vec, double>>& raw_atoms) {
    if (dim < 2) throw validation_error("measure dimension must be >= 2");
    if (raw_atoms.empty()) throw validation_error("empty atom list");
    DiscreteMeasure mu;
    mu.dim = dim;
    for (const auto& [v, w] : raw_atoms) {
        if (v.size() != dim) throw validation_error("atom vector has wrong dimension");
        if (!(w > 0.0)) throw validation_error("atom weight must be strictly positive");
        if (norm(v) <= 1e-14) throw validation_error("zero vector atom");
        Direction d = Direction::from_vector(v);
        bool merged = false;
        for (Atom& a : mu.atoms) {
            if (angular_distance(a.direction, d) <= kDuplicateAngleTol) {
                a.weight += w;
                merged = true;
                break;
            }
        }
        if (!merged) mu.atoms.push_back({std::move(d), w});
    }
    return mu;
}

struct HemisphereResult {
    bool passes = false;
    std::optional<Direction> witness;  // Sum_i w_i <u_i,v>_+ = 0 on failure
};

namespace detail {

// Nonzero v with <a_i, v> <= 0 strictly, if the atoms fit in an open
// halfspace. Works in the local frame.
inline std::optional<Vec> open_halfspace_witness(const std::vector<Vec>& atoms, std::size_t d) {
    LinearProgram lp;
    lp.objective.assign(d + 1, 0.0);
    lp.objective[d] = 1.0;  // maximize the margin
    lp.free_var.assign(d + 1, true);
    lp.free_var[d] = false;
    for (const Vec& a : atoms) {
        Vec row(d + 1, 0.0);
        for (std::size_t k = 0; k < d; ++k) row[k] = a[k];
        row[d] = 1.0;
        lp.le_lhs.push_back(std::move(row));
        lp.le_rhs.push_back(0.0);
    }
    for (std::size_t k = 0; k < d; ++k) {
        for (double sign : {1.0, -1.0}) {
            Vec row(d + 1, 0.0);
            row[k] = sign;
            lp.le_lhs.push_back(std::move(row));
            lp.le_rhs.push_back(1.0);
        }
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal || sol.x[d] <= 1e-12) return std::nullopt;
    Vec v(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(d));
    return v;
}

// Recursive separating-direction search: frame holds a global
// orthonormal basis of the subspace any remaining witness must lie in.
inline Vec hemisphere_witness(const std::vector<Vec>& global_atoms,
                              const std::vector<Vec>& frame) {
    const std::size_t d = frame.size();
    std::vector<Vec> local;
    for (const Vec& u : global_atoms) {
        Vec a(d, 0.0);
        for (std::size_t k = 0; k < d; ++k) a[k] = dot(u, frame[k]);
        if (norm(a) > 1e-12) local.push_back(scaled(a, 1.0 / norm(a)));
    }
    auto lift = [&](const Vec& w) {
        Vec g(frame.front().size(), 0.0);
        for (std::size_t k = 0; k < d; ++k) g = add(g, scaled(frame[k], w[k]));
        return scaled(g, 1.0 / norm(g));
    };
    if (local.empty()) return lift([&] {
        Vec e(d, 0.0);
        e[0] = 1.0;
        return e;
    }());
    const std::vector<Vec> span = orthonormal_basis(local);
    if (span.size() < d) return lift(orthogonal_complement_vector(span, d));
    if (auto open = open_halfspace_witness(local, d)) return lift(*open);

    // Gordan certificate: nonneg coefficients summing the atoms to zero.
    // Any witness is orthogonal to the atoms carrying positive weight.
    LinearProgram lp;
    const std::size_t m = local.size();
    lp.objective.assign(m, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        Vec row(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) row[i] = local[i][r];
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(0.0);
    }
    lp.eq_lhs.push_back(Vec(m, 1.0));
    lp.eq_rhs.push_back(1.0);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) throw numeric_error("hemisphere witness search failed");
    std::vector<Vec> forced;
    for (std::size_t i = 0; i < m; ++i)
        if (sol.x[i] > 1e-9) forced.push_back(local[i]);
    const std::vector<Vec> forced_span = orthonormal_basis(forced);
    if (forced_span.size() >= d) throw numeric_error("hemisphere witness search degenerate");
    // next frame: complement of the forced span, expressed globally
    std::vector<Vec> next_frame;
    std::vector<Vec> accum = forced_span;
    for (std::size_t k = 0; k < d; ++k) {
        Vec e(d, 0.0);
        e[k] = 1.0;
        for (const Vec& b : accum) e = sub(e, scaled(b, dot(e, b)));
        if (norm(e) > 1e-10) {
            Vec unit = scaled(e, 1.0 / norm(e));
            accum.push_back(unit);
            next_frame.push_back(lift(unit));
        }
    }
    return hemisphere_witness(global_atoms, next_frame);
}

} // namespace detail

// Passes iff Sum_i w_i <u_i,v>_+ > 0 for every direction v, i.e. the
// atom directions positively span R^n; weights do not affect the
// predicate.
inline HemisphereResult hemisphere_check(const std::vector<Direction>& directions,
                                         std::size_t dim) {
    std::vector<Vec> atoms;
    atoms.reserve(directions.size());
    for (const Direction& d : directions) atoms.push_back(d.coords);

    bool passes = false;
    const std::vector<Vec> span = orthonormal_basis(atoms);
    if (span.size() == dim) {
        // max t s.t. sum_i (d_i + t) u_i = 0, sum_i (d_i + t) = 1, d >= 0
        const std::size_t m = atoms.size();
        LinearProgram lp;
        lp.objective.assign(m + 1, 0.0);
        lp.objective[m] = 1.0;
        for (std::size_t r = 0; r < dim; ++r) {
            Vec row(m + 1, 0.0);
            double usum = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                row[i] = atoms[i][r];
                usum += atoms[i][r];
            }
            row[m] = usum;
            lp.eq_lhs.push_back(std::move(row));
            lp.eq_rhs.push_back(0.0);
        }
        Vec row(m + 1, 1.0);
        row[m] = static_cast<double>(m);
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(1.0);
        const LpSolution sol = solve_lp(lp);
        passes = sol.status == LpStatus::optimal && sol.x[m] > 1e-10;
    }

    HemisphereResult res;
    res.passes = passes;
    if (!passes) {
        std::vector<Vec> frame;
        for (std::size_t k = 0; k < dim; ++k) {
            Vec e(dim, 0.0);
            e[k] = 1.0;
            frame.push_back(std::move(e));
        }
        Vec w = detail::hemisphere_witness(atoms, frame);
        res.witness = Direction::from_vector(w);
    }
    return res;
}

inline HemisphereResult hemisphere_check(DiscreteMeasure& mu) {
    std::vector<Direction> dirs;
    dirs.reserve(mu.atoms.size());
    for (const Atom& a : mu.atoms) dirs.push_back(a.direction);
    HemisphereResult res = hemisphere_check(dirs, mu.dim);
    mu.hemisphere_ok = res.passes ? HemisphereStatus::passes : HemisphereStatus::fails;
    return res;
}

// Deterministic quadrature grid; weights sum to the surface measure of
// S^{n-1} exactly up to rounding. 2D: equiangular. 3D: colatitude bands
// with area-proportional longitude counts, staggered between bands.
inline std::vector<std::pair<Direction, double>> sphere_grid(std::size_t dim,
                                                             std::size_t resolution) {
    if (resolution < 8) throw validation_error("grid resolution must be >= 8");
    std::vector<std::pair<Direction, double>> grid;
    if (dim == 2) {
        const double w = 2.0 * M_PI / static_cast<double>(resolution);
        for (std::size_t i = 0; i < resolution; ++i) {
            const double a = w * static_cast<double>(i);
            grid.push_back({Direction::from_vector({std::cos(a), std::sin(a)}), w});
        }
        return grid;
    }
    if (dim == 3) {
        const auto bands = static_cast<std::size_t>(
            std::max(3.0, std::round(std::sqrt(static_cast<double>(resolution) * M_PI) / 2.0)));
        for (std::size_t j = 0; j < bands; ++j) {
            const double th0 = M_PI * static_cast<double>(j) / static_cast<double>(bands);
            const double th1 = M_PI * static_cast<double>(j + 1) / static_cast<double>(bands);
            const double band_area = 2.0 * M_PI * (std::cos(th0) - std::cos(th1));
            const auto count = static_cast<std::size_t>(std::max(
                1.0, std::round(static_cast<double>(resolution) * band_area / (4.0 * M_PI))));
            const double thc = 0.5 * (th0 + th1);
            const double w = band_area / static_cast<double>(count);
            const double stagger = (j % 2 == 0) ? 0.0 : 0.5;
            for (std::size_t i = 0; i < count; ++i) {
                const double ph = 2.0 * M_PI * (static_cast<double>(i) + stagger) /
                                  static_cast<double>(count);
                grid.push_back({Direction::from_vector({std::sin(thc) * std::cos(ph),
                                                        std::sin(thc) * std::sin(ph),
                                                        std::cos(thc)}),
                                w});
            }
        }
        return grid;
    }
    throw validation_error("deterministic sphere grids support dimensions 2 and 3 only");
}

// Multiplies each weight by an independent factor in [1-delta, 1+delta];
// atom directions and ordering are unchanged.
inline DiscreteMeasure perturb_measure(const DiscreteMeasure& mu, double delta,
                                       std::uint64_t seed) {
    if (delta < 0.0 || delta >= 1.0)
        throw validation_error("perturbation must satisfy 0 <= delta < 1");
    DiscreteMeasure out = mu;
    out.hemisphere_ok = mu.hemisphere_ok;  // support unchanged
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> factor(1.0 - delta, 1.0 + delta);
    for (Atom& a : out.atoms) a.weight *= factor(rng);
    return out;
}

} // namespace pettylab
