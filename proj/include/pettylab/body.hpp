#pragma once

// H-polytopes with the origin interior: polar duality, exact 2D/3D
// volumes, LP support evaluation, surface-area measures, linear images.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "pettylab/errors.hpp"
#include "pettylab/hull.hpp"
#include "pettylab/linalg.hpp"
#include "pettylab/measure.hpp"
#include "pettylab/simplex.hpp"

namespace pettylab {

struct HPolytope {
    std::size_t dim = 0;
    std::vector<Direction> normals;
    Vec supports;  // strictly positive
};

struct VertexSet {
    std::size_t dim = 0;
    std::vector<Vec> points;
};

inline HPolytope make_hpolytope(std::size_t dim, const std::vector<Vec>& normals,
                                const Vec& supports) {
    if (dim < 2) throw validation_error("body dimension must be >= 2");
    if (normals.size() != supports.size())
        throw validation_error("normals and supports length mismatch");
    if (normals.size() < dim + 1)
        throw validation_error("need at least dim+1 halfspaces for a bounded body");
    HPolytope p;
    p.dim = dim;
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (normals[i].size() != dim) throw validation_error("normal has wrong dimension");
        if (!(supports[i] > 0.0)) throw validation_error("invalid support: must be positive");
        p.normals.push_back(Direction::from_vector(normals[i]));
    }
    p.supports = supports;
    if (!hemisphere_check(p.normals, dim).passes)
        throw validation_error("unbounded body: normals concentrated on a hemisphere");
    return p;
}

inline HPolytope make_hpolytope(std::size_t dim, const std::vector<Direction>& normals,
                                const Vec& supports) {
    std::vector<Vec> raw;
    raw.reserve(normals.size());
    for (const Direction& d : normals) raw.push_back(d.coords);
    return make_hpolytope(dim, raw, supports);
}

// h_P(u) = max <x,u> over P, via a small dense LP with free variables.
inline double support_eval(const HPolytope& p, const Vec& u) {
    if (u.size() != p.dim) throw validation_error("direction has wrong dimension");
    LinearProgram lp;
    lp.objective = u;
    lp.free_var.assign(p.dim, true);
    for (std::size_t i = 0; i < p.normals.size(); ++i) {
        lp.le_lhs.push_back(p.normals[i].coords);
        lp.le_rhs.push_back(p.supports[i]);
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw numeric_error("support LP did not reach an optimum");
    return sol.value;
}

inline VertexSet polar_vertices(const HPolytope& p) {
    VertexSet v;
    v.dim = p.dim;
    for (std::size_t i = 0; i < p.normals.size(); ++i)
        v.points.push_back(scaled(p.normals[i].coords, 1.0 / p.supports[i]));
    return v;
}

inline double hull_volume(const VertexSet& v) { return convex_hull(v.points, v.dim).volume; }

// Hull of the polar body P* = conv{u_i/h_i}. Its facets (a, b) are in
// bijection with the vertices a/b of P, which gives the fast geometric
// route for support values: h_P(u) = max_F <a_F, u>/b_F.
inline Hull polar_hull(const HPolytope& p) {
    return convex_hull(polar_vertices(p).points, p.dim);
}

inline double support_from_polar(const Hull& ph, const Vec& u,
                                 std::size_t* attaining_facet = nullptr) {
    double h = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < ph.facets.size(); ++f) {
        if (!(ph.facets[f].offset > 0.0))
            throw numeric_error("polar hull does not contain the origin");
        const double v = dot(ph.facets[f].normal, u) / ph.facets[f].offset;
        if (v > h) {
            h = v;
            if (attaining_facet) *attaining_facet = f;
        }
    }
    return h;
}

// Support values at many directions. Dimensions 2 and 3 go through one
// polar hull instead of one LP per direction.
inline Vec support_batch(const HPolytope& p, const std::vector<Direction>& dirs) {
    Vec h(dirs.size());
    if (p.dim <= 3) {
        const Hull ph = polar_hull(p);
        for (std::size_t i = 0; i < dirs.size(); ++i)
            h[i] = support_from_polar(ph, dirs[i].coords);
    } else {
        for (std::size_t i = 0; i < dirs.size(); ++i) h[i] = support_eval(p, dirs[i].coords);
    }
    return h;
}

inline HPolytope tighten(const HPolytope& p) {
    HPolytope out = p;
    if (p.dim <= 3) {
        const Hull ph = polar_hull(p);
        for (std::size_t i = 0; i < p.normals.size(); ++i)
            out.supports[i] = support_from_polar(ph, p.normals[i].coords);
    } else {
        for (std::size_t i = 0; i < p.normals.size(); ++i)
            out.supports[i] = support_eval(p, p.normals[i].coords);
    }
    return out;
}

// Vertices of P from double dualization: facet (a, b) of the polar hull
// gives the vertex a/b. Coplanar hull triangles repeat vertices, so
// near-identical points are merged.
inline VertexSet vertices(const HPolytope& p) {
    if (p.dim > 3) throw validation_error("vertex enumeration supports dimensions 2 and 3");
    const Hull ph = polar_hull(p);
    VertexSet v;
    v.dim = p.dim;
    double scale = 0.0;
    std::vector<Vec> raw;
    for (const HullFacet& f : ph.facets) {
        if (!(f.offset > 0.0))
            throw numeric_error("polar hull does not contain the origin");
        raw.push_back(scaled(f.normal, 1.0 / f.offset));
        scale = std::max(scale, norm(raw.back()));
    }
    const double tol = 1e-9 * (1.0 + scale);
    for (Vec& x : raw) {
        bool dup = false;
        for (const Vec& y : v.points) {
            if (norm(sub(x, y)) <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) v.points.push_back(std::move(x));
    }
    return v;
}

inline double volume(const HPolytope& p) { return hull_volume(vertices(p)); }

inline double polar_volume(const HPolytope& p, std::size_t quadrature_resolution = 4096) {
    if (p.dim <= 3) return hull_volume(polar_vertices(p));
    // quadrature fallback: |P*| = (1/n) Int rho^n dsigma with
    // rho_{P*}(u) = 1/h_P(u), sampled by a seeded spherical Monte Carlo
    // (no deterministic grid is constructed above dimension 3)
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < quadrature_resolution; ++k) {
        Vec u(p.dim);
        double len = 0.0;
        do {
            for (double& x : u) x = gauss(rng);
            len = norm(u);
        } while (len <= 1e-12);
        u = scaled(u, 1.0 / len);
        const double h = support_eval(p, u);
        acc += std::pow(1.0 / h, static_cast<double>(p.dim));
    }
    return unit_ball_volume(p.dim) * acc / static_cast<double>(quadrature_resolution);
}

inline double vrad(double vol, std::size_t dim) {
    if (!(vol > 0.0)) throw validation_error("volume radius needs a positive volume");
    return std::pow(vol / unit_ball_volume(dim), 1.0 / static_cast<double>(dim));
}

// Facet normals and (n-1)-measures. P must be tightened.
inline DiscreteMeasure surface_area_measure(const HPolytope& p) {
    if (p.dim > 3) throw validation_error("surface area measure supports dimensions 2 and 3");
    const VertexSet vs = vertices(p);
    double scale = 0.0;
    for (double h : p.supports) scale = std::max(scale, std::fabs(h));
    const double on_plane = 1e-8 * (1.0 + scale);

    std::vector<std::pair<Vec, double>> atoms;
    for (std::size_t i = 0; i < p.normals.size(); ++i) {
        const Vec& u = p.normals[i].coords;
        std::vector<Vec> on_facet;
        for (const Vec& v : vs.points)
            if (std::fabs(dot(u, v) - p.supports[i]) <= on_plane) on_facet.push_back(v);
        double area = 0.0;
        if (p.dim == 2) {
            for (std::size_t a = 0; a < on_facet.size(); ++a)
                for (std::size_t b = a + 1; b < on_facet.size(); ++b)
                    area = std::max(area, norm(sub(on_facet[a], on_facet[b])));
        } else if (on_facet.size() >= 3) {
            // 2D polygon area in the facet plane
            Vec e1 = orthogonal_complement_vector({u}, 3);
            Vec e2 = orthogonal_complement_vector({u, e1}, 3);
            std::vector<Vec> proj;
            for (const Vec& v : on_facet) proj.push_back({dot(v, e1), dot(v, e2)});
            try {
                area = convex_hull(proj, 2).volume;
            } catch (const validation_error&) {
                area = 0.0;  // collinear slice, not a real facet
            }
        }
        if (area >= 1e-12) atoms.emplace_back(u, area);
    }
    if (atoms.empty()) throw numeric_error("no facets with positive measure");
    return make_measure(p.dim, atoms);
}

inline HPolytope linear_image(const HPolytope& p, const Mat& t) {
    if (t.rows != p.dim || t.cols != p.dim)
        throw validation_error("linear map has wrong shape");
    Mat inv;
    const double det = lu_invert(t, &inv);
    if (std::fabs(det) <= 1e-14) throw validation_error("singular map");
    const Mat inv_t = transpose(inv);
    HPolytope out;
    out.dim = p.dim;
    for (std::size_t i = 0; i < p.normals.size(); ++i) {
        const Vec w = mat_vec(inv_t, p.normals[i].coords);
        const double len = norm(w);
        if (len <= 1e-14) throw numeric_error("degenerate image normal");
        out.normals.push_back(Direction::from_vector(w));
        out.supports.push_back(p.supports[i] / len);
    }
    return out;
}

inline HPolytope ball_hpolytope(std::size_t dim, double r, std::size_t resolution) {
    if (!(r > 0.0)) throw validation_error("ball radius must be positive");
    const auto grid = sphere_grid(dim, resolution);
    HPolytope p;
    p.dim = dim;
    for (const auto& [d, w] : grid) {
        (void)w;
        p.normals.push_back(d);
        p.supports.push_back(r);
    }
    return p;
}

inline double hausdorff_distance(const HPolytope& p, const HPolytope& q,
                                 const std::vector<Direction>& grid) {
    if (p.dim != q.dim) throw validation_error("dimension mismatch");
    std::vector<Vec> dirs;
    for (const Direction& d : grid) dirs.push_back(d.coords);
    for (const Direction& d : p.normals) dirs.push_back(d.coords);
    for (const Direction& d : q.normals) dirs.push_back(d.coords);
    double best = 0.0;
    if (p.dim <= 3) {
        const Hull hp = polar_hull(p);
        const Hull hq = polar_hull(q);
        for (const Vec& u : dirs)
            best = std::max(best,
                            std::fabs(support_from_polar(hp, u) - support_from_polar(hq, u)));
    } else {
        for (const Vec& u : dirs)
            best = std::max(best, std::fabs(support_eval(p, u) - support_eval(q, u)));
    }
    return best;
}

} // namespace pettylab
