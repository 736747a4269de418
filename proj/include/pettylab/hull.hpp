#pragma once

// Exact convex hulls in dimensions 2 and 3. The 3D path is an
// incremental hull with an epsilon of 1e-12 after pre-scaling the input
// to a unit bounding box.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "pettylab/errors.hpp"
#include "pettylab/linalg.hpp"

namespace pettylab {

struct HullFacet {
    Vec normal;   // outward unit normal
    double offset;  // <normal, x> = offset on the facet plane
    std::vector<std::size_t> vertex_ids;  // indices into the input points
};

struct Hull {
    std::size_t dim = 0;
    std::vector<std::size_t> vertex_ids;  // hull vertices, input indices
    std::vector<HullFacet> facets;        // triangles in 3D, edges in 2D
    double volume = 0.0;
};

namespace detail {

constexpr double kHullEps = 1e-12;

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline Hull convex_hull_2d(const std::vector<Vec>& pts) {
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
        return pts[a][1] < pts[b][1];
    });
    idx.erase(std::unique(idx.begin(), idx.end(),
                          [&](std::size_t a, std::size_t b) {
                              return std::fabs(pts[a][0] - pts[b][0]) <= kHullEps &&
                                     std::fabs(pts[a][1] - pts[b][1]) <= kHullEps;
                          }),
              idx.end());
    if (idx.size() < 3) throw validation_error("degenerate hull: fewer than 3 distinct points");

    double scale = 0.0;
    for (std::size_t i : idx) scale = std::max({scale, std::fabs(pts[i][0]), std::fabs(pts[i][1])});
    const double eps = kHullEps * scale * scale;

    // monotone chain, counterclockwise result
    std::vector<std::size_t> h(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i : idx) {
        while (k >= 2 && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= eps) --k;
        h[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (auto it = idx.rbegin() + 1; it != idx.rend(); ++it) {
        while (k >= lower && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[*it]) <= eps) --k;
        h[k++] = *it;
    }
    h.resize(k - 1);
    if (h.size() < 3) throw validation_error("degenerate hull: collinear points");

    Hull hull;
    hull.dim = 2;
    hull.vertex_ids = h;
    double area2 = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Vec& p = pts[h[i]];
        const Vec& q = pts[h[(i + 1) % h.size()]];
        area2 += p[0] * q[1] - q[0] * p[1];
        Vec n = {q[1] - p[1], -(q[0] - p[0])};
        const double len = norm(n);
        if (len <= kHullEps * scale) continue;
        n = scaled(n, 1.0 / len);
        hull.facets.push_back({n, dot(n, p), {h[i], h[(i + 1) % h.size()]}});
    }
    hull.volume = 0.5 * area2;
    if (hull.volume <= eps) throw validation_error("degenerate hull: zero area");
    return hull;
}

struct Tri {
    std::array<std::size_t, 3> v;
    Vec n;      // outward unit normal (scaled frame)
    double off;
    bool alive = true;
};

inline Hull convex_hull_3d(const std::vector<Vec>& pts_in) {
    const std::size_t npts = pts_in.size();
    if (npts < 4) throw validation_error("degenerate hull: fewer than 4 points");

    // pre-scale to a unit bounding box
    Vec lo = pts_in[0], hi = pts_in[0];
    for (const Vec& p : pts_in)
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    Vec center = {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
    double scale = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
    if (scale <= kHullEps) throw validation_error("degenerate hull: coincident points");
    std::vector<Vec> pts(npts);
    for (std::size_t i = 0; i < npts; ++i)
        pts[i] = scaled(sub(pts_in[i], center), 1.0 / scale);

    auto cross3 = [](const Vec& a, const Vec& b) {
        return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                   a[0] * b[1] - a[1] * b[0]};
    };

    // initial tetrahedron from extreme points
    std::size_t i0 = 0, i1 = 0;
    for (std::size_t i = 1; i < npts; ++i)
        if (pts[i][0] < pts[i0][0]) i0 = i;
    double best = -1.0;
    for (std::size_t i = 0; i < npts; ++i) {
        const double d = norm(sub(pts[i], pts[i0]));
        if (d > best) {
            best = d;
            i1 = i;
        }
    }
    if (best <= kHullEps) throw validation_error("degenerate hull: coincident points");
    std::size_t i2 = i0;
    best = -1.0;
    for (std::size_t i = 0; i < npts; ++i) {
        const double d = norm(cross3(sub(pts[i1], pts[i0]), sub(pts[i], pts[i0])));
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    if (best <= kHullEps) throw validation_error("degenerate hull: collinear points");
    const Vec base_n = cross3(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0]));
    std::size_t i3 = i0;
    best = -1.0;
    for (std::size_t i = 0; i < npts; ++i) {
        const double d = std::fabs(dot(base_n, sub(pts[i], pts[i0])));
        if (d > best) {
            best = d;
            i3 = i;
        }
    }
    if (best <= kHullEps * norm(base_n)) throw validation_error("degenerate hull: coplanar points");

    Vec interior(3, 0.0);
    for (std::size_t i : {i0, i1, i2, i3}) interior = add(interior, scaled(pts[i], 0.25));

    std::vector<Tri> faces;
    auto make_face = [&](std::size_t a, std::size_t b, std::size_t c) {
        Tri t;
        t.v = {a, b, c};
        Vec n = cross3(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
        if (dot(n, sub(interior, pts[a])) > 0.0) {
            std::swap(t.v[1], t.v[2]);
            n = scaled(n, -1.0);
        }
        t.n = scaled(n, 1.0 / norm(n));
        t.off = dot(t.n, pts[t.v[0]]);
        return t;
    };
    faces.push_back(make_face(i0, i1, i2));
    faces.push_back(make_face(i0, i1, i3));
    faces.push_back(make_face(i0, i2, i3));
    faces.push_back(make_face(i1, i2, i3));

    for (std::size_t p = 0; p < npts; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!faces[f].alive) continue;
            if (dot(faces[f].n, pts[p]) - faces[f].off > kHullEps) visible.push_back(f);
        }
        if (visible.empty()) continue;
        // horizon = directed edges of visible faces whose reverse edge is
        // not itself on a visible face
        std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
        for (std::size_t f : visible) {
            const auto& v = faces[f].v;
            for (int e = 0; e < 3; ++e) {
                edge_count[{v[e], v[(e + 1) % 3]}]++;
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> horizon;
        for (const auto& [edge, cnt] : edge_count) {
            (void)cnt;
            if (edge_count.find({edge.second, edge.first}) == edge_count.end())
                horizon.push_back(edge);
        }
        for (std::size_t f : visible) faces[f].alive = false;
        for (const auto& [a, b] : horizon) faces.push_back(make_face(a, b, p));
    }

    Hull hull;
    hull.dim = 3;
    std::vector<bool> used(npts, false);
    double vol = 0.0;
    for (const Tri& t : faces) {
        if (!t.alive) continue;
        for (std::size_t v : t.v) used[v] = true;
        const Vec a = sub(pts[t.v[0]], interior);
        const Vec b = sub(pts[t.v[1]], interior);
        const Vec c = sub(pts[t.v[2]], interior);
        vol += std::fabs(dot(a, cross3(b, c))) / 6.0;
        // plane back in the original frame: same normal, shifted offset
        hull.facets.push_back(
            {t.n, scale * t.off + dot(t.n, center), {t.v[0], t.v[1], t.v[2]}});
    }
    for (std::size_t i = 0; i < npts; ++i)
        if (used[i]) hull.vertex_ids.push_back(i);
    hull.volume = vol * scale * scale * scale;
    return hull;
}

} // namespace detail

inline Hull convex_hull(const std::vector<Vec>& points, std::size_t dim) {
    if (dim == 2) return detail::convex_hull_2d(points);
    if (dim == 3) return detail::convex_hull_3d(points);
    throw validation_error("exact hulls support dimensions 2 and 3 only");
}

// Radial function of the hull along u, assuming the origin is interior
// (all facet offsets positive).
inline double hull_radial(const Hull& hull, const Vec& u) {
    double r = std::numeric_limits<double>::infinity();
    for (const HullFacet& f : hull.facets) {
        const double d = dot(f.normal, u);
        if (d > 1e-14) r = std::min(r, f.offset / d);
    }
    if (!std::isfinite(r)) throw numeric_error("radial query escaped the hull facets");
    return r;
}

} // namespace pettylab
