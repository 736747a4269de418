#pragma once

// Minimization of generalized Orlicz objectives over support vectors
// with polar-volume (or volume) normalization, plus the continuity and
// degeneracy experiment drivers.
//
// The normalization constraint is folded into the objective: the
// feasible set is a gauge orbit, so the candidate is rescaled by the
// volume radius of its polar before the functional is applied. The
// optimizer runs Nelder-Mead on zero-mean log supports and finishes
// with a central-difference gradient polish.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "pettylab/body.hpp"
#include "pettylab/errors.hpp"
#include "pettylab/functionals.hpp"
#include "pettylab/measure.hpp"
#include "pettylab/orlicz.hpp"

namespace pettylab {

enum class ObjectiveMode {
    plain_polar,        // Sum w_i phi(h_i), |L*| = omega_n
    orlicz_norm,        // Luxemburg norm of the normalized supports
    capacitary_nonhom,  // Orlicz mixed p-capacity against a fixed body
    capacitary_hom,     // its homogeneous root-found variant
    variational,        // Sum phi(h_i/d_i) d_i w_i for user measures
    volume_normalized   // Sum w_i phi(h_i), |L| = omega_n
};

struct ObjectiveSpec {
    ObjectiveMode mode = ObjectiveMode::plain_polar;
    DiscreteMeasure measure;
    OrliczFunction phi;
    Vec denominators;   // per-atom h_K values for capacitary/variational modes
    Vec weights_scale;  // optional extra per-atom weight factors
    double p = 0.0;
    double cp = 0.0;
};

inline void validate_spec(ObjectiveSpec& spec) {
    if (spec.measure.hemisphere_ok == HemisphereStatus::unchecked)
        hemisphere_check(spec.measure);
    if (spec.measure.hemisphere_ok != HemisphereStatus::passes)
        throw validation_error("invalid measure: concentrated on a hemisphere");
    if (spec.measure.dim > 3)
        throw validation_error("solver supports dimensions 2 and 3");
    const std::size_t m = spec.measure.atoms.size();
    const bool needs_denominators = spec.mode == ObjectiveMode::capacitary_nonhom ||
                                    spec.mode == ObjectiveMode::capacitary_hom ||
                                    spec.mode == ObjectiveMode::variational;
    if (needs_denominators) {
        if (spec.denominators.size() != m)
            throw validation_error("denominators do not align with measure atoms");
        for (double d : spec.denominators)
            if (!(d > 0.0)) throw validation_error("denominators must be positive");
    }
    if (!spec.weights_scale.empty() && spec.weights_scale.size() != m)
        throw validation_error("weights_scale does not align with measure atoms");
    if (spec.mode == ObjectiveMode::capacitary_nonhom ||
        spec.mode == ObjectiveMode::capacitary_hom) {
        const auto n = static_cast<double>(spec.measure.dim);
        if (!(spec.p > 1.0 && spec.p < n))
            throw validation_error("capacitary modes need p in (1, dim)");
        if (!(spec.cp > 0.0)) throw validation_error("capacitary modes need cp > 0");
    }
}

namespace detail {

struct EvalGeometry {
    Vec tight;   // h_P(u_i) for P(h)
    double s;    // gauge factor making the normalization exact
};

inline EvalGeometry eval_geometry(const ObjectiveSpec& spec, const Vec& h) {
    const std::size_t n = spec.measure.dim;
    const std::size_t m = spec.measure.atoms.size();
    std::vector<Vec> pts;
    pts.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        pts.push_back(scaled(spec.measure.atoms[i].direction.coords, 1.0 / h[i]));
    const Hull ph = convex_hull(pts, n);  // hull of u_i/h_i is exactly P(h)*
    EvalGeometry g;
    g.tight.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        g.tight[i] = support_from_polar(ph, spec.measure.atoms[i].direction.coords);
    if (spec.mode == ObjectiveMode::volume_normalized) {
        // |sP| = omega_n needs |P|, recovered by dualizing the polar hull
        std::vector<Vec> verts;
        for (const HullFacet& f : ph.facets) {
            if (!(f.offset > 0.0)) throw numeric_error("candidate lost the origin");
            verts.push_back(scaled(f.normal, 1.0 / f.offset));
        }
        g.s = 1.0 / vrad(convex_hull(verts, n).volume, n);
    } else {
        g.s = vrad(ph.volume, n);  // |(sP)*| = s^-n |P*| = omega_n
    }
    return g;
}

} // namespace detail

inline double objective_eval(const ObjectiveSpec& spec, const Vec& h) {
    const std::size_t m = spec.measure.atoms.size();
    if (h.size() != m) throw validation_error("support vector does not align with atoms");
    for (double x : h)
        if (!(x > 0.0)) throw validation_error("supports must be strictly positive");
    const detail::EvalGeometry g = detail::eval_geometry(spec, h);
    const auto n = static_cast<double>(spec.measure.dim);
    auto weight = [&](std::size_t i) {
        const double w = spec.measure.atoms[i].weight;
        return spec.weights_scale.empty() ? w : w * spec.weights_scale[i];
    };
    switch (spec.mode) {
        case ObjectiveMode::plain_polar:
        case ObjectiveMode::volume_normalized: {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) acc += weight(i) * spec.phi(g.s * g.tight[i]);
            return acc;
        }
        case ObjectiveMode::orlicz_norm: {
            Vec f(m);
            for (std::size_t i = 0; i < m; ++i) f[i] = g.s * g.tight[i];
            return luxemburg_norm(f, spec.measure, spec.phi);
        }
        case ObjectiveMode::variational: {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                acc += spec.phi(g.s * g.tight[i] / spec.denominators[i]) *
                       spec.denominators[i] * weight(i);
            return acc;
        }
        case ObjectiveMode::capacitary_nonhom: {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                acc += spec.phi(g.s * g.tight[i] / spec.denominators[i]) *
                       spec.denominators[i] * weight(i);
            return (spec.p - 1.0) / (n - spec.p) * acc;
        }
        case ObjectiveMode::capacitary_hom: {
            auto root = [&](double eta) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wstar = (spec.p - 1.0) / (n - spec.p) *
                                         spec.denominators[i] * weight(i) / spec.cp;
                    acc += spec.phi(spec.cp * g.s * g.tight[i] /
                                    (eta * spec.denominators[i])) *
                           wstar;
                }
                return acc;
            };
            return monotone_bisect(root, 1.0);
        }
    }
    throw validation_error("unknown objective mode");
}

// Objective value plus its gradient with respect to log supports, for
// every mode except volume_normalized. Uses the envelope structure of
// the polar hull: t_j comes from the attaining facet (a linear solve in
// the active normals), and the polar volume differentiates through the
// hull vertices q_i = u_i/h_i.
inline double objective_with_grad(const ObjectiveSpec& spec, const Vec& h, Vec& grad_x) {
    if (spec.mode == ObjectiveMode::volume_normalized)
        throw validation_error("analytic gradient not available for volume normalization");
    const std::size_t n = spec.measure.dim;
    const std::size_t m = spec.measure.atoms.size();
    const auto nd = static_cast<double>(n);
    std::vector<Vec> pts;
    pts.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        pts.push_back(scaled(spec.measure.atoms[i].direction.coords, 1.0 / h[i]));
    const Hull ph = convex_hull(pts, n);
    Vec tight(m);
    std::vector<std::size_t> facet_of(m);
    for (std::size_t j = 0; j < m; ++j)
        tight[j] = support_from_polar(ph, spec.measure.atoms[j].direction.coords, &facet_of[j]);
    const double vol = ph.volume;
    const double s = vrad(vol, n);

    // d(polar volume)/dh_k through the hull vertices
    std::vector<Vec> grad_q(m, Vec(n, 0.0));
    auto cross3 = [](const Vec& a, const Vec& b) {
        return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                   a[0] * b[1] - a[1] * b[0]};
    };
    for (const HullFacet& f : ph.facets) {
        if (n == 2) {
            const std::size_t a = f.vertex_ids[0], b = f.vertex_ids[1];
            grad_q[a][0] += 0.5 * pts[b][1];
            grad_q[a][1] -= 0.5 * pts[b][0];
            grad_q[b][0] -= 0.5 * pts[a][1];
            grad_q[b][1] += 0.5 * pts[a][0];
        } else {
            const std::size_t a = f.vertex_ids[0], b = f.vertex_ids[1], c = f.vertex_ids[2];
            const Vec bc = cross3(pts[b], pts[c]);
            const Vec ca = cross3(pts[c], pts[a]);
            const Vec ab = cross3(pts[a], pts[b]);
            for (std::size_t k = 0; k < 3; ++k) {
                grad_q[a][k] += bc[k] / 6.0;
                grad_q[b][k] += ca[k] / 6.0;
                grad_q[c][k] += ab[k] / 6.0;
            }
        }
    }
    Vec dvol(m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
        dvol[k] = -dot(grad_q[k], spec.measure.atoms[k].direction.coords) / (h[k] * h[k]);

    // outer coefficients dG/dv_j at v = s * tight
    auto weight = [&](std::size_t i) {
        const double w = spec.measure.atoms[i].weight;
        return spec.weights_scale.empty() ? w : w * spec.weights_scale[i];
    };
    Vec v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = s * tight[j];
    Vec gcoef(m, 0.0);
    double value = 0.0;
    switch (spec.mode) {
        case ObjectiveMode::plain_polar: {
            for (std::size_t j = 0; j < m; ++j) {
                value += weight(j) * spec.phi(v[j]);
                gcoef[j] = weight(j) * spec.phi.d(v[j]);
            }
            break;
        }
        case ObjectiveMode::variational:
        case ObjectiveMode::capacitary_nonhom: {
            const double pref = spec.mode == ObjectiveMode::capacitary_nonhom
                                    ? (spec.p - 1.0) / (nd - spec.p)
                                    : 1.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double r = v[j] / spec.denominators[j];
                value += pref * spec.phi(r) * spec.denominators[j] * weight(j);
                gcoef[j] = pref * weight(j) * spec.phi.d(r);
            }
            break;
        }
        case ObjectiveMode::capacitary_hom: {
            auto root = [&](double eta) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    const double wstar = (spec.p - 1.0) / (nd - spec.p) *
                                         spec.denominators[j] * weight(j) / spec.cp;
                    acc += spec.phi(spec.cp * v[j] / (eta * spec.denominators[j])) * wstar;
                }
                return acc;
            };
            const double eta = monotone_bisect(root, 1.0);
            value = eta;
            double denom = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double wstar = (spec.p - 1.0) / (nd - spec.p) * spec.denominators[j] *
                                     weight(j) / spec.cp;
                const double dphi = spec.phi.d(spec.cp * v[j] / (eta * spec.denominators[j]));
                gcoef[j] = eta * dphi * wstar / spec.denominators[j];
                denom += dphi * v[j] * wstar / spec.denominators[j];
            }
            for (double& g : gcoef) g /= denom;
            break;
        }
        case ObjectiveMode::orlicz_norm: {
            const double lambda = luxemburg_norm(v, spec.measure, spec.phi);
            value = lambda;
            double denom = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double dphi = spec.phi.d(v[j] / lambda);
                gcoef[j] = lambda * spec.measure.atoms[j].weight * dphi;
                denom += spec.measure.atoms[j].weight * dphi * v[j];
            }
            for (double& g : gcoef) g /= denom;
            break;
        }
        case ObjectiveMode::volume_normalized:
            break;  // unreachable, rejected above
    }

    // dv_j = tight_j ds + s dt_j with ds = s/(n vol) dvol
    double s1 = 0.0;
    for (std::size_t j = 0; j < m; ++j) s1 += gcoef[j] * tight[j];
    Vec acc_t(m, 0.0);
    std::vector<Mat> facet_inv(ph.facets.size());
    std::vector<char> facet_inv_ready(ph.facets.size(), 0);
    std::vector<char> facet_singular(ph.facets.size(), 0);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t fi = facet_of[j];
        const HullFacet& f = ph.facets[fi];
        if (!facet_inv_ready[fi]) {
            Mat a(n, n);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    a(r, c) = spec.measure.atoms[f.vertex_ids[r]].direction.coords[c];
            Mat inv;
            const double det = lu_invert(a, &inv);
            if (std::fabs(det) <= 1e-12)
                facet_singular[fi] = 1;
            else
                facet_inv[fi] = inv;
            facet_inv_ready[fi] = 1;
        }
        if (facet_singular[fi]) continue;  // degenerate tie, measure-zero
        // y = A^{-T} u_j gives dt_j/dh over the active constraints
        const Vec& uj = spec.measure.atoms[j].direction.coords;
        for (std::size_t r = 0; r < n; ++r) {
            double y = 0.0;
            for (std::size_t c = 0; c < n; ++c) y += facet_inv[fi](c, r) * uj[c];
            acc_t[f.vertex_ids[r]] += gcoef[j] * y;
        }
    }
    grad_x.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
        grad_x[k] = (s / (nd * vol) * s1 * dvol[k] + s * acc_t[k]) * h[k];
    return value;
}

struct SolveConfig {
    int starts = 8;
    std::uint64_t seed = 1;
    int max_iters = 2000;
    double tol = 1e-10;
};

struct SolveReport {
    Vec optimal_supports;  // tightened, pre-normalization
    HPolytope normalized_body;
    double objective = 0.0;
    int starts_used = 0;
    std::vector<double> per_start_objectives;
    double max_gradient_residual = 0.0;
    Vec facet_activity;  // h_i - h_P(u_i) on the normalized body
    bool nonuniqueness_warning = false;
};

namespace detail {

inline void zero_mean(Vec& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (double& v : x) v -= mean;
}

inline Vec exp_vec(const Vec& x) {
    Vec h(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) h[i] = std::exp(x[i]);
    return h;
}

struct StartOutcome {
    Vec x;
    double f = 0.0;
    double grad_residual = 0.0;
    bool converged = false;
};

// Armijo-backtracking gradient descent on the analytic gradient; used
// when the problem is too large for a Nelder-Mead simplex to be useful.
// proj maps the incumbent to its tightened support vector (same body,
// same objective) so that no coordinate starts on the slack plateau
// where the gradient vanishes one-sidedly. Projection is applied once
// at entry only: re-projecting every iteration parks each coordinate
// exactly on its facet-activity kink and traps the line search there.
template <typename F, typename FG, typename P>
StartOutcome descend_with_gradient(F&& f, FG&& fg, P&& proj, Vec x, const SolveConfig& cfg) {
    zero_mean(x);
    x = proj(x);
    Vec g;
    double fx = f(x);
    double grad_res = std::numeric_limits<double>::infinity();
    double step = 1.0;
    bool converged = false;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const double fchk = fg(x, g);
        (void)fchk;
        zero_mean(g);
        grad_res = 0.0;
        for (double v : g) grad_res = std::max(grad_res, std::fabs(v));
        if (grad_res <= 1e-7 * (1.0 + std::fabs(fx))) {
            converged = true;
            break;
        }
        const double gnorm2 = dot(g, g);
        bool improved = false;
        // cap the trial displacement at 2 in log coordinates so extreme
        // candidates cannot collapse the polar hull
        double t = std::min(step * 2.0, 2.0 / grad_res);
        for (int halving = 0; halving < 50; ++halving) {
            Vec xt = sub(x, scaled(g, t));
            zero_mean(xt);
            const double ft = f(xt);
            if (ft <= fx - 1e-4 * t * gnorm2) {
                x = std::move(xt);
                const double gain = (fx - ft) / (std::fabs(fx) + 1e-30);
                fx = ft;
                step = t;
                improved = true;
                if (gain <= cfg.tol) converged = true;  // flat to tolerance
                break;
            }
            t *= 0.5;
        }
        if (!improved) {
            converged = true;  // no descent direction left at this precision
            break;
        }
        if (converged) break;
    }
    StartOutcome out;
    out.x = std::move(x);
    out.f = fx;
    out.grad_residual = grad_res;
    out.converged = converged;
    return out;
}

template <typename F>
StartOutcome nm_round(F&& f, Vec x0, const SolveConfig& cfg) {
    const std::size_t m = x0.size();
    zero_mean(x0);

    // Nelder-Mead
    std::vector<Vec> simplex(m + 1, x0);
    for (std::size_t i = 0; i < m; ++i) {
        simplex[i + 1][i] += 0.1;
        zero_mean(simplex[i + 1]);
    }
    std::vector<double> fv(m + 1);
    for (std::size_t i = 0; i <= m; ++i) fv[i] = f(simplex[i]);

    bool nm_converged = false;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        std::vector<std::size_t> ord(m + 1);
        for (std::size_t i = 0; i <= m; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const double fbest = fv[ord[0]];
        const double fworst = fv[ord[m]];
        if (fworst - fbest <= cfg.tol * (std::fabs(fbest) + 1e-30)) {
            nm_converged = true;
            break;
        }
        Vec centroid(m, 0.0);
        for (std::size_t k = 0; k < m; ++k) centroid = add(centroid, simplex[ord[k]]);
        centroid = scaled(centroid, 1.0 / static_cast<double>(m));
        const Vec& xw = simplex[ord[m]];
        auto accept = [&](Vec x, double val) {
            simplex[ord[m]] = std::move(x);
            fv[ord[m]] = val;
        };
        Vec xr = add(centroid, sub(centroid, xw));
        zero_mean(xr);
        const double fr = f(xr);
        if (fr < fbest) {
            Vec xe = add(centroid, scaled(sub(centroid, xw), 2.0));
            zero_mean(xe);
            const double fe = f(xe);
            if (fe < fr)
                accept(std::move(xe), fe);
            else
                accept(std::move(xr), fr);
        } else if (fr < fv[ord[m - 1]]) {
            accept(std::move(xr), fr);
        } else {
            Vec xc = fr < fworst ? add(centroid, scaled(sub(xr, centroid), 0.5))
                                 : add(centroid, scaled(sub(xw, centroid), 0.5));
            zero_mean(xc);
            const double fc = f(xc);
            if (fc < std::min(fr, fworst)) {
                accept(std::move(xc), fc);
            } else {
                for (std::size_t k = 1; k <= m; ++k) {
                    simplex[ord[k]] =
                        add(simplex[ord[0]],
                            scaled(sub(simplex[ord[k]], simplex[ord[0]]), 0.5));
                    zero_mean(simplex[ord[k]]);
                    fv[ord[k]] = f(simplex[ord[k]]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= m; ++i)
        if (fv[i] < fv[best]) best = i;
    Vec x = simplex[best];
    double fx = fv[best];

    // central-difference gradient polish in the smooth basin
    const int polish_budget = m <= 64 ? 80 : 4;
    double grad_res = std::numeric_limits<double>::infinity();
    double last_improvement = std::numeric_limits<double>::infinity();
    for (int step = 0; step < polish_budget; ++step) {
        Vec g(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double hstep = 1e-6 * (1.0 + std::fabs(x[i]));
            Vec xp = x, xm = x;
            xp[i] += hstep;
            xm[i] -= hstep;
            g[i] = (f(xp) - f(xm)) / (2.0 * hstep);
        }
        zero_mean(g);  // project onto the gauge slice
        grad_res = 0.0;
        for (double v : g) grad_res = std::max(grad_res, std::fabs(v));
        if (grad_res <= 1e-9 * (1.0 + std::fabs(fx))) break;
        double t = 1.0 / (1.0 + norm(g));
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving) {
            Vec xt = sub(x, scaled(g, t));
            zero_mean(xt);
            const double ft = f(xt);
            if (ft < fx) {
                last_improvement = (fx - ft) / (std::fabs(fx) + 1e-30);
                x = std::move(xt);
                fx = ft;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) {
            last_improvement = 0.0;
            break;
        }
    }

    StartOutcome out;
    out.x = std::move(x);
    out.f = fx;
    out.grad_residual = grad_res;
    // Converged when the simplex collapsed, the polished gradient is
    // tiny, or the polish stopped producing progress above tolerance.
    out.converged = nm_converged || grad_res <= 1e-6 * (1.0 + std::fabs(fx)) ||
                    last_improvement <= std::max(cfg.tol, 1e-12);
    return out;
}

// One start = repeated Nelder-Mead rounds, each launched from the
// tightened image of the previous optimum. Tightening pulls slack
// coordinates back onto the active boundary, so a round that stalled on
// the flat slack plateau gets traction again; rounds stop once they no
// longer improve the objective.
template <typename F, typename P>
StartOutcome minimize_one_start(F&& f, P&& proj, Vec x0, const SolveConfig& cfg) {
    StartOutcome best = nm_round(f, std::move(x0), cfg);
    for (int round = 1; round < 8; ++round) {
        StartOutcome next = nm_round(f, proj(best.x), cfg);
        if (next.f < best.f - 1e-12 * (1.0 + std::fabs(best.f))) {
            const bool progress =
                best.f - next.f > cfg.tol * (std::fabs(next.f) + 1e-30);
            best = std::move(next);
            if (!progress) break;
        } else {
            best.converged = best.converged || next.converged;
            break;
        }
    }
    return best;
}

inline int thread_budget(int starts) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
    if (const char* env = std::getenv("PETTYLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) cap = v;
    }
    return std::min(cap, starts);
}

} // namespace detail

inline SolveReport solve(ObjectiveSpec spec, const SolveConfig& cfg = {}) {
    validate_spec(spec);
    if (spec.phi.class_tag != PhiClass::I)
        throw validation_error("solve handles class-I infimum problems only");
    if (cfg.starts < 1) throw validation_error("need at least one start");
    const std::size_t m = spec.measure.atoms.size();

    // Degenerate trial candidates (hull collapse at extreme supports)
    // count as +inf instead of aborting the search.
    auto f = [&](const Vec& x) {
        try {
            return objective_eval(spec, detail::exp_vec(x));
        } catch (const numeric_error&) {
            return std::numeric_limits<double>::infinity();
        } catch (const validation_error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    auto fg = [&](const Vec& x, Vec& g) {
        const Vec h = detail::exp_vec(x);
        return objective_with_grad(spec, h, g);
    };
    // gauge-preserving projection onto tightened supports
    auto proj = [&](const Vec& x) {
        try {
            const detail::EvalGeometry g = detail::eval_geometry(spec, detail::exp_vec(x));
            Vec out(m);
            for (std::size_t i = 0; i < m; ++i) out[i] = std::log(g.tight[i]);
            detail::zero_mean(out);
            return out;
        } catch (const std::exception&) {
            return x;
        }
    };
    const bool use_gradient_engine =
        m > 64 && spec.mode != ObjectiveMode::volume_normalized;

    // start 0 is the unit support vector; later starts are seeded
    // log-normal perturbations around it
    std::vector<Vec> inits(static_cast<std::size_t>(cfg.starts), Vec(m, 0.0));
    for (int k = 1; k < cfg.starts; ++k) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(k));
        std::normal_distribution<double> gauss(0.0, 0.5);
        for (double& v : inits[static_cast<std::size_t>(k)]) v = gauss(rng);
    }

    std::vector<detail::StartOutcome> outcomes(static_cast<std::size_t>(cfg.starts));
    const int workers = detail::thread_budget(cfg.starts);
    auto run_one = [&](int k) {
        const auto idx = static_cast<std::size_t>(k);
        if (use_gradient_engine) {
            outcomes[idx] = detail::descend_with_gradient(f, fg, proj, inits[idx], cfg);
            return;
        }
        auto local = [&](Vec x0) {
            detail::StartOutcome out = detail::minimize_one_start(f, proj, std::move(x0), cfg);
            if (spec.mode != ObjectiveMode::volume_normalized) {
                // analytic-gradient refinement grinds out the last digits
                // the finite-difference polish cannot reach
                try {
                    detail::StartOutcome refined =
                        detail::descend_with_gradient(f, fg, proj, out.x, cfg);
                    if (refined.f <= out.f) out = std::move(refined);
                } catch (const std::exception&) {
                    // keep the derivative-free outcome
                }
            }
            return out;
        };
        outcomes[idx] = local(inits[idx]);
        // basin hops: the landscape in log supports is not convex, so a
        // start can settle into a secondary stationary point; seeded
        // kicks from the tightened incumbent escape those basins while
        // keeping the whole run deterministic
        std::mt19937_64 hop_rng(cfg.seed * 0x9e3779b97f4a7c15ULL +
                                static_cast<std::uint64_t>(k) + 0x51ed2701);
        std::normal_distribution<double> kick(0.0, 0.4);
        for (int hop = 0; hop < 6; ++hop) {
            Vec x = proj(outcomes[idx].x);
            for (double& v : x) v += kick(hop_rng);
            detail::StartOutcome trial = local(std::move(x));
            if (trial.f < outcomes[idx].f - 1e-13 * (1.0 + std::fabs(outcomes[idx].f)))
                outcomes[idx] = std::move(trial);
        }
    };
    if (workers <= 1) {
        for (int k = 0; k < cfg.starts; ++k) run_one(k);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < cfg.starts; k = next.fetch_add(1))
                    run_one(k);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    // best by objective, ties by lexicographically smallest supports
    std::size_t best = 0;
    for (std::size_t k = 1; k < outcomes.size(); ++k) {
        const double df = outcomes[k].f - outcomes[best].f;
        if (df < -1e-15 * (1.0 + std::fabs(outcomes[best].f)) ||
            (std::fabs(df) <= 1e-15 * (1.0 + std::fabs(outcomes[best].f)) &&
             outcomes[k].x < outcomes[best].x))
            best = k;
    }
    if (!outcomes[best].converged)
        throw numeric_error("optimizer exhausted its budget without converging; best objective " +
                            std::to_string(outcomes[best].f));

    auto normalized_supports = [&](const Vec& x) {
        const Vec h = detail::exp_vec(x);
        const detail::EvalGeometry g = detail::eval_geometry(spec, h);
        Vec out(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = g.s * g.tight[i];
        return out;
    };

    SolveReport report;
    const Vec hbest = detail::exp_vec(outcomes[best].x);
    const detail::EvalGeometry g = detail::eval_geometry(spec, hbest);
    report.optimal_supports = g.tight;
    Vec norm_supports(m);
    for (std::size_t i = 0; i < m; ++i) norm_supports[i] = g.s * g.tight[i];
    std::vector<Direction> dirs;
    for (const Atom& a : spec.measure.atoms) dirs.push_back(a.direction);
    report.normalized_body = make_hpolytope(spec.measure.dim, dirs, norm_supports);
    report.objective = objective_eval(spec, report.optimal_supports);
    report.starts_used = cfg.starts;
    for (const detail::StartOutcome& o : outcomes) report.per_start_objectives.push_back(o.f);
    report.max_gradient_residual = outcomes[best].grad_residual;
    const Vec retight = support_batch(report.normalized_body, dirs);
    report.facet_activity.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        report.facet_activity[i] = report.normalized_body.supports[i] - retight[i];
    if (spec.phi.convex && cfg.starts > 1) {
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            if (k == best) continue;
            const Vec other = normalized_supports(outcomes[k].x);
            for (std::size_t i = 0; i < m; ++i)
                if (std::fabs(other[i] - norm_supports[i]) > 1e-5)
                    report.nonuniqueness_warning = true;
        }
    }
    return report;
}

inline SolveReport solve_polar_orlicz(const DiscreteMeasure& mu, const OrliczFunction& phi,
                                      const SolveConfig& cfg = {}) {
    ObjectiveSpec spec;
    spec.mode = ObjectiveMode::plain_polar;
    spec.measure = mu;
    spec.phi = phi;
    return solve(std::move(spec), cfg);
}

inline SolveReport solve_orlicz_norm(const DiscreteMeasure& mu, const OrliczFunction& phi,
                                     const SolveConfig& cfg = {}) {
    ObjectiveSpec spec;
    spec.mode = ObjectiveMode::orlicz_norm;
    spec.measure = mu;
    spec.phi = phi;
    return solve(std::move(spec), cfg);
}

inline SolveReport solve_capacitary_petty(const CapacitarySetup& setup,
                                          const OrliczFunction& phi, bool homogeneous,
                                          const SolveConfig& cfg = {}) {
    ObjectiveSpec spec;
    spec.mode = homogeneous ? ObjectiveMode::capacitary_hom : ObjectiveMode::capacitary_nonhom;
    spec.measure = setup.mu_p;
    spec.phi = phi;
    spec.denominators = setup.h_body;
    spec.p = setup.p;
    spec.cp = setup.cp;
    return solve(std::move(spec), cfg);
}

inline SolveReport solve_variational(const DiscreteMeasure& measure, const OrliczFunction& phi,
                                     const Vec& denominators, const SolveConfig& cfg = {}) {
    ObjectiveSpec spec;
    spec.mode = ObjectiveMode::variational;
    spec.measure = measure;
    spec.phi = phi;
    spec.denominators = denominators;
    return solve(std::move(spec), cfg);
}

struct ContinuityRow {
    double delta = 0.0;
    double objective_shift = 0.0;
    double body_distance = 0.0;
};

inline std::vector<ContinuityRow> continuity_experiment(const ObjectiveSpec& base,
                                                        const std::vector<double>& deltas,
                                                        std::uint64_t seed,
                                                        const SolveConfig& cfg = {}) {
    ObjectiveSpec spec0 = base;
    const SolveReport base_report = solve(spec0, cfg);
    std::vector<Direction> grid;
    for (const auto& [d, w] : sphere_grid(base.measure.dim, 720)) {
        (void)w;
        grid.push_back(d);
    }
    std::vector<ContinuityRow> rows;
    for (double delta : deltas) {
        ObjectiveSpec spec = base;
        spec.measure = perturb_measure(base.measure, delta, seed);
        const SolveReport r = solve(spec, cfg);
        rows.push_back({delta, std::fabs(r.objective - base_report.objective),
                        hausdorff_distance(r.normalized_body, base_report.normalized_body,
                                           grid)});
    }
    return rows;
}

enum class DegenerateKind { shrinking_infimum, exploding_supremum };  // (i), (ii)

struct DegenerateRow {
    double epsilon = 0.0;
    double objective = 0.0;
};

// Evaluates the plain polar objective along the squashed-ellipsoid
// family L_eps (last axis scaled to eps^{n-1}, others to 1/eps),
// rescaled so |L_eps*| = omega_n. Demonstrates the unattained
// infimum/supremum trends.
inline std::vector<DegenerateRow> degenerate_family_demo(DegenerateKind kind,
                                                         const DiscreteMeasure& mu,
                                                         const OrliczFunction& phi,
                                                         const std::vector<double>& eps_list,
                                                         std::size_t resolution = 2048) {
    if (eps_list.empty()) throw validation_error("empty epsilon list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0)) throw validation_error("epsilon must be positive");
        if (eps_list[i] < 1e-6)
            throw numeric_error("conditioning guard: epsilon below 1e-6");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw validation_error("epsilon list must be strictly decreasing");
    }
    if (kind == DegenerateKind::shrinking_infimum && phi.class_tag != PhiClass::D)
        throw validation_error("the shrinking-infimum family needs a class-D function");
    const std::size_t n = mu.dim;
    const HPolytope ball = ball_hpolytope(n, 1.0, resolution);
    std::vector<Direction> dirs;
    for (const Atom& a : mu.atoms) dirs.push_back(a.direction);
    std::vector<DegenerateRow> rows;
    for (double eps : eps_list) {
        Mat t(n, n);
        for (std::size_t k = 0; k + 1 < n; ++k) t(k, k) = 1.0 / eps;
        t(n - 1, n - 1) = std::pow(eps, static_cast<double>(n) - 1.0);
        HPolytope l = linear_image(ball, t);
        const double s = vrad(polar_volume(l), n);
        for (double& h : l.supports) h *= s;
        const Vec hl = support_batch(l, dirs);
        double acc = 0.0;
        for (std::size_t i = 0; i < mu.atoms.size(); ++i)
            acc += mu.atoms[i].weight * phi(hl[i]);
        rows.push_back({eps, acc});
    }
    return rows;
}

} // namespace pettylab
