#pragma once

// Mixed functionals on discrete data: L_q and Orlicz mixed volumes, the
// homogeneous (root-found) variants, p-capacities from capacitary
// measures, Orlicz mixed p-capacities, and inequality audits.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pettylab/body.hpp"
#include "pettylab/errors.hpp"
#include "pettylab/measure.hpp"
#include "pettylab/orlicz.hpp"

namespace pettylab {

struct FunctionalValue {
    double value = 0.0;
    double residual = 0.0;  // relative defect of the defining equation
};

// p-capacity data for a body: the capacitary measure is input data, the
// capacity itself comes from the first-moment identity
// cp = (p-1)/(n-p) * Sum h_K(u_i) w_i.
struct CapacitarySetup {
    HPolytope body;
    double p = 0.0;
    DiscreteMeasure mu_p;
    Vec h_body;  // h_K at the measure atoms, cached
    double cp = 0.0;
};

namespace detail {

inline std::vector<Direction> atom_directions(const DiscreteMeasure& mu) {
    std::vector<Direction> dirs;
    dirs.reserve(mu.atoms.size());
    for (const Atom& a : mu.atoms) dirs.push_back(a.direction);
    return dirs;
}

} // namespace detail

inline double mixed_volume_q(const HPolytope& k, const HPolytope& l, double q) {
    if (k.dim != l.dim) throw validation_error("dimension mismatch");
    if (q == 0.0) throw validation_error("exponent q must be nonzero");
    const DiscreteMeasure s = surface_area_measure(k);
    const std::vector<Direction> dirs = detail::atom_directions(s);
    const Vec hk = support_batch(k, dirs);
    const Vec hl = support_batch(l, dirs);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.atoms.size(); ++i)
        acc += std::pow(hl[i] / hk[i], q) * hk[i] * s.atoms[i].weight;
    return acc / static_cast<double>(k.dim);
}

inline double orlicz_mixed_volume(const HPolytope& k, const HPolytope& l,
                                  const OrliczFunction& phi) {
    if (k.dim != l.dim) throw validation_error("dimension mismatch");
    const DiscreteMeasure s = surface_area_measure(k);
    const std::vector<Direction> dirs = detail::atom_directions(s);
    const Vec hk = support_batch(k, dirs);
    const Vec hl = support_batch(l, dirs);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.atoms.size(); ++i)
        acc += phi(hl[i] / hk[i]) * hk[i] * s.atoms[i].weight;
    return acc / static_cast<double>(k.dim);
}

inline double orlicz_mixed_volume_two(const HPolytope& k, const HPolytope& l,
                                      const OrliczFunction& phi, const OrliczFunction& psi) {
    if (k.dim != l.dim) throw validation_error("dimension mismatch");
    const DiscreteMeasure s = surface_area_measure(k);
    const std::vector<Direction> dirs = detail::atom_directions(s);
    const Vec hk = support_batch(k, dirs);
    const Vec hl = support_batch(l, dirs);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.atoms.size(); ++i)
        acc += phi(hl[i]) / psi(hk[i]) * s.atoms[i].weight;
    return acc / static_cast<double>(k.dim);
}

// lambda* with (1/?) Int phi(n|K| h_L / (lambda h_K)) h_K dS = n|K|.
inline FunctionalValue hat_orlicz_mixed_volume(const HPolytope& k, const HPolytope& l,
                                               const OrliczFunction& phi) {
    if (phi.class_tag != PhiClass::I)
        throw validation_error("homogeneous mixed volume needs a class-I function");
    if (k.dim != l.dim) throw validation_error("dimension mismatch");
    const DiscreteMeasure s = surface_area_measure(k);
    const std::vector<Direction> dirs = detail::atom_directions(s);
    const Vec hk = support_batch(k, dirs);
    const Vec hl = support_batch(l, dirs);
    const double nvol = static_cast<double>(k.dim) * volume(k);
    auto g = [&](double lambda) {
        double acc = 0.0;
        for (std::size_t i = 0; i < s.atoms.size(); ++i)
            acc += phi(nvol * hl[i] / (lambda * hk[i])) * hk[i] * s.atoms[i].weight;
        return acc;
    };
    FunctionalValue out;
    out.value = monotone_bisect(g, nvol);
    out.residual = std::fabs(g(out.value) - nvol) / nvol;
    return out;
}

inline CapacitarySetup cp_from_measure(const HPolytope& k, double p, DiscreteMeasure mu_p) {
    const auto n = static_cast<double>(k.dim);
    if (!(p > 1.0 && p < n)) throw validation_error("capacity exponent must lie in (1, dim)");
    if (mu_p.dim != k.dim) throw validation_error("dimension mismatch");
    if (mu_p.hemisphere_ok == HemisphereStatus::unchecked) hemisphere_check(mu_p);
    if (mu_p.hemisphere_ok != HemisphereStatus::passes)
        throw validation_error("capacitary measure concentrated on a hemisphere");
    CapacitarySetup setup;
    setup.body = k;
    setup.p = p;
    setup.h_body = support_batch(k, detail::atom_directions(mu_p));
    setup.mu_p = std::move(mu_p);
    double first_moment = 0.0;
    for (std::size_t i = 0; i < setup.mu_p.atoms.size(); ++i)
        first_moment += setup.h_body[i] * setup.mu_p.atoms[i].weight;
    setup.cp = (p - 1.0) / (n - p) * first_moment;
    return setup;
}

// Probability measure with weights (p-1)/(n-p) * h_K(u_i)/C_p(K) * w_i.
inline DiscreteMeasure normalized_capacitary_measure(const CapacitarySetup& setup) {
    const auto n = static_cast<double>(setup.body.dim);
    DiscreteMeasure star = setup.mu_p;
    for (std::size_t i = 0; i < star.atoms.size(); ++i)
        star.atoms[i].weight *= (setup.p - 1.0) / (n - setup.p) * setup.h_body[i] / setup.cp;
    return star;
}

// Closed-form p-capacity of the unit ball.
inline double ball_pcapacity(std::size_t dim, double p) {
    const auto n = static_cast<double>(dim);
    return std::pow((n - p) / (p - 1.0), p - 1.0) * n * unit_ball_volume(dim);
}

inline CapacitarySetup ball_capacitary_setup(std::size_t dim, double p, double r,
                                             std::size_t resolution) {
    const auto n = static_cast<double>(dim);
    if (!(p > 1.0 && p < n)) throw validation_error("capacity exponent must lie in (1, dim)");
    if (!(r > 0.0)) throw validation_error("ball radius must be positive");
    const auto grid = sphere_grid(dim, resolution);
    // total mass chosen so the first-moment identity lands exactly on
    // r^{n-p} * C_p(B)
    const double mass = std::pow(r, n - p - 1.0) * std::pow((n - p) / (p - 1.0), p) * n *
                        unit_ball_volume(dim);
    double grid_mass = 0.0;
    for (const auto& [d, w] : grid) {
        (void)d;
        grid_mass += w;
    }
    std::vector<std::pair<Vec, double>> atoms;
    for (const auto& [d, w] : grid) atoms.emplace_back(d.coords, w * mass / grid_mass);
    DiscreteMeasure mu = make_measure(dim, atoms);
    mu.hemisphere_ok = HemisphereStatus::passes;  // full grid by construction

    CapacitarySetup setup;
    setup.body = ball_hpolytope(dim, r, resolution);
    setup.p = p;
    setup.mu_p = std::move(mu);
    setup.h_body.assign(setup.mu_p.atoms.size(), r);  // tangent planes are tight
    setup.cp = (p - 1.0) / (n - p) * r * mass;
    return setup;
}

inline double orlicz_mixed_pcapacity(const CapacitarySetup& setup, const HPolytope& l,
                                     const OrliczFunction& phi) {
    if (setup.body.dim != l.dim) throw validation_error("dimension mismatch");
    const auto n = static_cast<double>(setup.body.dim);
    const Vec hl = support_batch(l, detail::atom_directions(setup.mu_p));
    double acc = 0.0;
    for (std::size_t i = 0; i < setup.mu_p.atoms.size(); ++i)
        acc += phi(hl[i] / setup.h_body[i]) * setup.h_body[i] * setup.mu_p.atoms[i].weight;
    return (setup.p - 1.0) / (n - setup.p) * acc;
}

// eta* with Sum phi(C_p(K) h_L / (eta h_K)) dmu* = 1 over the
// normalized capacitary measure.
inline FunctionalValue hat_orlicz_mixed_pcapacity(const CapacitarySetup& setup,
                                                  const HPolytope& l,
                                                  const OrliczFunction& phi) {
    if (setup.body.dim != l.dim) throw validation_error("dimension mismatch");
    const DiscreteMeasure star = normalized_capacitary_measure(setup);
    const Vec hl = support_batch(l, detail::atom_directions(star));
    auto g = [&](double eta) {
        double acc = 0.0;
        for (std::size_t i = 0; i < star.atoms.size(); ++i)
            acc += phi(setup.cp * hl[i] / (eta * setup.h_body[i])) * star.atoms[i].weight;
        return acc;
    };
    FunctionalValue out;
    out.value = monotone_bisect(g, 1.0);
    out.residual = std::fabs(g(out.value) - 1.0);
    return out;
}

struct AuditReport {
    std::string kind;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // (lhs - rhs)/rhs, reported even when negative
};

namespace detail {

inline AuditReport finish_audit(std::string kind, double lhs, double rhs) {
    return {std::move(kind), lhs, rhs, (lhs - rhs) / rhs};
}

} // namespace detail

// V_q(K,L) >= |K|^{(n-q)/n} |L|^{q/n}
inline AuditReport audit_lq_minkowski(const HPolytope& k, const HPolytope& l, double q) {
    const auto n = static_cast<double>(k.dim);
    const double lhs = mixed_volume_q(k, l, q);
    const double rhs = std::pow(volume(k), (n - q) / n) * std::pow(volume(l), q / n);
    return detail::finish_audit("lq_minkowski", lhs, rhs);
}

// V_phi(K,L) >= |K| phi((|L|/|K|)^{1/n}), convex phi
inline AuditReport audit_orlicz_minkowski(const HPolytope& k, const HPolytope& l,
                                          const OrliczFunction& phi) {
    const auto n = static_cast<double>(k.dim);
    const double vk = volume(k);
    const double lhs = orlicz_mixed_volume(k, l, phi);
    const double rhs = vk * phi(std::pow(volume(l) / vk, 1.0 / n));
    return detail::finish_audit("orlicz_minkowski", lhs, rhs);
}

// hat V_phi(K,L) >= n |K|^{(n-1)/n} |L|^{1/n}
inline AuditReport audit_hat_minkowski(const HPolytope& k, const HPolytope& l,
                                       const OrliczFunction& phi) {
    const auto n = static_cast<double>(k.dim);
    const double lhs = hat_orlicz_mixed_volume(k, l, phi).value;
    const double rhs = n * std::pow(volume(k), (n - 1.0) / n) * std::pow(volume(l), 1.0 / n);
    return detail::finish_audit("hat_minkowski", lhs, rhs);
}

// C_p(K) >= n omega_n^{p/n} ((n-p)/(p-1))^{p-1} |K|^{(n-p)/n}. The
// volume is caller-supplied so exact values (analytic ball volume) can
// be used where the polytope volume would only be approximate.
inline AuditReport audit_isocapacitary(const CapacitarySetup& setup, double body_volume) {
    const auto n = static_cast<double>(setup.body.dim);
    const double p = setup.p;
    const double rhs = n * std::pow(unit_ball_volume(setup.body.dim), p / n) *
                       std::pow((n - p) / (p - 1.0), p - 1.0) *
                       std::pow(body_volume, (n - p) / n);
    return detail::finish_audit("isocapacitary", setup.cp, rhs);
}

// C_{p,phi}(K,L) >= C_p(K) phi((C_p(L)/C_p(K))^{1/(n-p)}), convex phi.
// C_p(L) is caller-supplied (closed form for balls).
inline AuditReport audit_capacitary_orlicz(const CapacitarySetup& setup, const HPolytope& l,
                                           double cp_l, const OrliczFunction& phi) {
    const auto n = static_cast<double>(setup.body.dim);
    const double lhs = orlicz_mixed_pcapacity(setup, l, phi);
    const double rhs =
        setup.cp * phi(std::pow(cp_l / setup.cp, 1.0 / (n - setup.p)));
    return detail::finish_audit("capacitary_orlicz", lhs, rhs);
}

// hat C_{p,phi}(K,L) >= C_p(K)^{1-1/(n-p)} C_p(L)^{1/(n-p)}
inline AuditReport audit_capacitary_hat(const CapacitarySetup& setup, const HPolytope& l,
                                        double cp_l, const OrliczFunction& phi) {
    const auto n = static_cast<double>(setup.body.dim);
    const double lhs = hat_orlicz_mixed_pcapacity(setup, l, phi).value;
    const double rhs = setup.cp * std::pow(cp_l / setup.cp, 1.0 / (n - setup.p));
    return detail::finish_audit("capacitary_hat", lhs, rhs);
}

} // namespace pettylab
