#pragma once

// Orlicz function classes (increasing class I, decreasing class D), a
// builtin catalog, and the Luxemburg-style norm via bisection.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pettylab/errors.hpp"
#include "pettylab/measure.hpp"

namespace pettylab {

enum class PhiKind { power_increasing, power_decreasing, exp_normalized, custom };
enum class PhiClass { I, D };

struct OrliczFunction {
    PhiKind kind = PhiKind::custom;
    PhiClass class_tag = PhiClass::I;
    bool convex = false;
    std::function<double(double)> evaluator;
    std::function<double(double)> derivative;  // closed form for the catalog

    double operator()(double t) const { return evaluator(t); }

    double d(double t) const {
        if (derivative) return derivative(t);
        const double step = 1e-6 * (1.0 + t);
        return (evaluator(t + step) - evaluator(t - step)) / (2.0 * step);
    }
};

namespace detail {

// Finite sampling check of the class contract: phi(1)=1 and strict
// monotonicity in the right orientation across {1e-8, 1, 1e8}.
inline void check_phi_class(const OrliczFunction& phi) {
    const double lo = phi.evaluator(1e-8);
    const double mid = phi.evaluator(1.0);
    const double hi = phi.evaluator(1e8);
    if (std::fabs(mid - 1.0) > 1e-12)
        throw validation_error("orlicz function must satisfy phi(1)=1");
    if (phi.class_tag == PhiClass::I) {
        if (!(lo < mid && mid < hi))
            throw validation_error("class-I orlicz function is not increasing on samples");
    } else {
        if (!(lo > mid && mid > hi))
            throw validation_error("class-D orlicz function is not decreasing on samples");
    }
}

} // namespace detail

inline OrliczFunction make_phi(PhiKind kind, double q = 0.0) {
    OrliczFunction phi;
    phi.kind = kind;
    switch (kind) {
        case PhiKind::power_increasing:
            if (!(q > 0.0)) throw validation_error("power exponent must be positive");
            phi.class_tag = PhiClass::I;
            phi.convex = q >= 1.0;
            phi.evaluator = [q](double t) { return std::pow(t, q); };
            phi.derivative = [q](double t) { return q * std::pow(t, q - 1.0); };
            break;
        case PhiKind::power_decreasing:
            if (!(q > 0.0)) throw validation_error("power exponent must be positive");
            phi.class_tag = PhiClass::D;
            phi.convex = false;
            phi.evaluator = [q](double t) { return std::pow(t, -q); };
            phi.derivative = [q](double t) { return -q * std::pow(t, -q - 1.0); };
            break;
        case PhiKind::exp_normalized:
            phi.class_tag = PhiClass::I;
            phi.convex = true;
            phi.evaluator = [](double t) { return std::expm1(t) / std::expm1(1.0); };
            phi.derivative = [](double t) { return std::exp(t) / std::expm1(1.0); };
            break;
        case PhiKind::custom:
            throw validation_error("custom orlicz functions need an explicit evaluator");
    }
    detail::check_phi_class(phi);
    return phi;
}

// CLI spec strings: pow:q, ipow:q, expn.
inline OrliczFunction parse_phi(const std::string& spec) {
    auto parse_q = [&](std::size_t prefix_len) {
        try {
            return std::stod(spec.substr(prefix_len));
        } catch (const std::exception&) {
            throw validation_error("cannot parse exponent in orlicz spec '" + spec + "'");
        }
    };
    if (spec.rfind("pow:", 0) == 0)
        return make_phi(PhiKind::power_increasing, parse_q(4));
    if (spec.rfind("ipow:", 0) == 0)
        return make_phi(PhiKind::power_decreasing, parse_q(5));
    if (spec == "expn") return make_phi(PhiKind::exp_normalized);
    throw validation_error("unknown orlicz spec '" + spec + "' (expected pow:q, ipow:q, expn)");
}

// Shared root-finder: unique lambda in [2^-40, 2^40] with g(lambda) =
// target, for strictly monotone g. Bracket exhaustion means the
// evaluator is pathological for this engine.
inline double monotone_bisect(const std::function<double(double)>& g, double target,
                              double rel_tol = 1e-12) {
    double lo = std::ldexp(1.0, -40);
    double hi = std::ldexp(1.0, 40);
    double glo = g(lo) - target;
    double ghi = g(hi) - target;
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (glo * ghi > 0.0)
        throw numeric_error("bisection bracket exhausted: no sign change on [2^-40, 2^40]");
    for (int iter = 0; iter < 200 && (hi - lo) > rel_tol * hi; ++iter) {
        const double mid = std::sqrt(lo * hi);  // geometric mid suits the huge bracket
        const double gm = g(mid) - target;
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// The unique lambda with Sum_i w_i phi(f_i/lambda) = mass(mu). For
// class I the sum decreases in lambda, for class D it increases; the
// sign-detecting bisection covers both.
inline double luxemburg_norm(const std::vector<double>& values, const DiscreteMeasure& mu,
                             const OrliczFunction& phi) {
    if (values.size() != mu.atoms.size())
        throw validation_error("value list does not align with measure atoms");
    for (double v : values)
        if (!(v > 0.0)) throw validation_error("luxemburg norm needs positive values");
    const double mass = mu.total_mass();
    auto g = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            s += mu.atoms[i].weight * phi.evaluator(values[i] / lambda);
        return s;
    };
    return monotone_bisect(g, mass);
}

} // namespace pettylab
