#pragma once

// JSON interchange for measures, bodies, and capacitary setups; CSV
// trend tables; a small SVG emitter for 2D figures. All writers are
// deterministic: ordered keys and fixed float formatting.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pettylab/body.hpp"
#include "pettylab/errors.hpp"
#include "pettylab/functionals.hpp"
#include "pettylab/measure.hpp"
#include "pettylab/solver.hpp"

namespace pettylab {

using Json = nlohmann::ordered_json;

inline Json measure_to_json(const DiscreteMeasure& mu) {
    Json j;
    j["dim"] = mu.dim;
    j["atoms"] = Json::array();
    for (const Atom& a : mu.atoms)
        j["atoms"].push_back(Json{{"u", a.direction.coords}, {"w", a.weight}});
    return j;
}

inline DiscreteMeasure measure_from_json(const Json& j) {
    if (!j.contains("dim") || !j.contains("atoms"))
        throw validation_error("measure JSON needs 'dim' and 'atoms'");
    const auto dim = j.at("dim").get<std::size_t>();
    std::vector<std::pair<Vec, double>> raw;
    for (const Json& a : j.at("atoms"))
        raw.emplace_back(a.at("u").get<Vec>(), a.at("w").get<double>());
    return make_measure(dim, raw);
}

inline Json body_to_json(const HPolytope& p) {
    Json j;
    j["dim"] = p.dim;
    j["normals"] = Json::array();
    for (const Direction& d : p.normals) j["normals"].push_back(d.coords);
    j["supports"] = p.supports;
    return j;
}

inline HPolytope body_from_json(const Json& j) {
    if (!j.contains("dim") || !j.contains("normals") || !j.contains("supports"))
        throw validation_error("body JSON needs 'dim', 'normals', 'supports'");
    return make_hpolytope(j.at("dim").get<std::size_t>(),
                          j.at("normals").get<std::vector<Vec>>(),
                          j.at("supports").get<Vec>());
}

inline Json vertex_set_to_json(const VertexSet& v) {
    Json j;
    j["dim"] = v.dim;
    j["points"] = v.points;
    return j;
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw validation_error("cannot parse JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write file: " + path);
    out << text;
}

inline void save_json(const std::string& path, const Json& j) {
    save_text(path, j.dump(2) + "\n");
}

// Setup JSON: {"body": <file or inline object>, "p": x, "mu_p": <measure>}.
// A body given as a file path resolves relative to the setup file.
inline CapacitarySetup setup_from_json(const Json& j, const std::string& base_path = "") {
    if (!j.contains("body") || !j.contains("p") || !j.contains("mu_p"))
        throw validation_error("setup JSON needs 'body', 'p', 'mu_p'");
    HPolytope body;
    if (j.at("body").is_string()) {
        std::filesystem::path p = j.at("body").get<std::string>();
        if (p.is_relative() && !base_path.empty())
            p = std::filesystem::path(base_path).parent_path() / p;
        body = body_from_json(load_json(p.string()));
    } else {
        body = body_from_json(j.at("body"));
    }
    return cp_from_measure(body, j.at("p").get<double>(), measure_from_json(j.at("mu_p")));
}

inline Json setup_to_json(const CapacitarySetup& setup) {
    Json j;
    j["body"] = body_to_json(setup.body);
    j["p"] = setup.p;
    j["mu_p"] = measure_to_json(setup.mu_p);
    j["cp"] = setup.cp;
    return j;
}

inline Json report_to_json(const SolveReport& r) {
    Json j;
    j["objective"] = r.objective;
    j["optimal_supports"] = r.optimal_supports;
    j["normalized_body"] = body_to_json(r.normalized_body);
    j["starts_used"] = r.starts_used;
    j["per_start_objectives"] = r.per_start_objectives;
    j["max_gradient_residual"] = r.max_gradient_residual;
    j["facet_activity"] = r.facet_activity;
    j["nonuniqueness_warning"] = r.nonuniqueness_warning;
    return j;
}

namespace detail {

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace detail

inline std::string audit_csv(const std::vector<AuditReport>& rows) {
    std::ostringstream out;
    out << "kind,lhs,rhs,margin\n";
    for (const AuditReport& r : rows)
        out << r.kind << ',' << detail::fmt(r.lhs) << ',' << detail::fmt(r.rhs) << ','
            << detail::fmt(r.margin) << '\n';
    return out.str();
}

inline std::string continuity_csv(const std::vector<ContinuityRow>& rows) {
    std::ostringstream out;
    out << "delta,objective_shift,hausdorff\n";
    for (const ContinuityRow& r : rows)
        out << detail::fmt(r.delta) << ',' << detail::fmt(r.objective_shift) << ','
            << detail::fmt(r.body_distance) << '\n';
    return out.str();
}

inline std::string degenerate_csv(const std::vector<DegenerateRow>& rows) {
    std::ostringstream out;
    out << "epsilon,objective\n";
    for (const DegenerateRow& r : rows)
        out << detail::fmt(r.epsilon) << ',' << detail::fmt(r.objective) << '\n';
    return out.str();
}

// 2D figure: body outline, polar body overlay, measure atoms as rays.
inline std::string body_svg(const HPolytope& p, const DiscreteMeasure* mu = nullptr) {
    if (p.dim != 2) throw validation_error("SVG output is 2D only");
    const VertexSet vs = vertices(p);
    const VertexSet pv = polar_vertices(p);
    double extent = 1e-9;
    for (const Vec& v : vs.points) extent = std::max({extent, std::fabs(v[0]), std::fabs(v[1])});
    for (const Vec& v : pv.points) extent = std::max({extent, std::fabs(v[0]), std::fabs(v[1])});
    const double view = 1.1 * extent;
    const double size = 480.0;
    auto px = [&](double x) { return detail::fmt(size * 0.5 * (1.0 + x / view)); };
    auto py = [&](double y) { return detail::fmt(size * 0.5 * (1.0 - y / view)); };
    auto polygon = [&](const std::vector<Vec>& pts, const char* style) {
        // angular sort for a closed outline
        std::vector<Vec> ordered = pts;
        std::sort(ordered.begin(), ordered.end(), [](const Vec& a, const Vec& b) {
            return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
        });
        std::ostringstream s;
        s << "<polygon points=\"";
        for (const Vec& v : ordered) s << px(v[0]) << ',' << py(v[1]) << ' ';
        s << "\" style=\"" << style << "\"/>\n";
        return s.str();
    };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
           "viewBox=\"0 0 480 480\">\n";
    out << polygon(vs.points, "fill:none;stroke:#1f4e79;stroke-width:2");
    out << polygon(pv.points, "fill:none;stroke:#b05020;stroke-width:1.5;stroke-dasharray:6 3");
    if (mu != nullptr) {
        double wmax = 0.0;
        for (const Atom& a : mu->atoms) wmax = std::max(wmax, a.weight);
        for (const Atom& a : mu->atoms) {
            const double len = extent * a.weight / wmax;
            out << "<line x1=\"" << px(0.0) << "\" y1=\"" << py(0.0) << "\" x2=\""
                << px(len * a.direction.coords[0]) << "\" y2=\""
                << py(len * a.direction.coords[1])
                << "\" style=\"stroke:#5a8f3c;stroke-width:1\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace pettylab
