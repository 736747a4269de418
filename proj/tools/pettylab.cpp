// Command-line surface: validation, functional evaluation, solving,
// experiments, and report emission.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pettylab/io.hpp"
#include "pettylab/samples.hpp"
#include "pettylab/solver.hpp"

namespace {

using namespace pettylab;

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw validation_error("cannot parse number '" + item + "' in list");
        }
    }
    if (out.empty()) throw validation_error("empty number list");
    return out;
}

ObjectiveMode mode_from_string(const std::string& s) {
    if (s == "plain_polar") return ObjectiveMode::plain_polar;
    if (s == "orlicz_norm") return ObjectiveMode::orlicz_norm;
    if (s == "capacitary_nonhom") return ObjectiveMode::capacitary_nonhom;
    if (s == "capacitary_hom") return ObjectiveMode::capacitary_hom;
    if (s == "variational") return ObjectiveMode::variational;
    if (s == "volume_normalized") return ObjectiveMode::volume_normalized;
    throw validation_error("unknown mode '" + s + "'");
}

struct Options {
    std::string measure_path, body_path, body2_path, setup_path, out_dir;
    std::string phi_spec = "pow:1", psi_spec, mode = "plain_polar", format = "json";
    std::string functional, kind, u_spec, values_spec, deltas = "1e-2,1e-3,1e-4";
    std::string epsilons = "0.5,0.2,0.1,0.05";
    std::vector<double> ball;  // n p r resolution
    double p = 2.0, q = 1.0, tol = 1e-10;
    int starts = 8, count = 20;
    std::uint64_t seed = 1;
    std::size_t resolution = 2048;
    bool homogeneous = false;
};

DiscreteMeasure need_measure(const Options& opt) {
    if (opt.measure_path.empty()) throw validation_error("--measure is required");
    return measure_from_json(load_json(opt.measure_path));
}

HPolytope need_body(const std::string& path, const char* flag) {
    if (path.empty()) throw validation_error(std::string(flag) + " is required");
    return body_from_json(load_json(path));
}

CapacitarySetup need_setup(const Options& opt) {
    if (!opt.ball.empty()) {
        if (opt.ball.size() != 4)
            throw validation_error("--ball needs four values: dim p r resolution");
        return ball_capacitary_setup(static_cast<std::size_t>(opt.ball[0]), opt.ball[1],
                                     opt.ball[2], static_cast<std::size_t>(opt.ball[3]));
    }
    if (opt.setup_path.empty()) throw validation_error("--setup or --ball is required");
    return setup_from_json(load_json(opt.setup_path), opt.setup_path);
}

SolveConfig solve_config(const Options& opt) {
    SolveConfig cfg;
    cfg.starts = opt.starts;
    cfg.seed = opt.seed;
    cfg.tol = opt.tol;
    return cfg;
}

void emit(const Options& opt, const std::string& name, const std::string& content) {
    if (opt.out_dir.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::create_directories(opt.out_dir);
    save_text((std::filesystem::path(opt.out_dir) / name).string(), content);
}

ObjectiveSpec build_spec(const Options& opt, const DiscreteMeasure& mu) {
    ObjectiveSpec spec;
    spec.mode = mode_from_string(opt.mode);
    spec.measure = mu;
    spec.phi = parse_phi(opt.phi_spec);
    if (spec.mode == ObjectiveMode::variational) {
        const HPolytope k = need_body(opt.body_path, "--body");
        std::vector<Direction> dirs;
        for (const Atom& a : mu.atoms) dirs.push_back(a.direction);
        spec.denominators = support_batch(k, dirs);
    }
    return spec;
}

void emit_report(const Options& opt, const SolveReport& report,
                 const DiscreteMeasure* mu) {
    emit(opt, "report.json", report_to_json(report).dump(2) + "\n");
    if (!opt.out_dir.empty() && report.normalized_body.dim == 2)
        save_text((std::filesystem::path(opt.out_dir) / "report.svg").string(),
                  body_svg(report.normalized_body, mu));
}

int cmd_check_measure(const Options& opt) {
    DiscreteMeasure mu = need_measure(opt);
    const HemisphereResult res = hemisphere_check(mu);
    Json j;
    j["passes"] = res.passes;
    if (res.witness) j["witness"] = res.witness->coords;
    emit(opt, "check.json", j.dump(2) + "\n");
    return 0;
}

int cmd_eval(const Options& opt) {
    const std::string& fn = opt.functional;
    if (fn.empty()) throw validation_error("--functional is required");
    double value = 0.0;
    if (fn == "volume") {
        value = volume(need_body(opt.body_path, "--body"));
    } else if (fn == "polar_volume") {
        value = polar_volume(need_body(opt.body_path, "--body"));
    } else if (fn == "support") {
        if (opt.u_spec.empty()) throw validation_error("--u is required");
        value = support_eval(need_body(opt.body_path, "--body"), parse_list(opt.u_spec));
    } else if (fn == "mixed_volume_q") {
        value = mixed_volume_q(need_body(opt.body_path, "--body"),
                               need_body(opt.body2_path, "--body2"), opt.q);
    } else if (fn == "orlicz_mixed_volume") {
        value = orlicz_mixed_volume(need_body(opt.body_path, "--body"),
                                    need_body(opt.body2_path, "--body2"),
                                    parse_phi(opt.phi_spec));
    } else if (fn == "orlicz_mixed_volume_two") {
        if (opt.psi_spec.empty()) throw validation_error("--psi is required");
        value = orlicz_mixed_volume_two(need_body(opt.body_path, "--body"),
                                        need_body(opt.body2_path, "--body2"),
                                        parse_phi(opt.phi_spec), parse_phi(opt.psi_spec));
    } else if (fn == "hat_orlicz_mixed_volume") {
        value = hat_orlicz_mixed_volume(need_body(opt.body_path, "--body"),
                                        need_body(opt.body2_path, "--body2"),
                                        parse_phi(opt.phi_spec))
                    .value;
    } else if (fn == "luxemburg") {
        if (opt.values_spec.empty()) throw validation_error("--values is required");
        value = luxemburg_norm(parse_list(opt.values_spec), need_measure(opt),
                               parse_phi(opt.phi_spec));
    } else if (fn == "cp") {
        value = need_setup(opt).cp;
    } else if (fn == "orlicz_mixed_pcapacity") {
        value = orlicz_mixed_pcapacity(need_setup(opt), need_body(opt.body2_path, "--body2"),
                                       parse_phi(opt.phi_spec));
    } else if (fn == "hat_orlicz_mixed_pcapacity") {
        value = hat_orlicz_mixed_pcapacity(need_setup(opt),
                                           need_body(opt.body2_path, "--body2"),
                                           parse_phi(opt.phi_spec))
                    .value;
    } else if (fn == "objective") {
        ObjectiveSpec spec;
        const ObjectiveMode mode = mode_from_string(opt.mode);
        if (mode == ObjectiveMode::capacitary_nonhom || mode == ObjectiveMode::capacitary_hom) {
            const CapacitarySetup setup = need_setup(opt);
            spec.mode = mode;
            spec.measure = setup.mu_p;
            spec.phi = parse_phi(opt.phi_spec);
            spec.denominators = setup.h_body;
            spec.p = setup.p;
            spec.cp = setup.cp;
        } else {
            spec = build_spec(opt, need_measure(opt));
        }
        const HPolytope candidate = need_body(opt.body_path.empty() ? opt.body2_path
                                                                    : opt.body_path,
                                              "--body");
        std::vector<Direction> dirs;
        for (const Atom& a : spec.measure.atoms) dirs.push_back(a.direction);
        validate_spec(spec);
        value = objective_eval(spec, support_batch(candidate, dirs));
    } else {
        throw validation_error("unknown functional '" + fn + "'");
    }
    Json j;
    j["functional"] = fn;
    j["value"] = value;
    emit(opt, "eval.json", j.dump(2) + "\n");
    return 0;
}

int cmd_solve(const Options& opt) {
    const DiscreteMeasure mu = need_measure(opt);
    ObjectiveSpec spec = build_spec(opt, mu);
    const SolveReport report = solve(std::move(spec), solve_config(opt));
    emit_report(opt, report, &mu);
    return 0;
}

int cmd_capacitary(const Options& opt) {
    const CapacitarySetup setup = need_setup(opt);
    const SolveReport report = solve_capacitary_petty(setup, parse_phi(opt.phi_spec),
                                                      opt.homogeneous, solve_config(opt));
    emit_report(opt, report, &setup.mu_p);
    return 0;
}

int cmd_continuity(const Options& opt) {
    const DiscreteMeasure mu = need_measure(opt);
    const ObjectiveSpec spec = build_spec(opt, mu);
    const auto rows = continuity_experiment(spec, parse_list(opt.deltas), opt.seed,
                                            solve_config(opt));
    emit(opt, "continuity.csv", continuity_csv(rows));
    return 0;
}

int cmd_degenerate(const Options& opt) {
    const DiscreteMeasure mu = need_measure(opt);
    DegenerateKind kind;
    if (opt.kind == "i")
        kind = DegenerateKind::shrinking_infimum;
    else if (opt.kind == "ii")
        kind = DegenerateKind::exploding_supremum;
    else
        throw validation_error("--kind must be i or ii");
    const auto rows = degenerate_family_demo(kind, mu, parse_phi(opt.phi_spec),
                                             parse_list(opt.epsilons), opt.resolution);
    emit(opt, "degenerate.csv", degenerate_csv(rows));
    return 0;
}

int cmd_audit(const Options& opt) {
    std::vector<AuditReport> rows;
    if (!opt.kind.empty()) {
        if (opt.kind == "lq") {
            rows.push_back(audit_lq_minkowski(need_body(opt.body_path, "--body"),
                                              need_body(opt.body2_path, "--body2"), opt.q));
        } else if (opt.kind == "orlicz") {
            rows.push_back(audit_orlicz_minkowski(need_body(opt.body_path, "--body"),
                                                  need_body(opt.body2_path, "--body2"),
                                                  parse_phi(opt.phi_spec)));
        } else if (opt.kind == "hat") {
            rows.push_back(audit_hat_minkowski(need_body(opt.body_path, "--body"),
                                               need_body(opt.body2_path, "--body2"),
                                               parse_phi(opt.phi_spec)));
        } else if (opt.kind == "isocapacitary") {
            const CapacitarySetup setup = need_setup(opt);
            const double vol =
                !opt.ball.empty()
                    ? std::pow(opt.ball[2], static_cast<double>(setup.body.dim)) *
                          unit_ball_volume(setup.body.dim)
                    : volume(setup.body);
            rows.push_back(audit_isocapacitary(setup, vol));
        } else {
            throw validation_error("unknown audit kind '" + opt.kind + "'");
        }
    } else {
        // seeded battery over random pairs and ball setups
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> radius(0.5, 2.0);
        const OrliczFunction phi = parse_phi(opt.phi_spec);
        for (int i = 0; i < opt.count; ++i) {
            const HPolytope k = random_body(2, rng);
            const HPolytope l = random_body(2, rng);
            rows.push_back(audit_lq_minkowski(k, l, 1.0));
            rows.push_back(audit_lq_minkowski(k, l, 2.0));
            rows.push_back(audit_orlicz_minkowski(k, l, phi));
            rows.push_back(audit_hat_minkowski(k, l, phi));
        }
        for (int i = 0; i < opt.count; ++i) {
            const double pexp = 1.5 + (i % 3) * 0.5;
            const double rk = radius(rng);
            const double rl = radius(rng);
            const CapacitarySetup setup = ball_capacitary_setup(3, pexp, rk, 200);
            rows.push_back(audit_isocapacitary(setup, rk * rk * rk * unit_ball_volume(3)));
            const HPolytope l = ball_hpolytope(3, rl, 200);
            const double cp_l = std::pow(rl, 3.0 - pexp) * ball_pcapacity(3, pexp);
            rows.push_back(audit_capacitary_orlicz(setup, l, cp_l, phi));
            rows.push_back(audit_capacitary_hat(setup, l, cp_l, phi));
        }
    }
    emit(opt, "audit.csv", audit_csv(rows));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete polar Orlicz geometry toolkit"};
    app.require_subcommand(1);
    Options opt;
    std::function<int(const Options&)> action;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--measure", opt.measure_path, "measure JSON file");
        sub->add_option("--body", opt.body_path, "body JSON file");
        sub->add_option("--body2", opt.body2_path, "second body JSON file");
        sub->add_option("--setup", opt.setup_path, "capacitary setup JSON file");
        sub->add_option("--phi", opt.phi_spec, "orlicz spec: pow:q, ipow:q, expn");
        sub->add_option("--psi", opt.psi_spec, "second orlicz spec");
        sub->add_option("--mode", opt.mode, "objective mode");
        sub->add_option("--p", opt.p, "capacity exponent");
        sub->add_option("--q", opt.q, "mixed volume exponent");
        sub->add_option("--starts", opt.starts, "optimizer starts");
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--tol", opt.tol, "objective tolerance");
        sub->add_option("--out", opt.out_dir, "output directory (default: stdout)");
        sub->add_option("--format", opt.format, "stdout format");
        sub->add_option("--ball", opt.ball, "ball setup: dim p r resolution")->expected(4);
        sub->add_option("--deltas", opt.deltas, "comma list of perturbation sizes");
        sub->add_option("--epsilons", opt.epsilons, "comma list of squash parameters");
        sub->add_option("--u", opt.u_spec, "direction, comma separated");
        sub->add_option("--values", opt.values_spec, "value list, comma separated");
        sub->add_option("--kind", opt.kind, "audit/degeneracy kind");
        sub->add_option("--functional", opt.functional, "functional name for eval");
        sub->add_option("--resolution", opt.resolution, "grid resolution");
        sub->add_option("--count", opt.count, "battery instance count");
        sub->add_flag("--homogeneous", opt.homogeneous, "use the homogeneous objective");
    };
    struct Cmd {
        const char* name;
        const char* help;
        int (*run)(const Options&);
    };
    const Cmd cmds[] = {
        {"check-measure", "hemisphere verdict with witness", cmd_check_measure},
        {"eval", "evaluate one functional", cmd_eval},
        {"solve", "minimize an objective over support vectors", cmd_solve},
        {"capacitary", "capacitary minimization from a setup or ball", cmd_capacitary},
        {"continuity", "objective/body drift under measure perturbation", cmd_continuity},
        {"degenerate", "unattained infimum/supremum trend tables", cmd_degenerate},
        {"audit", "inequality margin reports", cmd_audit},
    };
    for (const Cmd& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub);
        sub->callback([&action, run = c.run] { action = run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return action(opt);
    } catch (const pettylab::validation_error& e) {
        pettylab::Json err{{"error", "validation"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const pettylab::numeric_error& e) {
        pettylab::Json err{{"error", "numeric"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        pettylab::Json err{{"error", "validation"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
}
