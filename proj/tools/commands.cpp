#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "permrelax/closed_form.hpp"
#include "permrelax/penalty.hpp"
#include "permrelax/qap.hpp"
#include "permrelax/rounding.hpp"
#include "permrelax/shuffle_demo.hpp"
#include "permrelax/verify.hpp"

#include <unistd.h>

namespace permrelax::cli {

using nlohmann::json;

namespace {

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !std::isfinite(v)) {
        throw UsageError("--lambda expects a finite number, got '" + text + "'");
    }
    return v;
}

std::vector<double> parse_lambdas(const std::vector<std::string>& raw) {
    std::vector<double> out;
    for (const auto& text : raw) {
        out.push_back(parse_number(text));
    }
    return out;
}

std::string perm_text(const Permutation& p) {
    std::string s;
    for (std::size_t i = 0; i < p.n(); ++i) {
        s += (i ? " " : "") + std::to_string(p[i]);
    }
    return s;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
    }
    return rows;
}

json trace_json(const std::vector<TraceRecord>& trace) {
    json out = json::array();
    for (const auto& r : trace) {
        out.push_back({{"iteration", r.iteration},
                       {"loss", r.loss},
                       {"penalty", r.penalty},
                       {"constraint_violation", r.constraint_violation},
                       {"rounding_gap", r.rounding_gap},
                       {"argmax_agrees", r.argmax_agrees}});
    }
    return out;
}

std::ostringstream csv_stream() {
    std::ostringstream os;
    os.precision(12);
    return os;
}

}  // namespace

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path || path->empty() || *path == "-") {
        std::cout << text << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(*path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        f << text;
        f.flush();
        if (!f) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    fs::rename(tmp, target);
}

int cmd_verify(const std::string& suite, const CommonOptions& common, std::ostream& log) {
    if (common.seeds.size() > 1) {
        throw UsageError("verify takes at most one --seed");
    }
    const std::uint64_t seed = common.seeds.empty() ? 0 : common.seeds.front();
    const SuiteReport report = run_verify_suite(suite, seed);
    print_report(log, report);

    if (common.out) {
        std::string text;
        if (common.format == Format::json) {
            json checks = json::array();
            for (const auto& c : report.checks) {
                checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
            }
            text = json{{"suite", report.suite},
                        {"seed", seed},
                        {"passed", report.passed()},
                        {"checks", checks}}
                       .dump(2) +
                   "\n";
        } else {
            auto os = csv_stream();
            os << "suite,check,passed,detail\n";
            for (const auto& c : report.checks) {
                os << report.suite << ',' << c.name << ',' << (c.passed ? "true" : "false")
                   << ",\"" << c.detail << "\"\n";
            }
            text = os.str();
        }
        write_output(common.out, text);
    }
    return report.passed() ? 0 : 1;
}

int cmd_qap(const QapOptions& opts, const CommonOptions& common) {
    if (common.lambdas.size() > 1) {
        throw UsageError("qap takes at most one --lambda");
    }
    if (common.seeds.size() > 1) {
        throw UsageError("qap takes at most one --seed (restart seeds count up from it)");
    }
    std::ifstream file(opts.instance);
    if (!file) {
        throw UsageError("cannot read instance file " + opts.instance);
    }
    const QapInstance inst = read_qap_instance(
        file, opts.general ? QapKind::general_qap : QapKind::graph_matching);

    OptimizerConfig cfg = default_qap_config(inst);
    cfg.seed = common.seeds.empty() ? 0 : common.seeds.front();
    const double lambda =
        common.lambdas.empty() ? default_qap_lambda(inst) : parse_lambdas(common.lambdas).front();

    json report{{"n", inst.n()},
                {"kind", opts.general ? "general_qap" : "graph_matching"},
                {"seed", cfg.seed},
                {"restarts", opts.restarts}};

    std::optional<Permutation> convex_rounded;
    if (inst.kind == QapKind::graph_matching) {
        const RelaxedSolution relaxed = solve_convex_relaxed(inst, cfg, opts.restarts);
        convex_rounded = nearest_permutation_lap(relaxed.matrix);
        report["convex"] = {{"matrix", matrix_json(relaxed.matrix)},
                            {"objective", relaxed.objective},
                            {"penalty", penalty_value(relaxed.matrix)},
                            {"rounded", convex_rounded->map()},
                            {"rounded_objective", qap_objective(inst, *convex_rounded)}};
    } else {
        report["convex"] = {{"note", "convex relaxation only defined for graph matching"}};
    }

    const PenalizedSolution pen = solve_penalized(inst, lambda, cfg, opts.restarts);
    report["penalized"] = {{"lambda", lambda},
                           {"permutation", pen.permutation.map()},
                           {"objective", pen.objective},
                           {"penalty", pen.penalty},
                           {"seed", pen.seed},
                           {"relaxed", matrix_json(pen.relaxed)}};

    std::optional<OracleSolution> oracle;
    try {
        oracle = brute_force_oracle(inst);
        report["oracle"] = {{"permutation", oracle->permutation.map()},
                            {"objective", oracle->objective}};
        const double tol = 1e-9 * std::max(1.0, std::abs(oracle->objective));
        report["penalized_matches_oracle"] = std::abs(pen.objective - oracle->objective) <= tol;
        if (convex_rounded) {
            report["convex_matches_oracle"] =
                std::abs(qap_objective(inst, *convex_rounded) - oracle->objective) <= tol;
        }
    } catch (const TooLarge& e) {
        report["oracle"] = {{"skipped", e.what()}};
    }

    std::string text;
    if (common.format == Format::json) {
        text = report.dump(2) + "\n";
    } else {
        auto os = csv_stream();
        os << "solver,permutation,objective,penalty\n";
        if (convex_rounded) {
            os << "convex," << perm_text(*convex_rounded) << ','
               << report["convex"]["objective"].get<double>() << ','
               << report["convex"]["penalty"].get<double>() << '\n';
        }
        os << "penalized," << perm_text(pen.permutation) << ',' << pen.objective << ','
           << pen.penalty << '\n';
        if (oracle) {
            os << "oracle," << perm_text(oracle->permutation) << ',' << oracle->objective << ",0\n";
        }
        text = os.str();
    }
    write_output(common.out, text);
    return 0;
}

int cmd_curves(const CurvesOptions& opts, const CommonOptions& common) {
    if (opts.example < 1 || opts.example > 3) {
        throw UnknownExample(opts.example);
    }
    if (opts.points < 3) {
        throw UsageError("--points must be at least 3");
    }
    std::vector<double> lambdas = parse_lambdas(common.lambdas);
    if (lambdas.empty()) {
        switch (opts.example) {
            case 1: lambdas = {0.0, 0.25, 1.0, 2.0}; break;
            case 2: lambdas = {1.0, 1.8, 1.9, 2.0}; break;
            default: lambdas = {0.0, 0.4}; break;
        }
    }
    std::vector<double> ms = opts.example == 3 ? opts.ms : std::vector<double>{0.0};
    if (ms.empty()) {
        ms = {0.0, 1.0};
    }

    json doc = json::array();
    auto os = csv_stream();
    os << "example,m,lambda,kind,p,F,location,rounded\n";
    for (double m : ms) {
        for (double lambda : lambdas) {
            const ScalarFunction f = example_curve(opts.example, lambda, m);
            json samples = json::array();
            for (std::size_t k = 0; k < opts.points; ++k) {
                const double p = static_cast<double>(k) / static_cast<double>(opts.points - 1);
                const double v = f(p);
                os << opts.example << ',' << m << ',' << lambda << ",sample," << p << ',' << v
                   << ",,\n";
                samples.push_back({p, v});
            }
            // global minima only; symmetric landscapes have two
            const auto local = grid_local_minima(f, 0.0, 1.0, 2001);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& mn : local) {
                best = std::min(best, mn.value);
            }
            json minima = json::array();
            for (const auto& mn : local) {
                if (mn.value > best + 1e-9 * std::max(1.0, std::abs(best))) {
                    continue;
                }
                const bool endpoint = mn.argmin <= 1e-9 || mn.argmin >= 1.0 - 1e-9;
                const int rounded = mn.argmin >= 0.5 ? 1 : 0;
                os << opts.example << ',' << m << ',' << lambda << ",minimum," << mn.argmin << ','
                   << mn.value << ',' << (endpoint ? "endpoint" : "interior") << ',' << rounded
                   << '\n';
                minima.push_back({{"p", mn.argmin},
                                  {"F", mn.value},
                                  {"location", endpoint ? "endpoint" : "interior"},
                                  {"rounded", rounded}});
            }
            doc.push_back({{"example", opts.example},
                           {"m", m},
                           {"lambda", lambda},
                           {"samples", samples},
                           {"minima", minima}});
        }
    }
    write_output(common.out, common.format == Format::json ? doc.dump(2) + "\n" : os.str());
    return 0;
}

int cmd_shuffle(const ShuffleOptions& opts, const CommonOptions& common) {
    const std::vector<std::uint64_t> seeds =
        common.seeds.empty() ? std::vector<std::uint64_t>{0} : common.seeds;

    json doc = json::array();
    auto table = csv_stream();
    auto traces = csv_stream();
    table << "seed,lambda,relaxed_loss,rounded_loss,penalty,recovered,failure\n";
    traces << "seed,lambda,iteration,loss,penalty,constraint_violation,rounding_gap,"
              "argmax_agrees\n";

    for (std::uint64_t seed : seeds) {
        ShuffleTaskSpec spec;
        spec.n = opts.n;
        spec.samples = opts.samples;
        spec.noise_std = opts.noise;
        const GeneratedTask gen = generate_task(spec, seed);
        const ShuffleProblem problem(gen.task, gen.data);

        std::vector<double> lambdas;
        for (const auto& text : common.lambdas) {
            lambdas.push_back(text == "tuned" ? default_shuffle_lambda(problem)
                                              : parse_number(text));
        }
        if (lambdas.empty()) {
            lambdas = {0.0, default_shuffle_lambda(problem)};
        }
        OptimizerConfig cfg = default_shuffle_config(problem);
        cfg.seed = seed;
        if (opts.iterations) {
            cfg.total_iterations = opts.iterations;
            cfg.record_every = std::max<std::size_t>(1, opts.iterations / 8);
        }
        const auto rows = lambda_sweep(gen.task, gen.data, lambdas, cfg, opts.restarts);

        for (const auto& r : rows) {
            table << seed << ',' << r.lambda << ',' << r.relaxed_loss << ',' << r.rounded_loss
                  << ',' << r.penalty << ',' << (r.recovered ? "true" : "false") << ",\""
                  << r.failure << "\"\n";
            for (const auto& t : r.trace) {
                traces << seed << ',' << r.lambda << ',' << t.iteration << ',' << t.loss << ','
                       << t.penalty << ',' << t.constraint_violation << ',' << t.rounding_gap
                       << ',' << (t.argmax_agrees ? "true" : "false") << '\n';
            }
            doc.push_back({{"seed", seed},
                           {"n", opts.n},
                           {"lambda", r.lambda},
                           {"relaxed_loss", r.relaxed_loss},
                           {"rounded_loss", r.rounded_loss},
                           {"penalty", r.penalty},
                           {"recovered", r.recovered},
                           {"failure", r.failure},
                           {"trace", trace_json(r.trace)}});
        }
    }
    if (common.format == Format::json) {
        write_output(common.out, doc.dump(2) + "\n");
    } else {
        write_output(common.out, table.str());
    }
    if (opts.trace_out) {
        write_output(opts.trace_out, traces.str());
    }
    return 0;
}

}  // namespace permrelax::cli
