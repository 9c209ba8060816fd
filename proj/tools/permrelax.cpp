#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "permrelax/closed_form.hpp"
#include "permrelax/error.hpp"
#include "permrelax/kernels.hpp"
#include "permrelax/verify.hpp"

namespace pc = permrelax::cli;

int main(int argc, char** argv) {
    permrelax::kernels::configure_threads_from_env();

    CLI::App app{"l1-2 relaxation of permutation matrices: property suites and experiments"};
    app.require_subcommand(1);

    pc::CommonOptions common;
    const std::map<std::string, pc::Format> formats{{"csv", pc::Format::csv},
                                                    {"json", pc::Format::json}};
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--lambda", common.lambdas, "penalty weight (repeatable)");
        sub->add_option("--seed", common.seeds, "random seed (repeatable)");
        sub->add_option("--out", common.out, "output file (default stdout)");
        sub->add_option("--format", common.format, "csv or json")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    };

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a property suite");
    verify->add_option("suite", suite, "theorem1, theorem2, gradients, sinkhorn or rounding")
        ->required();
    add_common(verify);

    pc::QapOptions qap;
    auto* qap_cmd = app.add_subcommand("qap", "solve a graph matching / QAP instance");
    qap_cmd->add_option("instance", qap.instance, "instance file")->required();
    qap_cmd->add_flag("--general", qap.general, "trace objective instead of graph matching");
    qap_cmd->add_option("--restarts", qap.restarts, "optimizer restarts")
        ->check(CLI::PositiveNumber);
    add_common(qap_cmd);

    pc::CurvesOptions curves;
    auto* curves_cmd = app.add_subcommand("curves", "sample the closed-form example landscapes");
    curves_cmd->add_option("example", curves.example, "1, 2 or 3")->required();
    curves_cmd->add_option("--m", curves.ms, "shortcut strength for example 3 (repeatable)");
    curves_cmd->add_option("--points", curves.points, "samples per curve");
    add_common(curves_cmd);

    pc::ShuffleOptions shuffle;
    auto* shuffle_cmd = app.add_subcommand("shuffle", "synthetic shuffle recovery sweep");
    shuffle_cmd->add_option("--n", shuffle.n, "permutation size")->check(CLI::Range(2, 1000));
    shuffle_cmd->add_option("--samples", shuffle.samples, "dataset size");
    shuffle_cmd->add_option("--noise", shuffle.noise, "target noise std")
        ->check(CLI::NonNegativeNumber);
    shuffle_cmd->add_option("--restarts", shuffle.restarts, "restarts per lambda")
        ->check(CLI::PositiveNumber);
    shuffle_cmd->add_option("--iterations", shuffle.iterations, "optimizer iterations");
    shuffle_cmd->add_option("--trace-out", shuffle.trace_out, "per-run trace CSV");
    add_common(shuffle_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) return pc::cmd_verify(suite, common, std::cout);
        if (*qap_cmd) return pc::cmd_qap(qap, common);
        if (*curves_cmd) return pc::cmd_curves(curves, common);
        if (*shuffle_cmd) return pc::cmd_shuffle(shuffle, common);
    } catch (const pc::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const permrelax::UnknownSuite& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const permrelax::UnknownExample& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const permrelax::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
