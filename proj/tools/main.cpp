#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smdagg/experiment.hpp"

namespace {

struct CliOptions {
    std::string algo = "smd-ama";
    std::string data;
    std::size_t label_col = 0;
    bool header = false;
    double mu = 0.3;
    std::string beta0 = "auto";
    std::size_t stumps_per_dim = 80;
    std::string loss = "squared";
    double split = 0.7;
    std::size_t reps = 10;
    std::uint64_t seed = 42;
    std::int64_t eval_every = 0;
    std::string oracle = "dataset";
    std::string out_dir = "out";
    bool avg_shift = false;
    std::size_t budget = 0;
    std::size_t candidate_size = 100;
    std::size_t boost_rounds = 50;
    std::vector<double> mus;
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--data", o.data, "numeric CSV dataset")->required();
    cmd->add_option("--label-col", o.label_col, "0-based label column index");
    cmd->add_flag("--header", o.header, "skip the first line of the CSV");
    cmd->add_option("--mu", o.mu, "exploration decay exponent in [0,1)");
    cmd->add_option("--beta0", o.beta0, "temperature constant, or 'auto'");
    cmd->add_option("--stumps-per-dim", o.stumps_per_dim, "stump thresholds per dimension");
    cmd->add_option("--loss", o.loss, "margin loss (squared)");
    cmd->add_option("--split", o.split, "train fraction in (0,1)");
    cmd->add_option("--reps", o.reps, "number of replicates");
    cmd->add_option("--seed", o.seed, "base seed; replicate r uses seed + r");
    cmd->add_option("--eval-every", o.eval_every,
                    "rounds between test evaluations (0 = stream length / 200)");
    cmd->add_option("--oracle", o.oracle, "label source: dataset or prompt")
        ->check(CLI::IsMember({"dataset", "prompt"}));
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_flag("--avg-shift", o.avg_shift,
                  "average pre-update iterates instead of post-update ones");
}

smdagg::ExperimentConfig to_config(const CliOptions& o) {
    smdagg::ExperimentConfig cfg;
    cfg.algo = smdagg::algo_from_name(o.algo);
    cfg.mu = o.mu;
    if (o.beta0 != "auto") {
        double value = 0.0;
        try {
            std::size_t consumed = 0;
            value = std::stod(o.beta0, &consumed);
            if (consumed != o.beta0.size()) throw std::invalid_argument(o.beta0);
        } catch (const std::exception&) {
            throw std::invalid_argument("--beta0 must be 'auto' or a positive number, got '" +
                                        o.beta0 + "'");
        }
        if (!(value > 0.0))
            throw std::invalid_argument("--beta0 must be 'auto' or a positive number, got '" +
                                        o.beta0 + "'");
        cfg.beta0 = value;
    }
    cfg.stumps_per_dim = o.stumps_per_dim;
    cfg.loss = smdagg::loss_from_name(o.loss).kind;
    cfg.replicates = o.reps;
    cfg.seed_base = o.seed;
    cfg.split_fraction = o.split;
    cfg.eval_every = o.eval_every;
    cfg.avg_shift = o.avg_shift;
    cfg.prompt_oracle = o.oracle == "prompt";
    cfg.qbb_budget = o.budget;
    cfg.qbb_candidate_size = o.candidate_size;
    cfg.qbb_boost_rounds = o.boost_rounds;
    return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_jsonl_file(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::string joined;
    for (const std::string& line : lines) {
        joined += line;
        joined += '\n';
    }
    write_file(path, joined);
}

void print_summary(const smdagg::ExperimentResult& res) {
    const smdagg::MetricsRecord& last = res.aggregated.back();
    std::printf("%s on %s: stream length %zu, %zu evaluation points\n", res.algo.c_str(),
                res.dataset.c_str(), res.stream_length, res.aggregated.size());
    std::printf("  final test error %.4f +- %.4f | final test loss %.4f +- %.4f\n",
                last.err_mean, last.err_std, last.loss_mean, last.loss_std);
    std::printf("  queries %.1f (fraction %.4f of the stream)\n", last.queries_mean,
                last.query_frac);
}

int cmd_run(const CliOptions& o) {
    smdagg::Dataset ds = smdagg::load_csv(o.data, o.label_col, o.header);
    smdagg::ExperimentResult res = smdagg::run_experiment(to_config(o), ds);

    std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    write_jsonl_file(dir / "metrics.jsonl", smdagg::to_jsonl(res));
    write_file(dir / "metrics.csv", smdagg::to_csv(res));

    print_summary(res);
    std::printf("wrote %s and %s\n", (dir / "metrics.jsonl").c_str(),
                (dir / "metrics.csv").c_str());
    return 0;
}

int cmd_sweep_mu(const CliOptions& o) {
    smdagg::Dataset ds = smdagg::load_csv(o.data, o.label_col, o.header);
    std::vector<smdagg::MuSweepRow> rows = smdagg::sweep_mu(to_config(o), ds, o.mus);

    std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "sweep.csv", smdagg::sweep_to_csv(rows));

    std::printf("mu sweep on %s (%zu replicates each):\n", ds.name.c_str(), o.reps);
    std::printf("  %8s %18s %18s\n", "mu", "final error", "queries");
    for (const smdagg::MuSweepRow& row : rows)
        std::printf("  %8.3f %9.4f +- %.4f %10.1f +- %.1f\n", row.mu, row.err_mean,
                    row.err_std, row.queries_mean, row.queries_std);
    std::printf("wrote %s\n", (dir / "sweep.csv").c_str());
    return 0;
}

int cmd_compare_qbb(const CliOptions& o) {
    smdagg::Dataset ds = smdagg::load_csv(o.data, o.label_col, o.header);
    smdagg::QbbComparison cmp = smdagg::match_budget_qbb(to_config(o), ds);

    std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "compare.csv", smdagg::comparison_to_csv(cmp));
    write_jsonl_file(dir / "smd_ama_metrics.jsonl", smdagg::to_jsonl(cmp.ama));
    write_file(dir / "smd_ama_metrics.csv", smdagg::to_csv(cmp.ama));
    write_jsonl_file(dir / "qbb_metrics.jsonl", smdagg::to_jsonl(cmp.qbb));
    write_file(dir / "qbb_metrics.csv", smdagg::to_csv(cmp.qbb));

    std::printf("budget-matched comparison on %s (budget %zu labels):\n", ds.name.c_str(),
                cmp.budget);
    std::printf("  smd-ama error %.4f +- %.4f\n", cmp.ama_error_mean, cmp.ama_error_std);
    std::printf("  qbb     error %.4f +- %.4f\n", cmp.qbb_error_mean, cmp.qbb_error_std);
    std::printf("wrote %s\n", (dir / "compare.csv").c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CliOptions o;
    CLI::App app{"Streaming active learning of convex stump aggregations"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand(
        "run", "run one algorithm over replicated splits and write metrics");
    run->add_option("--algo", o.algo, "smd-ama, smd-pma, or qbb")
        ->check(CLI::IsMember({"smd-ama", "smd-pma", "qbb"}));
    add_common_options(run, o);
    run->add_option("--budget", o.budget, "qbb label budget (0 = 10% of the pool)");
    run->add_option("--candidate-size", o.candidate_size, "qbb candidate sample size");
    run->add_option("--boost-rounds", o.boost_rounds, "qbb boosting rounds per refit");

    CLI::App* sweep = app.add_subcommand("sweep-mu", "trade-off table over a list of mu values");
    add_common_options(sweep, o);
    sweep->add_option("--mus", o.mus, "comma-separated mu values")->delimiter(',')->required();

    CLI::App* compare = app.add_subcommand(
        "compare-qbb", "run smd-ama, then qbb with the realized query count as budget");
    add_common_options(compare, o);
    compare->add_option("--candidate-size", o.candidate_size, "qbb candidate sample size");
    compare->add_option("--boost-rounds", o.boost_rounds, "qbb boosting rounds per refit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(o);
        if (sweep->parsed()) return cmd_sweep_mu(o);
        if (compare->parsed()) return cmd_compare_qbb(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
