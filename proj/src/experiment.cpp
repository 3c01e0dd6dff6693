#include "smdagg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "smdagg/active.hpp"
#include "smdagg/md_core.hpp"
#include "smdagg/rng.hpp"

namespace smdagg {

namespace {

constexpr std::uint64_t kSplitTag = 1;
constexpr std::uint64_t kRunTag = 2;
constexpr std::uint64_t kQbbTag = 3;

std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::vector<std::int64_t> make_eval_rounds(std::int64_t total, std::int64_t every) {
    std::int64_t step = every > 0 ? every : std::max<std::int64_t>(1, total / 200);
    std::vector<std::int64_t> rounds;
    for (std::int64_t t = step; t < total; t += step) rounds.push_back(t);
    rounds.push_back(total);
    return rounds;
}

// Reads labels from the terminal; EOF aborts the run.
LabelOracle prompt_oracle() {
    return [](std::size_t index, const Example& ex) -> int {
        std::cout << "label request for stream element " << index << ", x = [";
        for (std::size_t j = 0; j < ex.x.size(); ++j)
            std::cout << (j ? ", " : "") << ex.x[j];
        std::cout << "]\n";
        std::string line;
        while (true) {
            std::cout << "enter label (+1 or -1): " << std::flush;
            if (!std::getline(std::cin, line))
                throw OracleError("end of input while waiting for a label");
            if (line == "+1" || line == "1") return +1;
            if (line == "-1") return -1;
            std::cout << "unrecognized label '" << line << "'\n";
        }
    };
}

struct ReplicateContext {
    SplitResult split;
    Ensemble ensemble;
    LossSpec loss;
};

ReplicateContext prepare_replicate(const ExperimentConfig& cfg, const Dataset& ds,
                                   std::uint64_t replicate_seed) {
    ReplicateContext ctx;
    ctx.split = split_and_stream(ds, cfg.split_fraction, derive_seed(replicate_seed, kSplitTag));
    ctx.ensemble = build_stump_grid(ctx.split.train, cfg.stumps_per_dim);
    ctx.loss = make_loss(cfg.loss);
    return ctx;
}

void run_smd_replicate(const ExperimentConfig& cfg, const ReplicateContext& ctx,
                       std::size_t replicate, std::uint64_t replicate_seed,
                       ExperimentResult& out) {
    const std::int64_t total = static_cast<std::int64_t>(ctx.split.train.size());
    const std::vector<std::int64_t> eval_rounds = make_eval_rounds(total, cfg.eval_every);

    std::vector<ReplicateMetrics> rows;
    rows.reserve(eval_rounds.size());

    RunOptions opts;
    opts.beta0 = cfg.beta0;
    opts.avg_shift = cfg.avg_shift;
    opts.eval_rounds = eval_rounds;
    opts.on_eval = [&](std::int64_t t, std::span<const double> theta_hat) {
        Evaluation ev = evaluate(ctx.ensemble, theta_hat, ctx.loss, ctx.split.test);
        rows.push_back({replicate, t, 0.0, ev.error_rate, ev.mean_loss, 0.0, t == total});
    };

    const std::uint64_t run_seed = derive_seed(replicate_seed, kRunTag);
    RunResult res;
    if (cfg.algo == Algo::smd_ama) {
        LabelOracle oracle = cfg.prompt_oracle ? prompt_oracle() : dataset_oracle();
        res = run_smd_ama(ctx.ensemble, ctx.loss, ctx.split.train, oracle,
                          {cfg.mu, run_seed}, opts);
    } else {
        res = run_smd_pma(ctx.ensemble, ctx.loss, ctx.split.train, run_seed, opts);
    }

    // Fill in cumulative queries and the running mean query probability.
    std::size_t queries = 0;
    double p_sum = 0.0;
    std::size_t next = 0;
    for (const RoundTrace& tr : res.traces) {
        queries += tr.queried ? 1 : 0;
        p_sum += tr.p_query;
        if (next < rows.size() && rows[next].t == tr.t) {
            rows[next].queries = static_cast<double>(queries);
            rows[next].p_mean = p_sum / static_cast<double>(tr.t);
            ++next;
        }
    }

    out.final_errors.push_back(rows.back().err);
    out.final_losses.push_back(rows.back().loss);
    out.final_queries.push_back(rows.back().queries);
    out.per_replicate.insert(out.per_replicate.end(), rows.begin(), rows.end());
}

void run_qbb_replicate(const ExperimentConfig& cfg, const ReplicateContext& ctx,
                       std::size_t replicate, std::uint64_t replicate_seed,
                       ExperimentResult& out) {
    const std::size_t pool_size = ctx.split.train.size();
    std::size_t budget = cfg.qbb_budget;
    if (budget == 0) budget = std::clamp<std::size_t>(std::max<std::size_t>(10, pool_size / 10),
                                                      std::size_t{1}, pool_size);

    QbbConfig qcfg;
    qcfg.budget = budget;
    qcfg.candidate_size = cfg.qbb_candidate_size;
    qcfg.boost_rounds = cfg.qbb_boost_rounds;
    qcfg.seed = derive_seed(replicate_seed, kQbbTag);

    LabelOracle oracle = cfg.prompt_oracle ? prompt_oracle() : dataset_oracle();
    QbbResult res = run_qbb(ctx.ensemble, ctx.split.train, oracle, ctx.split.test, qcfg,
                            ctx.loss);

    const std::int64_t step = cfg.eval_every > 0
                                  ? cfg.eval_every
                                  : std::max<std::int64_t>(1, static_cast<std::int64_t>(budget) / 200);
    const std::size_t first = res.history.front().queries;
    std::vector<ReplicateMetrics> rows;
    for (std::size_t k = 0; k < res.history.size(); ++k) {
        const QbbRecord& h = res.history[k];
        const bool last = k + 1 == res.history.size();
        if (!last && static_cast<std::int64_t>(h.queries - first) % step != 0) continue;
        rows.push_back({replicate, static_cast<std::int64_t>(h.queries),
                        static_cast<double>(h.queries), h.test_error, h.test_loss, 0.0, last});
    }

    out.final_errors.push_back(rows.back().err);
    out.final_losses.push_back(rows.back().loss);
    out.final_queries.push_back(rows.back().queries);
    out.per_replicate.insert(out.per_replicate.end(), rows.begin(), rows.end());
}

void aggregate(ExperimentResult& out, std::size_t replicates) {
    if (replicates == 0) return;
    const std::size_t points = out.per_replicate.size() / replicates;
    out.aggregated.clear();
    std::vector<double> errs(replicates), losses(replicates), queries(replicates);
    for (std::size_t k = 0; k < points; ++k) {
        const std::int64_t t = out.per_replicate[k].t;
        for (std::size_t r = 0; r < replicates; ++r) {
            const ReplicateMetrics& row = out.per_replicate[r * points + k];
            if (row.t != t)
                throw std::logic_error("aggregate: replicate evaluation grids disagree");
            errs[r] = row.err;
            losses[r] = row.loss;
            queries[r] = row.queries;
        }
        MetricsRecord rec;
        rec.t = t;
        rec.err_mean = mean_of(errs);
        rec.err_std = sample_std(errs, rec.err_mean);
        rec.loss_mean = mean_of(losses);
        rec.loss_std = sample_std(losses, rec.loss_mean);
        rec.queries_mean = mean_of(queries);
        rec.query_frac = out.stream_length > 0
                             ? rec.queries_mean / static_cast<double>(out.stream_length)
                             : 0.0;
        rec.final_row = out.per_replicate[k].final_row;
        out.aggregated.push_back(rec);
    }
}

}  // namespace

Algo algo_from_name(const std::string& name) {
    if (name == "smd-ama") return Algo::smd_ama;
    if (name == "smd-pma") return Algo::smd_pma;
    if (name == "qbb") return Algo::qbb;
    throw std::invalid_argument("unknown algorithm '" + name +
                                "' (expected smd-ama, smd-pma, or qbb)");
}

std::string algo_name(Algo algo) {
    switch (algo) {
        case Algo::smd_ama: return "smd-ama";
        case Algo::smd_pma: return "smd-pma";
        case Algo::qbb: return "qbb";
    }
    throw std::logic_error("algo_name: unknown algorithm");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Dataset& ds) {
    if (cfg.replicates < 1) throw std::invalid_argument("run_experiment: replicates must be >= 1");
    if (!(cfg.mu >= 0.0 && cfg.mu < 1.0))
        throw std::invalid_argument("run_experiment: mu must be in [0,1)");

    ExperimentResult out;
    out.algo = algo_name(cfg.algo);
    out.dataset = ds.name;

    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        const std::uint64_t replicate_seed = cfg.seed_base + r;
        ReplicateContext ctx;
        try {
            ctx = prepare_replicate(cfg, ds, replicate_seed);
            if (r == 0) out.stream_length = ctx.split.train.size();
            if (cfg.algo == Algo::qbb)
                run_qbb_replicate(cfg, ctx, r, replicate_seed, out);
            else
                run_smd_replicate(cfg, ctx, r, replicate_seed, out);
        } catch (RunAborted& e) {
            throw RunAborted("replicate " + std::to_string(r) + ": " + e.what(),
                             std::move(e.traces));
        } catch (const std::exception& e) {
            throw std::runtime_error("replicate " + std::to_string(r) + ": " + e.what());
        }
    }

    aggregate(out, cfg.replicates);
    return out;
}

std::vector<MuSweepRow> sweep_mu(const ExperimentConfig& cfg, const Dataset& ds,
                                 const std::vector<double>& mus) {
    std::vector<MuSweepRow> rows;
    for (double mu : mus) {
        if (!(mu >= 0.0 && mu < 1.0))
            throw std::invalid_argument("sweep_mu: mu must be in [0,1)");
        ExperimentConfig run_cfg = cfg;
        run_cfg.algo = Algo::smd_ama;
        run_cfg.mu = mu;
        ExperimentResult res = run_experiment(run_cfg, ds);
        MuSweepRow row;
        row.mu = mu;
        row.err_mean = mean_of(res.final_errors);
        row.err_std = sample_std(res.final_errors, row.err_mean);
        row.queries_mean = mean_of(res.final_queries);
        row.queries_std = sample_std(res.final_queries, row.queries_mean);
        rows.push_back(row);
    }
    return rows;
}

QbbComparison match_budget_qbb(const ExperimentConfig& cfg, const Dataset& ds) {
    ExperimentConfig ama_cfg = cfg;
    ama_cfg.algo = Algo::smd_ama;
    ExperimentResult ama = run_experiment(ama_cfg, ds);

    const double mean_queries = mean_of(ama.final_queries);
    std::size_t budget = static_cast<std::size_t>(std::llround(mean_queries));
    budget = std::clamp<std::size_t>(budget, std::size_t{1}, ama.stream_length);

    ExperimentConfig qbb_cfg = cfg;
    qbb_cfg.algo = Algo::qbb;
    qbb_cfg.qbb_budget = budget;
    ExperimentResult qbb = run_experiment(qbb_cfg, ds);

    QbbComparison cmp;
    cmp.dataset = ds.name;
    cmp.budget = budget;
    cmp.ama_error_mean = mean_of(ama.final_errors);
    cmp.ama_error_std = sample_std(ama.final_errors, cmp.ama_error_mean);
    cmp.qbb_error_mean = mean_of(qbb.final_errors);
    cmp.qbb_error_std = sample_std(qbb.final_errors, cmp.qbb_error_mean);
    cmp.ama = std::move(ama);
    cmp.qbb = std::move(qbb);
    return cmp;
}

std::vector<std::string> to_jsonl(const ExperimentResult& result) {
    std::vector<std::string> lines;
    lines.reserve(result.per_replicate.size());
    const bool streaming = result.algo != "qbb";
    for (const ReplicateMetrics& row : result.per_replicate) {
        nlohmann::ordered_json j;
        j["algo"] = result.algo;
        j["dataset"] = result.dataset;
        j["replicate"] = row.replicate;
        j["t"] = row.t;
        j["queries"] = row.queries;
        j["err"] = row.err;
        j["loss"] = row.loss;
        if (streaming) j["p_mean"] = row.p_mean;
        j["final"] = row.final_row;
        if (row.final_row && result.stream_length > 0)
            j["query_frac"] = row.queries / static_cast<double>(result.stream_length);
        lines.push_back(j.dump());
    }
    return lines;
}

std::string to_csv(const ExperimentResult& result) {
    std::string out = "t,err_mean,err_std,loss_mean,loss_std,queries_mean\n";
    for (const MetricsRecord& rec : result.aggregated) {
        out += std::to_string(rec.t);
        out += ',' + fmt_g17(rec.err_mean);
        out += ',' + fmt_g17(rec.err_std);
        out += ',' + fmt_g17(rec.loss_mean);
        out += ',' + fmt_g17(rec.loss_std);
        out += ',' + fmt_g17(rec.queries_mean);
        out += '\n';
    }
    return out;
}

std::string sweep_to_csv(const std::vector<MuSweepRow>& rows) {
    std::string out = "mu,err_mean,err_std,queries_mean,queries_std\n";
    for (const MuSweepRow& row : rows) {
        out += fmt_g17(row.mu);
        out += ',' + fmt_g17(row.err_mean);
        out += ',' + fmt_g17(row.err_std);
        out += ',' + fmt_g17(row.queries_mean);
        out += ',' + fmt_g17(row.queries_std);
        out += '\n';
    }
    return out;
}

std::string comparison_to_csv(const QbbComparison& cmp) {
    std::string out = "dataset,budget,smd_ama_error,qbb_error\n";
    out += cmp.dataset;
    out += ',' + std::to_string(cmp.budget);
    out += ',' + fmt_g17(cmp.ama_error_mean);
    out += ',' + fmt_g17(cmp.qbb_error_mean);
    out += '\n';
    return out;
}

}  // namespace smdagg
