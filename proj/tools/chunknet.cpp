#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chunknet/bounds.hpp"
#include "chunknet/experiment.hpp"
#include "chunknet/plot.hpp"
#include "chunknet/schedule.hpp"

using namespace chunknet;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void print_bound(const BoundResult& r) {
    std::printf("%-18s n_min = %.3f\n", r.label.c_str(), r.n_min);
    for (const BoundTerm& t : r.terms)
        std::printf("    %-22s %12.3f\n", t.name.c_str(), t.value);
    for (const auto& [name, ratio] : r.conditions)
        std::printf("    condition %-32s = %.3f\n", name.c_str(), ratio);
    if (!r.note.empty()) std::printf("    note: %s\n", r.note.c_str());
}

// Vertical markers for the plot: the applicable analytic bound per curve.
std::vector<BoundMark> bound_marks(std::span<const SweepTable> tables, double eps) {
    std::vector<BoundMark> marks;
    auto add = [&](const std::string& label, double n) {
        for (const BoundMark& m : marks)
            if (m.label == label) return;
        marks.push_back({label, n});
    };
    for (const SweepTable& t : tables) {
        const double k = t.config.k, l = t.config.l;
        for (const CodeSpec& spec : t.config.codes) {
            BoundResult r;
            switch (spec.kind) {
                case CodeKind::Dense: r = dense_bound(k, l, eps); break;
                case CodeKind::Chunked: r = cc_bound(k, l, spec.q, eps); break;
                case CodeKind::Overlapped:
                    r = spec.gamma >= std::sqrt(k)
                            ? occ_bound(k, l, spec.q, eps)
                            : occ_small_overlap_bound(k, l, spec.q, eps);
                    break;
            }
            add(spec.id() + " l=" + std::to_string(t.config.l), r.n_min);
        }
    }
    return marks;
}

int run_sweep_cmd(const std::string& preset_name, const std::string& config_path,
                  const std::string& out_path, const std::string& plot_path,
                  const std::string& stop_text, const std::string& policy_text,
                  const std::string& mode_text, std::uint64_t seed, bool seed_set,
                  std::uint32_t workers, bool workers_set) {
    std::vector<ExperimentConfig> configs;
    if (!preset_name.empty()) configs = preset(preset_name);
    else configs = {load_config(config_path)};

    for (ExperimentConfig& cfg : configs) {
        if (seed_set) cfg.master_seed = seed;
        if (workers_set) cfg.workers = workers;
        if (!stop_text.empty()) cfg.stop = StopRule::parse(stop_text);
        if (!policy_text.empty()) {
            if (policy_text == "uniform-all") cfg.policy = ChunkPolicy::UniformAll;
            else if (policy_text == "uniform-nonempty") cfg.policy = ChunkPolicy::UniformNonempty;
            else throw std::invalid_argument("bad --policy '" + policy_text + "'");
        }
        if (!mode_text.empty()) {
            if (mode_text == "rank") cfg.mode = SimMode::RankOnly;
            else if (mode_text == "payload") cfg.mode = SimMode::Payload;
            else throw std::invalid_argument("bad --mode '" + mode_text + "' (rank|payload)");
        }
        cfg.validate();
        if (cfg.stop.kind == StopRule::Kind::Successes)
            std::fprintf(stderr,
                         "note: successes/trials under the stop-at-%u-successes rule is a "
                         "negative-binomial estimate and slightly biased\n",
                         cfg.stop.target_successes);
    }

    std::vector<SweepTable> tables;
    for (const ExperimentConfig& cfg : configs) {
        SweepTable table;
        table.config = cfg;
        for (const CodeSpec& spec : cfg.codes)
            for (std::uint32_t n : cfg.n_grid) {
                table.points.push_back(run_point(cfg, spec, n));
                const PointEstimate& p = table.points.back();
                std::fprintf(stderr, "l=%u %-14s n=%-5u p=%.3f (%u/%u trials)%s\n",
                             cfg.l, spec.id().c_str(), p.n, p.p_hat, p.successes, p.trials,
                             p.capped ? " capped" : "");
            }
        tables.push_back(std::move(table));
    }

    const std::string csv = to_csv(std::span<const SweepTable>(tables));
    if (out_path.empty()) std::fputs(csv.c_str(), stdout);
    else write_file(out_path, csv);

    if (!plot_path.empty()) {
        const auto marks = bound_marks(tables, 0.01);
        write_file(plot_path, render_sweep_svg(tables, marks));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random linear network coding over line networks: sweeps, bounds, probes"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo success-rate sweep");
    std::string preset_name, config_path, out_path, plot_path, stop_text, policy_text,
        mode_text;
    std::uint64_t seed = 0;
    std::uint32_t workers = 1;
    auto* popt = sweep->add_option("--preset", preset_name, "fig2 | fig3");
    auto* copt = sweep->add_option("--config", config_path, "experiment config file");
    popt->excludes(copt);
    sweep->add_option("--out", out_path, "CSV output path (default stdout)");
    sweep->add_option("--plot", plot_path, "SVG output path");
    auto* sopt = sweep->add_option("--stop", stop_text, "fixed:<T> | successes:<S>,<cap>");
    auto* seed_opt = sweep->add_option("--seed", seed, "master seed");
    auto* work_opt = sweep->add_option("--workers", workers, "worker threads");
    auto* pol_opt =
        sweep->add_option("--policy", policy_text, "uniform-all | uniform-nonempty");
    auto* mode_opt = sweep->add_option("--mode", mode_text, "rank | payload");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the analytic bounds");
    double bk = 1024, bl = 4, bq = 4, btau = 2, beps = 0.01, bn = 0;
    bounds_cmd->add_option("--k", bk, "message symbols");
    bounds_cmd->add_option("--l", bl, "network length");
    bounds_cmd->add_option("--q", bq, "chunk count");
    bounds_cmd->add_option("--tau", btau, "overlap parameter");
    bounds_cmd->add_option("--eps", beps, "target failure probability");
    bounds_cmd->add_option("--n", bn, "capacity for the n-dependent diagnostics");

    // aperture
    auto* aperture = app.add_subcommand("aperture", "banded-matrix full-rank probe");
    std::uint32_t ak = 64, aq = 8, atau = 8, an = 72;
    std::uint64_t atrials = 100000, aseed = 0;
    std::uint32_t aworkers = 1;
    bool abalanced = false;
    aperture->add_option("--k", ak, "message symbols");
    aperture->add_option("--q", aq, "chunk count");
    aperture->add_option("--tau", atau, "overlap parameter");
    aperture->add_option("--n", an, "columns");
    aperture->add_option("--trials", atrials, "Monte-Carlo trials");
    aperture->add_option("--seed", aseed, "master seed");
    aperture->add_option("--workers", aworkers, "worker threads");
    aperture->add_flag("--balanced", abalanced, "exactly n/q columns per chunk");

    // capacity
    auto* capacity_cmd = app.add_subcommand("capacity", "capacity of a schedule file");
    std::string schedule_path;
    bool check_oracle = false;
    capacity_cmd->add_option("--schedule-file", schedule_path, "schedule text file")
        ->required();
    capacity_cmd->add_flag("--oracle", check_oracle, "also run the max-flow oracle");

    // gen-schedule
    auto* gen = app.add_subcommand("gen-schedule", "emit a random schedule of given capacity");
    std::uint32_t gl = 1;
    std::uint64_t gn = 8, gseed = 0;
    std::string gout;
    gen->add_option("--links", gl, "number of links");
    gen->add_option("--capacity", gn, "target capacity");
    gen->add_option("--seed", gseed, "seed");
    gen->add_option("--out", gout, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            if (preset_name.empty() && config_path.empty())
                throw std::invalid_argument("sweep needs --preset or --config");
            (void)sopt;
            return run_sweep_cmd(preset_name, config_path, out_path, plot_path, stop_text,
                                 policy_text, mode_text, seed, seed_opt->count() > 0, workers,
                                 work_opt->count() > 0);
        }
        if (bounds_cmd->parsed()) {
            print_bound(dense_bound(bk, bl, beps));
            print_bound(cc_bound(bk, bl, bq, beps));
            print_bound(occ_bound(bk, bl, bq, beps));
            print_bound(occ_small_overlap_bound(bk, bl, bq, beps));
            print_bound(erasure_bound(ErasureKind::Dense, bk, bq, beps));
            print_bound(erasure_bound(ErasureKind::Chunked, bk, bq, beps));
            const double alpha = btau * bk / bq;
            if (bn > 0) {
                std::printf("\nat n = %.0f:\n", bn);
                std::printf("  lemma-3 per-chunk flow (C=1, indicative): %.3f (n/q = %.3f)\n",
                            lemma3_flow_bound(bn, bl, bq, beps), bn / bq);
                std::printf("  per-chunk density threshold (diagnostic): %.3f\n",
                            per_chunk_density_threshold(bn, bl, bq, beps));
                for (const auto& [name, ratio] :
                     condition_diagnostics(bk, bn, bl, bq, btau, alpha, beps))
                    std::printf("  %-34s = %.3f\n", name.c_str(), ratio);
            } else {
                std::printf("\n(pass --n for the capacity-dependent diagnostics)\n");
            }
            return 0;
        }
        if (aperture->parsed()) {
            CodeKind kind = aq == 1 ? CodeKind::Dense
                                    : (atau == 1 ? CodeKind::Chunked : CodeKind::Overlapped);
            const CodeSpec spec = make_code_spec(kind, ak, aq, atau);
            if (!spec.warning.empty())
                std::fprintf(stderr, "note: %s\n", spec.warning.c_str());
            const ApertureRankResult r =
                aperture_rank_experiment(spec, an, atrials, aseed, abalanced, aworkers);
            std::printf("spec %s alpha=%u gamma=%u n=%u trials=%llu balanced=%d\n",
                        spec.id().c_str(), spec.alpha, spec.gamma, r.n,
                        static_cast<unsigned long long>(r.trials), r.balanced ? 1 : 0);
            std::printf("full-rank %llu/%llu  failure %.6g  conjectured max 2^-(n-k) = %.6g\n",
                        static_cast<unsigned long long>(r.full_rank),
                        static_cast<unsigned long long>(r.trials), r.failure_rate,
                        r.conjectured_max);
            return 0;
        }
        if (capacity_cmd->parsed()) {
            std::ifstream in(schedule_path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open schedule file: " + schedule_path);
            std::ostringstream buf;
            buf << in.rdbuf();
            const Schedule s = schedule_from_text(buf.str());
            const std::uint64_t cap = capacity(s);
            std::printf("links=%u transmissions=%zu capacity=%llu\n", s.num_links,
                        s.transmissions.size(), static_cast<unsigned long long>(cap));
            if (check_oracle) {
                const std::uint64_t oracle = capacity_maxflow_oracle(s);
                std::printf("max-flow oracle=%llu (%s)\n",
                            static_cast<unsigned long long>(oracle),
                            oracle == cap ? "match" : "MISMATCH");
                if (oracle != cap) return 2;
            }
            return 0;
        }
        if (gen->parsed()) {
            Rng rng = derive_rng(gseed);
            const Schedule s = generate_schedule(gl, gn, rng);
            const std::string text = schedule_to_text(s);
            if (gout.empty()) std::fputs(text.c_str(), stdout);
            else write_file(gout, text);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
