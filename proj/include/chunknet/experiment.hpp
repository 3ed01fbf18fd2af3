#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chunknet/code_spec.hpp"
#include "chunknet/simulate.hpp"

namespace chunknet {

/// When to stop sampling a point. fixed runs exactly T trials. successes
/// replicates the stop-at-S-successes protocol (capped at trial_cap); note
/// successes/trials is then a negative-binomial estimate and slightly biased,
/// which is why fixed trials is the default.
struct StopRule {
    enum class Kind { FixedTrials, Successes };

    Kind kind = Kind::FixedTrials;
    std::uint32_t fixed_trials = 1000;
    std::uint32_t target_successes = 100;
    std::uint32_t trial_cap = 20000;

    static StopRule fixed(std::uint32_t trials);
    static StopRule successes(std::uint32_t target, std::uint32_t cap);

    /// "fixed:<T>" or "successes:<S>,<cap>"; parse accepts the same forms.
    std::string to_string() const;
    static StopRule parse(const std::string& text);

    bool operator==(const StopRule&) const = default;
};

struct ExperimentConfig {
    std::uint32_t k = 1024;
    std::uint32_t l = 1;
    std::vector<CodeSpec> codes;
    std::vector<std::uint32_t> n_grid; // ascending
    StopRule stop;
    ChunkPolicy policy = ChunkPolicy::UniformAll;
    SimMode mode = SimMode::RankOnly;
    std::uint64_t master_seed = 0;
    std::uint32_t workers = 1;

    /// Throws std::invalid_argument on an empty/descending grid, codes not
    /// matching k, or a degenerate stop rule.
    void validate() const;
};

struct PointEstimate {
    CodeSpec spec;
    std::uint32_t n = 0;
    std::uint32_t trials = 0;
    std::uint32_t successes = 0;         // global-rank criterion
    std::uint32_t chunked_successes = 0; // iterative decoder, always <= successes
    double p_hat = 0.0;
    double ci_low = 0.0; // 95% Wilson score interval
    double ci_high = 0.0;
    double mean_terminal_rank = 0.0;
    bool capped = false; // successes rule hit trial_cap short of the target
};

struct SweepTable {
    ExperimentConfig config;
    std::vector<PointEstimate> points; // config code order, n ascending within
};

/// 95% Wilson score interval; contains successes/trials by construction.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Monte-Carlo estimate at one (spec, n): per trial, generate a random
/// schedule of capacity n, simulate the transfer, and decode. Each trial's
/// rng stream is derived from (master_seed, spec id, n, trial index), so the
/// estimate is a pure function of the config regardless of worker count.
PointEstimate run_point(const ExperimentConfig& config, const CodeSpec& spec,
                        std::uint32_t n);

/// Single-threaded reference implementation of run_point with the same
/// result contract; the parallel path must match it exactly.
PointEstimate run_point_serial(const ExperimentConfig& config, const CodeSpec& spec,
                               std::uint32_t n);

SweepTable run_sweep(const ExperimentConfig& config);

/// CSV rendering, one row per point:
/// code,kind,k,l,q,tau,alpha,gamma,policy,n,trials,successes,chunked_successes,
/// p_hat,ci_low,ci_high,seed,capped. Header always present, LF endings,
/// probabilities at fixed 6 decimals: identical tables give identical bytes.
std::string to_csv(const SweepTable& table);
std::string to_csv(std::span<const SweepTable> tables);

/// Smallest grid n with p_hat >= p_star, minus k; nullopt when the spec
/// never reaches p_star on the grid.
std::optional<std::int64_t> overhead(const SweepTable& table, const CodeSpec& spec,
                                     double p_star);

struct ApertureRankResult {
    CodeSpec spec;
    std::uint32_t n = 0;
    std::uint64_t trials = 0;
    std::uint64_t full_rank = 0;
    bool balanced = false;
    double failure_rate = 0.0;   // 1 - full_rank/trials
    double conjectured_max = 0.0; // 2^-(n-k)
};

/// Rank statistics of random k x n banded matrices: each column picks a
/// chunk (uniformly, or exactly n/q per chunk when balanced — that mode
/// requires q | n) and Bernoulli(1/2) coefficients over its aperture.
ApertureRankResult aperture_rank_experiment(const CodeSpec& spec, std::uint32_t n,
                                            std::uint64_t trials, std::uint64_t master_seed,
                                            bool balanced = false, std::uint32_t workers = 1);

/// Named sweep presets. "fig2": k=1024, l=4, {dense, cc-q2, cc-q4, occ-q4-t2},
/// n = 1024..1600 step 32. "fig3": k=1024, two configs l=1 and l=2, {cc-q64,
/// occ-q128-t2, occ-q256-t4, occ-q512-t8, occ-q1024-t16} (alpha = 16), n from
/// 1024 in steps of 32 up to 3072 (l=1) / 3456 (l=2) — wide enough that every
/// curve crosses p = 0.9, which the overhead comparisons need.
/// Throws std::invalid_argument for unknown names.
std::vector<ExperimentConfig> preset(const std::string& name);

/// Key = value config text, one pair per line, '#' comments. Keys mirror
/// ExperimentConfig: k, l, codes (comma-separated code ids, e.g.
/// "dense, cc-q4, occ-q4-t2"), n_grid (ints and lo..hi..step ranges,
/// comma-separated), stop_rule, policy, mode, master_seed, workers.
/// Unknown or duplicate keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Inverse of CodeSpec::id() for a given k, e.g. "cc-q4" or "occ-q256-t4".
CodeSpec parse_code_id(std::uint32_t k, const std::string& id);

} // namespace chunknet
