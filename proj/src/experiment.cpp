#include "chunknet/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "chunknet/bounds.hpp"
#include "chunknet/decode.hpp"
#include "chunknet/rng.hpp"
#include "chunknet/schedule.hpp"

namespace chunknet {

namespace {

constexpr std::uint32_t kTrialBlock = 128;
constexpr std::uint32_t kMessageSymbolBits = 64;

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct TrialOutcome {
    bool global_ok = false;
    bool chunked_ok = false;
    std::uint32_t rank = 0;
};

// One Monte-Carlo trial. Stream 0 drives the schedule and the simulation,
// stream 1 the message, so rank-only and payload runs of the same trial see
// identical transmissions and succeed or fail together.
TrialOutcome run_trial(const ExperimentConfig& cfg, const CodeSpec& spec,
                       std::uint64_t id_hash, std::uint32_t n, std::uint32_t trial) {
    Rng sim_rng = derive_rng(cfg.master_seed, id_hash, n, trial, 0);
    const Schedule schedule = generate_schedule(cfg.l, n, sim_rng);

    Message message;
    const Message* message_ptr = nullptr;
    if (cfg.mode == SimMode::Payload) {
        Rng msg_rng = derive_rng(cfg.master_seed, id_hash, n, trial, 1);
        message.reserve(spec.k);
        for (std::uint32_t i = 0; i < spec.k; ++i)
            message.push_back(BinaryVector::random(kMessageSymbolBits, msg_rng));
        message_ptr = &message;
    }

    const TerminalReport report =
        simulate(spec, schedule, cfg.mode, cfg.policy, sim_rng, message_ptr);
    const DecodeOutcome global = decode_global(report);
    // With a single chunk the local system is the global one; skip the rerun.
    const bool chunked_ok =
        spec.q == 1 ? global.success : decode_chunked(report, spec).success;
    return {global.success, chunked_ok, static_cast<std::uint32_t>(global.global_rank)};
}

struct StopLimits {
    std::uint32_t max_trials = 0;
    std::uint32_t target = 0; // 0 = no successes target (fixed rule)
};

StopLimits limits_of(const StopRule& rule) {
    if (rule.kind == StopRule::Kind::FixedTrials) return {rule.fixed_trials, 0};
    return {rule.trial_cap, rule.target_successes};
}

struct Accumulator {
    std::uint32_t trials = 0;
    std::uint32_t successes = 0;
    std::uint32_t chunked = 0;
    std::uint64_t rank_sum = 0;

    // Returns true once the successes target is met.
    bool feed(const TrialOutcome& t, std::uint32_t target) {
        ++trials;
        successes += t.global_ok;
        chunked += t.chunked_ok;
        rank_sum += t.rank;
        return target != 0 && successes == target;
    }
};

PointEstimate finish(const ExperimentConfig& cfg, const CodeSpec& spec, std::uint32_t n,
                     const Accumulator& acc, std::uint32_t target) {
    PointEstimate p;
    p.spec = spec;
    p.n = n;
    p.trials = acc.trials;
    p.successes = acc.successes;
    p.chunked_successes = acc.chunked;
    p.p_hat = acc.trials ? static_cast<double>(acc.successes) / acc.trials : 0.0;
    std::tie(p.ci_low, p.ci_high) = wilson_interval(acc.successes, acc.trials);
    p.mean_terminal_rank =
        acc.trials ? static_cast<double>(acc.rank_sum) / acc.trials : 0.0;
    p.capped = target != 0 && acc.successes < target;
    (void)cfg;
    return p;
}

std::string policy_name(ChunkPolicy p) {
    return p == ChunkPolicy::UniformAll ? "uniform-all" : "uniform-nonempty";
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::uint64_t v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
        throw std::invalid_argument("bad integer for " + what + ": '" + text + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(trim(s.substr(start)));
            return out;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

std::vector<std::uint32_t> make_grid(std::uint32_t lo, std::uint32_t hi, std::uint32_t step) {
    std::vector<std::uint32_t> grid;
    for (std::uint32_t n = lo; n <= hi; n += step) grid.push_back(n);
    return grid;
}

} // namespace

StopRule StopRule::fixed(std::uint32_t trials) {
    StopRule r;
    r.kind = Kind::FixedTrials;
    r.fixed_trials = trials;
    return r;
}

StopRule StopRule::successes(std::uint32_t target, std::uint32_t cap) {
    StopRule r;
    r.kind = Kind::Successes;
    r.target_successes = target;
    r.trial_cap = cap;
    return r;
}

std::string StopRule::to_string() const {
    if (kind == Kind::FixedTrials) return "fixed:" + std::to_string(fixed_trials);
    return "successes:" + std::to_string(target_successes) + "," +
           std::to_string(trial_cap);
}

StopRule StopRule::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string head = text.substr(0, colon);
        const std::string rest = text.substr(colon + 1);
        if (head == "fixed")
            return fixed(static_cast<std::uint32_t>(parse_u64(rest, "fixed trial count")));
        if (head == "successes") {
            const auto parts = split(rest, ',');
            if (parts.size() == 2)
                return successes(
                    static_cast<std::uint32_t>(parse_u64(parts[0], "successes target")),
                    static_cast<std::uint32_t>(parse_u64(parts[1], "trial cap")));
        }
    }
    throw std::invalid_argument("bad stop rule '" + text +
                                "' (want fixed:<T> or successes:<S>,<cap>)");
}

void ExperimentConfig::validate() const {
    if (k < 1 || l < 1) throw std::invalid_argument("config: k and l must be >= 1");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (codes.empty()) throw std::invalid_argument("config: no codes given");
    for (const CodeSpec& spec : codes)
        if (spec.k != k)
            throw std::invalid_argument("config: code " + spec.id() + " built for k = " +
                                        std::to_string(spec.k) + ", config has k = " +
                                        std::to_string(k));
    if (n_grid.empty()) throw std::invalid_argument("config: empty n grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw std::invalid_argument("config: grid values must be >= 1");
        if (i && n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("config: n grid must be strictly ascending");
    }
    if (stop.kind == StopRule::Kind::FixedTrials) {
        if (stop.fixed_trials < 1)
            throw std::invalid_argument("config: fixed trial count must be >= 1");
    } else {
        if (stop.target_successes < 1 || stop.trial_cap < stop.target_successes)
            throw std::invalid_argument("config: successes rule needs 1 <= target <= cap");
    }
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054; // 97.5% normal quantile
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = (p + z2 / (2.0 * t)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
    // rounding can push an endpoint a few ulps past p at p = 0 or 1; the
    // interval must contain the point estimate
    return {std::min(p, std::max(0.0, center - half)),
            std::max(p, std::min(1.0, center + half))};
}

PointEstimate run_point_serial(const ExperimentConfig& cfg, const CodeSpec& spec,
                               std::uint32_t n) {
    const std::uint64_t id_hash = fnv1a64(spec.id());
    const StopLimits lim = limits_of(cfg.stop);
    Accumulator acc;
    for (std::uint32_t t = 0; t < lim.max_trials; ++t)
        if (acc.feed(run_trial(cfg, spec, id_hash, n, t), lim.target)) break;
    return finish(cfg, spec, n, acc, lim.target);
}

PointEstimate run_point(const ExperimentConfig& cfg, const CodeSpec& spec,
                        std::uint32_t n) {
    if (cfg.workers <= 1) return run_point_serial(cfg, spec, n);

    // Trials are evaluated in fixed-size blocks and folded in trial order, so
    // the successes rule stops at exactly the trial the serial loop stops at;
    // results computed past that trial are discarded.
    const std::uint64_t id_hash = fnv1a64(spec.id());
    const StopLimits lim = limits_of(cfg.stop);
    Accumulator acc;
    std::vector<TrialOutcome> block(kTrialBlock);
    bool done = false;
    for (std::uint32_t base = 0; base < lim.max_trials && !done; base += kTrialBlock) {
        const int count =
            static_cast<int>(std::min<std::uint64_t>(kTrialBlock, lim.max_trials - base));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(cfg.workers))
#endif
        for (int i = 0; i < count; ++i)
            block[static_cast<std::size_t>(i)] =
                run_trial(cfg, spec, id_hash, n, base + static_cast<std::uint32_t>(i));
        for (int i = 0; i < count && !done; ++i)
            done = acc.feed(block[static_cast<std::size_t>(i)], lim.target);
    }
    return finish(cfg, spec, n, acc, lim.target);
}

SweepTable run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepTable table;
    table.config = cfg;
    table.points.reserve(cfg.codes.size() * cfg.n_grid.size());
    for (const CodeSpec& spec : cfg.codes)
        for (std::uint32_t n : cfg.n_grid) table.points.push_back(run_point(cfg, spec, n));
    return table;
}

std::string to_csv(std::span<const SweepTable> tables) {
    std::string out =
        "code,kind,k,l,q,tau,alpha,gamma,policy,n,trials,successes,"
        "chunked_successes,p_hat,ci_low,ci_high,seed,capped\n";
    char num[32];
    for (const SweepTable& table : tables) {
        const ExperimentConfig& cfg = table.config;
        for (const PointEstimate& p : table.points) {
            out += p.spec.id();
            out += ',';
            out += to_string(p.spec.kind);
            out += ',';
            out += std::to_string(p.spec.k);
            out += ',';
            out += std::to_string(cfg.l);
            out += ',';
            out += std::to_string(p.spec.q);
            out += ',';
            out += std::to_string(p.spec.tau);
            out += ',';
            out += std::to_string(p.spec.alpha);
            out += ',';
            out += std::to_string(p.spec.gamma);
            out += ',';
            out += policy_name(cfg.policy);
            out += ',';
            out += std::to_string(p.n);
            out += ',';
            out += std::to_string(p.trials);
            out += ',';
            out += std::to_string(p.successes);
            out += ',';
            out += std::to_string(p.chunked_successes);
            for (double v : {p.p_hat, p.ci_low, p.ci_high}) {
                std::snprintf(num, sizeof num, ",%.6f", v);
                out += num;
            }
            out += ',';
            out += std::to_string(cfg.master_seed);
            out += ',';
            out += p.capped ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::string to_csv(const SweepTable& table) {
    return to_csv(std::span<const SweepTable>(&table, 1));
}

std::optional<std::int64_t> overhead(const SweepTable& table, const CodeSpec& spec,
                                     double p_star) {
    if (!(p_star > 0.0 && p_star < 1.0))
        throw std::invalid_argument("overhead: p_star must be in (0,1)");
    for (const PointEstimate& p : table.points)
        if (p.spec == spec && p.p_hat >= p_star)
            return static_cast<std::int64_t>(p.n) - static_cast<std::int64_t>(spec.k);
    return std::nullopt;
}

ApertureRankResult aperture_rank_experiment(const CodeSpec& spec, std::uint32_t n,
                                            std::uint64_t trials, std::uint64_t master_seed,
                                            bool balanced, std::uint32_t workers) {
    if (n < spec.k)
        throw std::invalid_argument("aperture experiment: n must be >= k");
    if (balanced && n % spec.q != 0)
        throw std::invalid_argument("aperture experiment: balanced mode needs q | n");
    if (trials < 1) throw std::invalid_argument("aperture experiment: no trials");

    std::uint64_t full = 0;
    const long long t_count = static_cast<long long>(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : full) \
    num_threads(static_cast<int>(workers))
#else
    (void)workers;
#endif
    for (long long t = 0; t < t_count; ++t) {
        Rng rng = derive_rng(master_seed, static_cast<std::uint64_t>(t));
        Gf2Basis basis(spec.k);
        for (std::uint32_t c = 0; c < n && !basis.full(); ++c) {
            Packet p;
            p.chunk = balanced ? c / (n / spec.q)
                               : static_cast<std::uint32_t>(uniform_below(rng, spec.q));
            p.coeffs = random_bernoulli(spec.alpha, rng);
            basis.insert(global_payload(spec, p));
        }
        full += basis.full() ? 1 : 0;
    }

    ApertureRankResult r;
    r.spec = spec;
    r.n = n;
    r.trials = trials;
    r.full_rank = full;
    r.balanced = balanced;
    r.failure_rate = 1.0 - static_cast<double>(full) / static_cast<double>(trials);
    r.conjectured_max = conjecture_rank_failure_prob(spec.k, n);
    return r;
}

std::vector<ExperimentConfig> preset(const std::string& name) {
    if (name == "fig2") {
        ExperimentConfig cfg;
        cfg.k = 1024;
        cfg.l = 4;
        cfg.codes = {make_code_spec(CodeKind::Dense, 1024, 1, 1),
                     make_code_spec(CodeKind::Chunked, 1024, 2, 1),
                     make_code_spec(CodeKind::Chunked, 1024, 4, 1),
                     make_code_spec(CodeKind::Overlapped, 1024, 4, 2)};
        cfg.n_grid = make_grid(1024, 1600, 32);
        cfg.stop = StopRule::fixed(500);
        return {cfg};
    }
    if (name == "fig3") {
        ExperimentConfig base;
        base.k = 1024;
        base.codes = {make_code_spec(CodeKind::Chunked, 1024, 64, 1),
                      make_code_spec(CodeKind::Overlapped, 1024, 128, 2),
                      make_code_spec(CodeKind::Overlapped, 1024, 256, 4),
                      make_code_spec(CodeKind::Overlapped, 1024, 512, 8),
                      make_code_spec(CodeKind::Overlapped, 1024, 1024, 16)};
        base.stop = StopRule::fixed(400);
        ExperimentConfig l1 = base;
        l1.l = 1;
        l1.n_grid = make_grid(1024, 3072, 32);
        ExperimentConfig l2 = base;
        l2.l = 2;
        l2.n_grid = make_grid(1024, 3456, 32);
        return {l1, l2};
    }
    throw std::invalid_argument("unknown preset '" + name + "' (have fig2, fig3)");
}

CodeSpec parse_code_id(std::uint32_t k, const std::string& id) {
    if (id == "dense") return make_code_spec(CodeKind::Dense, k, 1, 1);
    if (id.rfind("cc-q", 0) == 0) {
        const std::uint64_t q = parse_u64(id.substr(4), "chunk count in '" + id + "'");
        return make_code_spec(CodeKind::Chunked, k, static_cast<std::uint32_t>(q), 1);
    }
    if (id.rfind("occ-q", 0) == 0) {
        const auto tpos = id.find("-t", 5);
        if (tpos != std::string::npos) {
            const std::uint64_t q =
                parse_u64(id.substr(5, tpos - 5), "chunk count in '" + id + "'");
            const std::uint64_t tau =
                parse_u64(id.substr(tpos + 2), "tau in '" + id + "'");
            return make_code_spec(CodeKind::Overlapped, k, static_cast<std::uint32_t>(q),
                                  static_cast<std::uint32_t>(tau));
        }
    }
    throw std::invalid_argument("bad code id '" + id +
                                "' (want dense, cc-q<Q>, or occ-q<Q>-t<T>)");
}

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
    }

    static const char* known[] = {"k",    "l",    "codes",       "n_grid", "stop_rule",
                                  "policy", "mode", "master_seed", "workers"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* name : known) ok = ok || key == name;
        if (!ok) throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    for (const char* required : {"k", "l", "codes", "n_grid"})
        if (!kv.count(required))
            throw std::invalid_argument("config: missing required key '" +
                                        std::string(required) + "'");

    ExperimentConfig cfg;
    cfg.k = static_cast<std::uint32_t>(parse_u64(kv.at("k"), "k"));
    cfg.l = static_cast<std::uint32_t>(parse_u64(kv.at("l"), "l"));
    for (const std::string& id : split(kv.at("codes"), ','))
        cfg.codes.push_back(parse_code_id(cfg.k, id));
    cfg.n_grid.clear();
    for (const std::string& tok : split(kv.at("n_grid"), ',')) {
        const auto dots = tok.find("..");
        if (dots == std::string::npos) {
            cfg.n_grid.push_back(static_cast<std::uint32_t>(parse_u64(tok, "n_grid entry")));
            continue;
        }
        const std::string lo_s = tok.substr(0, dots);
        std::string hi_s = tok.substr(dots + 2);
        std::uint64_t step = 1;
        const auto dots2 = hi_s.find("..");
        if (dots2 != std::string::npos) {
            step = parse_u64(hi_s.substr(dots2 + 2), "n_grid step");
            hi_s.erase(dots2);
        }
        if (step < 1) throw std::invalid_argument("config: n_grid step must be >= 1");
        const std::uint64_t lo = parse_u64(lo_s, "n_grid range start");
        const std::uint64_t hi = parse_u64(hi_s, "n_grid range end");
        if (hi < lo) throw std::invalid_argument("config: n_grid range runs backwards");
        for (std::uint64_t v = lo; v <= hi; v += step)
            cfg.n_grid.push_back(static_cast<std::uint32_t>(v));
    }
    if (kv.count("stop_rule")) cfg.stop = StopRule::parse(kv.at("stop_rule"));
    if (kv.count("policy")) {
        const std::string& p = kv.at("policy");
        if (p == "uniform-all") cfg.policy = ChunkPolicy::UniformAll;
        else if (p == "uniform-nonempty") cfg.policy = ChunkPolicy::UniformNonempty;
        else throw std::invalid_argument("config: bad policy '" + p + "'");
    }
    if (kv.count("mode")) {
        const std::string& m = kv.at("mode");
        if (m == "rank") cfg.mode = SimMode::RankOnly;
        else if (m == "payload") cfg.mode = SimMode::Payload;
        else throw std::invalid_argument("config: bad mode '" + m + "' (rank|payload)");
    }
    if (kv.count("master_seed")) cfg.master_seed = parse_u64(kv.at("master_seed"), "master_seed");
    if (kv.count("workers"))
        cfg.workers = static_cast<std::uint32_t>(parse_u64(kv.at("workers"), "workers"));
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

} // namespace chunknet
