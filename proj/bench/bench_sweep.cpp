// Times the serial reference against the block-parallel path on a sweep
// point, plus the raw simulate/decode kernels. Run with the worker count to
// benchmark as the optional first argument (default: hardware concurrency).
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "chunknet/decode.hpp"
#include "chunknet/experiment.hpp"
#include "chunknet/schedule.hpp"

using namespace chunknet;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void bench_point(const char* name, ExperimentConfig cfg, const CodeSpec& spec,
                 std::uint32_t n, std::uint32_t workers) {
    cfg.codes = {spec};
    cfg.n_grid = {n};

    cfg.workers = 1;
    auto t0 = Clock::now();
    const PointEstimate serial = run_point_serial(cfg, spec, n);
    const double t_serial = seconds_since(t0);

    cfg.workers = workers;
    t0 = Clock::now();
    const PointEstimate parallel = run_point(cfg, spec, n);
    const double t_parallel = seconds_since(t0);

    const bool same = serial.trials == parallel.trials &&
                      serial.successes == parallel.successes &&
                      serial.chunked_successes == parallel.chunked_successes &&
                      serial.mean_terminal_rank == parallel.mean_terminal_rank;
    std::printf("%-22s n=%-5u trials=%-4u p=%.3f  serial %.3fs  "
                "parallel(x%u) %.3fs  speedup %.2f  results %s\n",
                name, n, serial.trials, serial.p_hat, t_serial, workers, t_parallel,
                t_parallel > 0 ? t_serial / t_parallel : 0.0, same ? "match" : "DIFFER");
    if (!same) std::exit(1);
}

} // namespace

int main(int argc, char** argv) {
    std::uint32_t workers = std::thread::hardware_concurrency();
    if (argc > 1) workers = static_cast<std::uint32_t>(std::strtoul(argv[1], nullptr, 10));
    if (workers < 1) workers = 1;
    std::printf("benchmarking with %u workers\n", workers);

    ExperimentConfig cfg;
    cfg.k = 1024;
    cfg.stop = StopRule::fixed(100);
    cfg.master_seed = 42;

    cfg.l = 4;
    bench_point("fig2 dense l=4", cfg, make_code_spec(CodeKind::Dense, 1024, 1, 1), 1280,
                workers);
    bench_point("fig2 occ-q4-t2 l=4", cfg,
                make_code_spec(CodeKind::Overlapped, 1024, 4, 2), 1280, workers);
    cfg.l = 1;
    bench_point("fig3 cc-q64 l=1", cfg, make_code_spec(CodeKind::Chunked, 1024, 64, 1),
                2304, workers);
    bench_point("fig3 occ-q256-t4 l=1", cfg,
                make_code_spec(CodeKind::Overlapped, 1024, 256, 4), 1280, workers);
    cfg.l = 2;
    bench_point("fig3 occ-q1024-t16 l=2", cfg,
                make_code_spec(CodeKind::Overlapped, 1024, 1024, 16), 1536, workers);

    // raw kernel: one simulate+decode round at the fig2 dense corner
    Rng rng = derive_rng(7);
    const CodeSpec dense = make_code_spec(CodeKind::Dense, 1024, 1, 1);
    const Schedule sched = generate_schedule(4, 1600, rng);
    auto t0 = Clock::now();
    const TerminalReport report =
        simulate(dense, sched, SimMode::RankOnly, ChunkPolicy::UniformAll, rng);
    const double t_sim = seconds_since(t0);
    t0 = Clock::now();
    const DecodeOutcome out = decode_global(report);
    const double t_dec = seconds_since(t0);
    std::printf("kernel dense l=4 n=1600: simulate %.4fs (%zu packets), "
                "decode %.4fs (rank %zu)\n",
                t_sim, report.packets.size(), t_dec, out.global_rank);
    return 0;
}
