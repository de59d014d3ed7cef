// Timing comparison between the materialized reference engine and the
// streaming engine, and between worker counts for the parallel trial loop.
// Build target: statecoder_bench (not part of ctest).

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "statecoder/channel.hpp"
#include "statecoder/optimize.hpp"
#include "statecoder/sim.hpp"

using namespace statecoder;

namespace {

double time_of(SimResult (*fn)(const StateChannel&, const AuxScheme&, const SimConfig&, Engine),
               const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg, Engine e) {
    auto t0 = std::chrono::steady_clock::now();
    SimResult r = fn(ch, aux, cfg, e);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("    err_overall = %.3f, enc_fail = %.3f\n", r.overall_error_rate,
                r.encoder_failure_rate);
    return dt;
}

}  // namespace

int main() {
    StateChannel ch = example_channel();
    std::vector<double> uniform = {0.5, 0.5, 0.5, 0.5};
    AuxScheme aux = outputs_as_aux(ch, uniform);

    SimConfig cfg;
    cfg.n = 14;
    cfg.R = 0.4;
    cfg.T1 = cfg.T2 = 0.4;
    cfg.epsilon = 0.15;
    cfg.epsilon_prime = 0.3;
    cfg.trials = 200;
    cfg.seed = 5;

    std::printf("engine comparison (n=%d, trials=%d)\n", cfg.n, cfg.trials);
    std::printf("  reference (materialized codebooks):\n");
    double t_ref = time_of(run_trials, ch, aux, cfg, Engine::reference);
    std::printf("  fast (streaming, pruned scans):\n");
    double t_fast = time_of(run_trials, ch, aux, cfg, Engine::fast);
    std::printf("  reference %.3fs, fast %.3fs, speedup %.1fx\n\n", t_ref, t_fast, t_ref / t_fast);

    std::printf("worker scaling on the fast engine (STATECODER_THREADS)\n");
    SimConfig big = cfg;
    big.n = 24;
    big.R = 0.43;
    big.T1 = big.T2 = 0.345;
    big.epsilon = 0.1;
    big.epsilon_prime = 0.2;
    big.trials = 100;
    for (const char* workers : {"1", "0"}) {
        if (workers[0] == '1')
            setenv("STATECODER_THREADS", workers, 1);
        else
            unsetenv("STATECODER_THREADS");
        auto t0 = std::chrono::steady_clock::now();
        SimResult r = run_trials(ch, aux, big, Engine::fast);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("  workers=%s: %.3fs (err=%.3f)\n", workers[0] == '1' ? "1" : "default", dt,
                    r.overall_error_rate);
    }

    std::printf("\noptimizer restart loop (maximize_gp, card 3, budget 60)\n");
    for (const char* workers : {"1", "0"}) {
        if (workers[0] == '1')
            setenv("STATECODER_THREADS", workers, 1);
        else
            unsetenv("STATECODER_THREADS");
        auto t0 = std::chrono::steady_clock::now();
        GpSearchResult r = maximize_gp(ch, 3, 60, 99);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("  workers=%s: %.3fs (rate=%.6f)\n", workers[0] == '1' ? "1" : "default", dt,
                    r.achievable_rate);
    }
    return 0;
}
