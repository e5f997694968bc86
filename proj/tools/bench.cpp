// Benchmark: OpenMP batch runner vs the serial reference, with an equality
// check on the aggregated results.
//
//   socsim-bench [n_replications] [horizon]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "socsim/harness.hpp"

using namespace socsim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    ExperimentConfig cfg;
    cfg.level = EnvironmentLevel::RefinedRecommender;
    cfg.n_replications = argc > 1 ? std::atoi(argv[1]) : 900;
    cfg.horizon = argc > 2 ? std::atoi(argv[2]) : 1000;
    cfg.base_seed = 20240613;

    std::printf("refined environment, %d replications x %d steps, %d worker(s)\n",
                cfg.n_replications, cfg.horizon, resolve_thread_count());

    auto t0 = std::chrono::steady_clock::now();
    const BatchResult serial = run_batch_serial(cfg);
    const double t_serial = seconds_since(t0);
    std::printf("serial reference : %8.3f s  (%.1f replications/s)\n", t_serial,
                cfg.n_replications / t_serial);

    t0 = std::chrono::steady_clock::now();
    const BatchResult parallel = run_batch(cfg);
    const double t_parallel = seconds_since(t0);
    std::printf("openmp batch     : %8.3f s  (%.1f replications/s)\n", t_parallel,
                cfg.n_replications / t_parallel);

    std::printf("speedup          : %8.2fx\n", t_serial / t_parallel);

    if (!(serial == parallel)) {
        std::printf("MISMATCH: parallel result differs from the serial reference\n");
        return 1;
    }
    std::printf("results identical: yes\n");
    return 0;
}
