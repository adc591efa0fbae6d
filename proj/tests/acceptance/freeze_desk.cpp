// Regenerates the frozen desk-preset reference rows used by the acceptance
// suite: dense brute-force replications with an independent seed.
#include <cstdio>
#include <cstdlib>

#include "specpert/montecarlo.hpp"

using namespace specpert;

int main(int argc, char** argv) {
  const std::size_t reps = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2000;
  ExperimentConfig cfg = desk_preset(SeedSpec{424242});
  cfg.replications = reps;
  const Experiment exp(cfg);
  std::printf("// n, dev_A_over_n, dev_minus2bhat, dev_Bn2, dev_Vtilde (%zu reps, seed 424242)\n", reps);
  for (std::size_t n : cfg.sample_sizes) {
    ReplicationSet set;
    set.n = n;
    set.records.resize(reps);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < reps; ++i) set.records[i] = run_replication_reference(exp, n, i);
    for (const auto& r : set.records)
      if (!r.ok) ++set.failures;
    const AggregateResult a = aggregate(exp, set);
    std::printf("{%zu, %.6f, %.6f, %.6f, %.6f},  // failures %zu\n", n, a.dev_a_over_n, a.dev_minus2bhat,
                a.dev_bn2, a.dev_v_tilde, set.failures);
    std::fflush(stdout);
  }
}
