// Runs the Euclidean-norm objective with the adaptive (gap-proportional)
// stepsize and prints the squared distance to the minimizer together with the
// fitted geometric rate. With relaxation 0.5 each step halves the distance,
// so the squared distance contracts by exactly 0.25 per iteration.

#include <cstdio>

#include "qsub/analysis.hpp"
#include "qsub/problems.hpp"
#include "qsub/solvers.hpp"

int main() {
  using namespace qsub;
  ProblemInstance pb = catalog_entry("power_norm");
  StepsizeRule rule = StepsizeRule::dynamic({0.5, 0.5}, pb.optimal_value, 1.0);

  RunConfig rc;
  rc.x1 = {3.0, 4.0};
  rc.max_iter = 40;
  IterationTrace trace = run(pb, SolverKind::standard(), rule, rc);

  std::printf("%4s  %22s  %22s\n", "k", "f(x_k)", "dist^2");
  for (const auto& rec : trace.records) {
    if (rec.k <= 8 || rec.k == trace.records.back().k) {
      std::printf("%4ld  %22.15e  %22.15e\n", rec.k, rec.f_value,
                  rec.dist * rec.dist);
    }
  }

  RateFit fit = fit_geometric(dist_sq_series(trace), 0.0, 0);
  std::printf("\nfitted geometric rate: %.12f (r^2 = %.6f)\n", fit.rate,
              fit.r_squared);
  return 0;
}
