// Prints iteration budgets for reaching a value accuracy delta on the
// Euclidean-norm objective, for each stepsize family, and verifies each
// budget against an actual run.

#include <cstdio>

#include "qsub/analysis.hpp"
#include "qsub/problems.hpp"
#include "qsub/solvers.hpp"

int main() {
  using namespace qsub;
  ProblemInstance pb = catalog_entry("power_norm");
  SolverKind kind = SolverKind::standard();
  FrameworkConstants constants = framework_constants(kind, pb.holder);
  Vec x1 = {3.0, 4.0};
  double delta = 0.25;

  struct Row {
    const char* label;
    StepsizeRule rule;
    ComplexityReport::Kind kind;
  };
  Row rows[] = {
      {"constant v=0.1", StepsizeRule::constant(0.1),
       ComplexityReport::Kind::k1},
      {"diminishing c=1, s=0.5", StepsizeRule::diminishing(1.0, 0.5),
       ComplexityReport::Kind::k2},
      {"dynamic lambda=1", StepsizeRule::dynamic({1.0, 1.0}, pb.optimal_value, 1.0),
       ComplexityReport::Kind::k3},
  };

  std::printf("%-24s  %10s  %16s  %16s  %s\n", "stepsize", "budget",
              "value_bound", "achieved_min", "holds");
  for (const auto& row : rows) {
    ComplexityReport rep =
        complexity_budget(row.kind, pb, row.rule, constants, delta, x1);
    RunConfig rc;
    rc.x1 = x1;
    rc.max_iter = rep.budget;
    IterationTrace trace = run(pb, kind, row.rule, rc);
    rep = check_complexity(trace, pb, row.rule, rep);
    std::printf("%-24s  %10ld  %16.9f  %16.9f  %s\n", row.label, rep.budget,
                rep.value_bound, rep.achieved_min, rep.holds ? "yes" : "NO");
  }
  return 0;
}
