// Timing comparison of the serial and OpenMP assembly paths on a large mesh.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bstokes/system.hpp"

using namespace bstokes;

namespace {

template <class F>
double time_ms(F&& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 128;
  int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  Mesh mesh = build_split_square(n, BcConfig::StressPressure);
  Spaces sp = build_spaces(mesh);
  std::printf("mesh: %d cells, u-space %d dofs\n", mesh.num_cells(), sp[0].dim());
#ifdef _OPENMP
  std::printf("omp threads: %d\n", omp_get_max_threads());
#else
  std::printf("omp: not compiled in\n");
#endif

  struct Row {
    const char* name;
    SpMat (*run)(const Mesh&, const FieldSpace&, double, ExecPolicy);
    const FieldSpace* space;
  };
  const Row rows[] = {
      {"eps_eps(u)", &assemble_eps_eps, &sp[0]},
      {"mass(p_P)", &assemble_mass, &sp[4]},
      {"stiffness(p_P)", &assemble_stiffness, &sp[4]},
  };

  std::printf("%-16s %12s %12s %8s\n", "kernel", "serial[ms]", "parallel[ms]", "speedup");
  for (const Row& row : rows) {
    SpMat ref, par;
    double ts = time_ms([&] { ref = row.run(mesh, *row.space, 1.0, ExecPolicy::Serial); }, reps);
    double tp = time_ms([&] { par = row.run(mesh, *row.space, 1.0, ExecPolicy::Parallel); }, reps);
    double diff = (ref - par).norm();
    std::printf("%-16s %12.2f %12.2f %8.2fx%s\n", row.name, ts, tp, ts / tp,
                diff == 0.0 ? "" : "  MISMATCH");
  }
  return 0;
}
