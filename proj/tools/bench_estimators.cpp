// Compares the serial and OpenMP paths of the Monte Carlo estimators on a
// small body battery and checks that both paths agree bit for bit (the
// batched reduction is order-fixed, so they must).

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "convexreg/body.hpp"
#include "convexreg/measure.hpp"

using namespace convexreg;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

void bench(const std::string& label, const ConvexBody& k, long samples) {
  RngStream rng(17, 5);
  double t0 = now_ms();
  Estimate serial = vrad_mc(k, samples, rng, /*parallel=*/false);
  double t1 = now_ms();
  Estimate par = vrad_mc(k, samples, rng, /*parallel=*/true);
  double t2 = now_ms();
  bool identical = serial.value == par.value && serial.se == par.se;
  std::printf("%-22s n=%d samples=%ld  serial %8.1f ms  parallel %8.1f ms  "
              "speedup %.2fx  identical=%s\n",
              label.c_str(), k.dim(), samples, t1 - t0, t2 - t1,
              (t1 - t0) / std::max(t2 - t1, 1e-9), identical ? "yes" : "NO");
  if (!identical) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  long samples = argc > 1 ? std::atol(argv[1]) : 200000;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  bench("cube(5)", cube(5, 1.0), samples);
  bench("cross_polytope(5)", cross_polytope(5, 1.0), samples);
  bench("simplex(5)", regular_simplex(5), samples);
  bench("inner_reg(simplex(5))", inner_reg(regular_simplex(5)), samples / 10);
  bench("polar(cube(6))", polar(cube(6, 1.0)), samples);
  return 0;
}
