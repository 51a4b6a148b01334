// Serial vs OpenMP timings for contour evaluation and root isolation.

#include <ddae/fsa.hpp>
#include <ddae/spectrum.hpp>

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

namespace {

template <typename F>
double seconds(F&& f, int repeats) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) {
        f();
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return elapsed.count() / repeats;
}

}  // namespace

int main() {
    using namespace ddae;
    FsaPlant plant;
    plant.e = RealMatrix{{0.0, 1.0}, {0.0, 0.0}};
    plant.f = RealMatrix{{0.0}, {1.0}};
    plant.t = 1.0;
    const RealMatrix gain = place_poles(plant, {Complex(-1.0, 0.0), Complex(-2.0, 0.0)});
    const DdaeSystem sys = build_fsa(plant, gain);
    const Rect window{-3.0, 1.0, -30.0, 30.0};

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-24s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "speedup");
    for (const auto& [name, run] :
         std::initializer_list<std::pair<const char*, std::function<void(Execution)>>>{
             {"find_roots", [&](Execution e) {
                  RootFinderOptions options;
                  options.execution = e;
                  find_roots(sys, window, 64, options);
              }},
             {"verify_fsa_identity", [&](Execution e) {
                  verify_fsa_identity(plant, gain, default_identity_samples(), e);
              }},
             {"winding_number", [&](Execution e) {
                  winding_number(characteristic_function(sys), window, e);
              }}}) {
        const double serial = seconds([&] { run(Execution::Serial); }, 3);
        const double parallel = seconds([&] { run(Execution::Parallel); }, 3);
        std::printf("%-24s %12.4f %12.4f %8.2f\n", name, serial, parallel, serial / parallel);
    }
}
