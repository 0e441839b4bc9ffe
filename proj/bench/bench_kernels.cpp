// Compares the OpenMP kernels against the serial references and times the
// interpolation decoder. Usage: codedmm_bench [size] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "codedmm/codes.hpp"
#include "codedmm/matrix.hpp"

using namespace codedmm;

namespace {

struct Rng {
    std::uint64_t state = 42;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0; }
};

Matrix random_matrix(std::int64_t rows, std::int64_t cols, Rng& rng) {
    std::vector<double> data(static_cast<std::size_t>(rows * cols));
    for (auto& v : data) v = rng.next_unit();
    return Matrix(rows, cols, std::move(data));
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                             .count();
        if (s < best) best = s;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const std::int64_t size = argc > 1 ? std::atoll(argv[1]) : 512;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

#ifdef _OPENMP
    std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled at build time\n");
#endif

    Rng rng;
    const auto a = random_matrix(size, size, rng);
    const auto b = random_matrix(size, size, rng);

    volatile double sink = 0.0;
    const double t_serial = time_best_of(reps, [&] { sink = sink + multiply_serial(a, b)(0, 0); });
    const double t_parallel = time_best_of(reps, [&] { sink = sink + multiply(a, b)(0, 0); });
    const double flops = 2.0 * static_cast<double>(size) * size * size;
    std::printf("gemm %lldx%lld:\n", static_cast<long long>(size), static_cast<long long>(size));
    std::printf("  serial   %8.3f ms  %7.2f GFLOP/s\n", t_serial * 1e3, flops / t_serial / 1e9);
    std::printf("  parallel %8.3f ms  %7.2f GFLOP/s  (%.2fx)\n", t_parallel * 1e3,
                flops / t_parallel / 1e9, t_serial / t_parallel);

    // decode: 16 coefficients from 16 results of (size/4)^2 entries each
    const std::int64_t block = std::max<std::int64_t>(size / 4, 1);
    CodeSpec spec;
    spec.scheme = Scheme::polynomial;
    spec.cut = CutSpec{4, 1, 4};
    spec.n_workers = 16;
    spec.eval_points = chebyshev_points(16);
    std::vector<Matrix> a_blocks, b_blocks;
    for (int i = 0; i < 4; ++i) {
        a_blocks.push_back(random_matrix(block, block, rng));
        b_blocks.push_back(random_matrix(block, block, rng));
    }
    const auto jobs = polynomial_encode(a_blocks, b_blocks, spec);
    std::vector<CodedResult> results;
    for (const auto& job : jobs) {
        results.push_back(CodedResult{job.worker_id, job.eval_point,
                                      multiply(job.a_tilde, job.b_tilde)});
    }
    const double t_decode = time_best_of(reps, [&] { sink = sink + decode(results, spec)[0](0, 0); });
    std::printf("decode K=16, %lldx%lld blocks: %8.3f ms\n", static_cast<long long>(block),
                static_cast<long long>(block), t_decode * 1e3);
    (void)sink;
    return 0;
}
