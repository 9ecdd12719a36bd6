#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace genfn::bench {

struct BenchResult {
    std::string implementation;
    double micros_per_call = 0;
    /// (t / t_baseline - 1) * 100, against the first row of the same scenario.
    double overhead_percent = 0;
};

struct BenchOptions {
    std::size_t runs = 20;
    std::size_t central = 10;
    /// Lower bound on one run's duration; the clock-resolution bound (100x) also applies.
    std::chrono::nanoseconds min_run_time = std::chrono::milliseconds(5);
};

/// A variant disagreed with the oracle before timing started.
class CorrectnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mean of the `central` middle samples after sorting.
double central_mean(std::vector<double> samples, std::size_t central);

/// Smallest observed nonzero tick of the steady clock.
std::chrono::nanoseconds clock_resolution();

/// Mean time per call of `body` in microseconds: one discarded warm-up run,
/// then `runs` timed runs whose central samples are averaged.
double time_per_call(const std::function<void()>& body, const BenchOptions& options);

/// The same for several bodies at once, with their runs interleaved.
std::vector<double> time_per_call(const std::vector<std::function<void()>>& bodies, const BenchOptions& options);

/// 20! five ways: plain function, standard gf on integer, signum gf with the
/// one-argument cache, with the list-key cache, and without a cache.
std::vector<BenchResult> bench_signum(const BenchOptions& options = {});

/// The walker on (lambda (x y) (let ((z (f x))) (g z y z))) five ways:
/// single function, standard gf, cons gf with each cache mode.
std::vector<BenchResult> bench_cons(const BenchOptions& options = {});

/// Columns: implementation, time (µs/call), overhead.
std::string format_table(const std::vector<BenchResult>& results);

/// The walked fixture.
const char* cons_fixture();

} // namespace genfn::bench
