#include <genfn/bench.hpp>
#include <genfn/sexpr.hpp>
#include <genfn/signum.hpp>
#include <genfn/walker.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace genfn::bench {

namespace {

using Clock = std::chrono::steady_clock;

[[gnu::noinline]] std::int64_t fact_function(std::int64_t n) { return n == 0 ? 1 : n * fact_function(n - 1); }

std::int64_t fact_oracle(std::int64_t n) {
    std::int64_t p = 1;
    for (std::int64_t i = 2; i <= n; ++i) p *= i;
    return p;
}

std::vector<BenchResult> with_overheads(std::vector<BenchResult> rows) {
    double base = rows.front().micros_per_call;
    for (auto& r : rows) r.overhead_percent = (r.micros_per_call / base - 1.0) * 100.0;
    return rows;
}

std::vector<std::string> render(const std::vector<Diagnostic>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.push_back(d.to_string());
    return out;
}

} // namespace

double central_mean(std::vector<double> samples, std::size_t central) {
    if (samples.empty()) throw std::invalid_argument("central_mean: no samples");
    std::sort(samples.begin(), samples.end());
    central = std::clamp<std::size_t>(central, 1, samples.size());
    std::size_t first = (samples.size() - central) / 2;
    double sum = std::accumulate(samples.begin() + first, samples.begin() + first + central, 0.0);
    return sum / static_cast<double>(central);
}

std::chrono::nanoseconds clock_resolution() {
    auto best = std::chrono::nanoseconds::max();
    for (int i = 0; i < 100; ++i) {
        auto t0 = Clock::now();
        auto t1 = Clock::now();
        while (t1 == t0) t1 = Clock::now();
        best = std::min(best, std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0));
    }
    return std::max(best, std::chrono::nanoseconds(1));
}

std::vector<double> time_per_call(const std::vector<std::function<void()>>& bodies, const BenchOptions& options) {
    auto target = std::max(options.min_run_time, 100 * clock_resolution());
    auto run = [&](std::size_t v, std::size_t iterations) {
        auto t0 = Clock::now();
        for (std::size_t i = 0; i < iterations; ++i) bodies[v]();
        return Clock::now() - t0;
    };

    std::vector<std::size_t> iterations(bodies.size(), 1);
    for (std::size_t v = 0; v < bodies.size(); ++v) {
        while (run(v, iterations[v]) < target) iterations[v] *= 2;
        run(v, iterations[v]); // warm-up, discarded
    }

    // Runs are interleaved across variants, alternating the order each round,
    // so that drift in machine speed lands on every variant alike.
    std::vector<std::vector<double>> samples(bodies.size());
    for (std::size_t r = 0; r < options.runs; ++r) {
        for (std::size_t k = 0; k < bodies.size(); ++k) {
            std::size_t v = r % 2 == 0 ? k : bodies.size() - 1 - k;
            auto elapsed = std::chrono::duration<double, std::micro>(run(v, iterations[v])).count();
            samples[v].push_back(elapsed / static_cast<double>(iterations[v]));
        }
    }
    std::vector<double> means;
    for (auto& s : samples) means.push_back(central_mean(std::move(s), options.central));
    return means;
}

double time_per_call(const std::function<void()>& body, const BenchOptions& options) {
    return time_per_call(std::vector<std::function<void()>>{body}, options).front();
}

std::vector<BenchResult> bench_signum(const BenchOptions& options) {
    constexpr std::int64_t n = 20;
    const std::int64_t expected = fact_oracle(n);
    const Value arg(n);

    auto standard = make_standard_fact_gf();
    auto one_arg = make_fact_gf(CacheMode::one_arg);
    auto list_key = make_fact_gf(CacheMode::list_key);
    auto no_cache = make_fact_gf(CacheMode::disabled);

    volatile std::int64_t input = n;
    if (fact_function(input) != expected) throw CorrectnessError("function: wrong value for 20!");
    struct Row {
        const char* label;
        GenericFunction* gf;
    };
    const Row rows[] = {{"standard-gf/integer", standard.get()},
                        {"signum-gf/one-arg-cache", one_arg.get()},
                        {"signum-gf", list_key.get()},
                        {"signum-gf/no-cache", no_cache.get()}};
    for (const auto& row : rows) {
        Value v = (*row.gf)({arg});
        if (!v.is_integer() || v.as_integer() != expected)
            throw CorrectnessError(std::string(row.label) + ": wrong value for 20!");
    }

    volatile std::int64_t sink = 0;
    std::vector<std::function<void()>> bodies{[&] { sink = fact_function(input); }};
    for (const auto& row : rows) bodies.push_back([&] { sink = (*row.gf)({arg}).as_integer(); });
    auto times = time_per_call(bodies, options);
    (void)sink;

    std::vector<BenchResult> results{{"function", times[0]}};
    for (std::size_t i = 0; i < std::size(rows); ++i) results.push_back({rows[i].label, times[i + 1]});
    return with_overheads(std::move(results));
}

const char* cons_fixture() { return "(lambda (x y) (let ((z (f x))) (g z y z)))"; }

std::vector<BenchResult> bench_cons(const BenchOptions& options) {
    const Value form = read_sexpr(cons_fixture());

    Walker function(Walker::Implementation::function);
    Walker standard(Walker::Implementation::standard_gf);
    Walker one_arg(Walker::Implementation::cons_gf, CacheMode::one_arg);
    Walker list_key(Walker::Implementation::cons_gf, CacheMode::list_key);
    Walker no_cache(Walker::Implementation::cons_gf, CacheMode::disabled);

    struct Row {
        const char* label;
        Walker* walker;
    };
    const Row rows[] = {{"function", &function},
                        {"standard-gf/methods", &standard},
                        {"cons-gf/one-arg-cache", &one_arg},
                        {"cons-gf", &list_key},
                        {"cons-gf/no-cache", &no_cache}};

    const auto expected = render(function.check(form));
    for (const auto& row : rows)
        if (render(row.walker->check(form)) != expected)
            throw CorrectnessError(std::string(row.label) + ": diagnostics differ from the function walker");

    volatile std::size_t sink = 0;
    std::vector<std::function<void()>> bodies;
    for (const auto& row : rows) bodies.push_back([&] { sink = row.walker->check(form).size(); });
    auto times = time_per_call(bodies, options);
    (void)sink;

    std::vector<BenchResult> results;
    for (std::size_t i = 0; i < std::size(rows); ++i) results.push_back({rows[i].label, times[i]});
    return with_overheads(std::move(results));
}

std::string format_table(const std::vector<BenchResult>& results) {
    std::size_t width = std::string("implementation").size();
    for (const auto& r : results) width = std::max(width, r.implementation.size());

    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-*s  %14s  %s\n", static_cast<int>(width), "implementation", "time (µs/call)",
                  "overhead");
    out += line;
    out += std::string(width + 2 + 15 + 2 + 10, '-') + "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        char overhead[32] = "";
        if (i > 0) std::snprintf(overhead, sizeof overhead, "%+.0f%%", r.overhead_percent);
        std::snprintf(line, sizeof line, "%-*s  %13.3f  %s\n", static_cast<int>(width), r.implementation.c_str(),
                      r.micros_per_call, overhead);
        out += line;
    }
    return out;
}

} // namespace genfn::bench
