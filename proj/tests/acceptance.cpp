// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <genfn/accept.hpp>
#include <genfn/bench.hpp>
#include <genfn/http.hpp>
#include <genfn/sexpr.hpp>
#include <genfn/signum.hpp>
#include <genfn/walker.hpp>

#include <support/http_client.hpp>
#include <support/random_config.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace genfn;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double v, int digits = 2) {
    std::ostringstream out;
    out.precision(digits);
    out << std::fixed << v;
    return out.str();
}

// Call traces recorded by criteria 1, 2, 4 and 5 and replayed by criterion 3.
struct Traces {
    std::vector<std::pair<Value, std::string>> fact;
    std::vector<testing::RandomConfig> configs;
    std::vector<std::vector<std::string>> config_results;
    std::vector<std::pair<std::string, std::string>> walks;
    std::vector<std::pair<std::string, std::string>> negotiations;
};

Traces traces;

std::string call_fact(GenericFunction& fact, const Value& n) {
    try {
        return print_sexpr(fact({n}));
    } catch (const NoApplicableMethod&) {
        return "no-applicable-method";
    }
}

std::string describe_walk(const std::vector<Diagnostic>& diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) out += d.to_string() + " in " + print_sexpr(d.context) + "\n";
    return out;
}

std::string call_negotiation(GenericFunction& gf, const Value& arg) {
    try {
        return gf({arg}).as_string();
    } catch (const NoApplicableMethod&) {
        return "406";
    }
}

Outcome factorial_correctness() {
    auto start = Clock::now();
    auto fact = make_fact_gf();
    int failures = 0;
    std::int64_t oracle = 1;
    for (std::int64_t n = 0; n <= 20; ++n) {
        if (n > 1) oracle *= n;
        std::string got = call_fact(*fact, Value(n));
        traces.fact.emplace_back(Value(n), got);
        if (got != std::to_string(oracle)) ++failures;
    }
    std::string twenty = call_fact(*fact, Value(20));
    if (twenty != "2432902008176640000") ++failures;
    for (Value bad : {Value(-1), Value::string("x"), Value(-2.5)}) {
        std::string got = call_fact(*fact, bad);
        traces.fact.emplace_back(bad, got);
        if (got != "no-applicable-method") ++failures;
    }
    double elapsed = seconds_since(start);
    return {failures == 0 && elapsed < 1.0,
            "fact 20 = " + twenty + ", " + std::to_string(failures) + " mismatches, " + fixed(elapsed, 4) + " s"};
}

Outcome oracle_equivalence() {
    auto start = Clock::now();
    std::mt19937_64 rng(20140101);
    testing::ValuePool pool(rng);
    const int configurations = 1200;
    long checked = 0, mismatches = 0;
    for (int i = 0; i < configurations; ++i) {
        auto c = testing::make_random_config(rng, pool);
        // Alternate the cached modes so both keying schemes are replayed later.
        c.gf->set_cache_mode(i % 2 ? CacheMode::list_key : CacheMode::one_arg);
        std::vector<std::string> results;
        for (const auto& args : c.calls) {
            std::vector<GeneralizerPtr> gs;
            for (std::size_t p = 0; p < args.size(); ++p) gs.push_back(generalizer_of_using_class(*c.gf, args[p], p));
            auto by_generalizers = compute_applicable_methods_using_generalizers(*c.gf, gs);
            if (by_generalizers.definitive) {
                ++checked;
                if (by_generalizers.methods != compute_applicable_methods(*c.gf, args)) {
                    ++mismatches;
                    std::cerr << "  mismatch: configuration " << i << " (" << testing::to_string(c.kind) << ")\n";
                }
            }
            results.push_back(print_sexpr(testing::run_traced(c, args)));
        }
        traces.configs.push_back(std::move(c));
        traces.config_results.push_back(std::move(results));
    }
    double elapsed = seconds_since(start);
    return {mismatches == 0 && checked > 0 && elapsed < 30.0,
            std::to_string(configurations) + " configurations, " + std::to_string(checked) +
                " definitive comparisons, " + std::to_string(mismatches) + " mismatches, " + fixed(elapsed) + " s"};
}

struct WalkFixture {
    const char* source;
    std::vector<std::string> expected;
};

Outcome walker_corpus() {
    const std::vector<WalkFixture> fixtures{
        {"(let ((x 1)) x)", {}},
        {"(let ((x 1)) 2)", {"unused-binding x"}},
        {"(lambda (x) y)", {"unused-binding x", "unbound-variable y"}},
        {"(let ((x 1)) (+ x x))", {}},
        {"((f) y)", {"unbound-variable y"}},
        {"(lambda (x) (lambda (y) x))", {"unused-binding y"}},
    };
    int failures = 0;
    Walker walker(Walker::Implementation::cons_gf, CacheMode::one_arg);
    for (const auto& f : fixtures) {
        auto diagnostics = walker.check(read_sexpr(f.source));
        std::vector<std::string> got;
        for (const auto& d : diagnostics) got.push_back(d.to_string());
        traces.walks.emplace_back(f.source, describe_walk(diagnostics));
        if (got != f.expected) {
            ++failures;
            std::cerr << "  walker: unexpected diagnostics for " << f.source << "\n";
        }
    }
    return {failures == 0, std::to_string(fixtures.size()) + " fixtures, " + std::to_string(failures) + " failures"};
}

Outcome content_negotiation() {
    const auto& types = default_media_types();
    auto gf = make_negotiation_gf(types);
    int failures = 0;
    auto expect = [&](const std::string& header, const std::string& wanted) {
        std::string got = call_negotiation(*gf, Value::string(header));
        traces.negotiations.emplace_back(header, got);
        if (got != wanted) {
            ++failures;
            std::cerr << "  negotiation: \"" << header << "\" gave " << got << ", wanted " << wanted << "\n";
        }
    };
    expect("text/html,application/xml;q=0.9,*/*;q=0.8", "text/html");
    expect("application/xml;q=0.9", "application/xml");
    expect("text/html;q=0", "406");

    std::mt19937_64 rng(2616);
    int ordered = 0;
    for (int i = 0; i < 100; ++i) {
        std::string header = testing::random_accept_header(rng);
        std::vector<Value> args{Value::string(header)};
        std::string chosen = call_negotiation(*gf, args[0]);
        traces.negotiations.emplace_back(header, chosen);
        auto tree = parse_accept_string(header);
        bool ok = true;
        int previous = 1001;
        std::vector<MethodPtr> methods;
        try {
            auto em = gf->resolve(args);
            methods.assign(em->methods().begin(), em->methods().end());
        } catch (const NoApplicableMethod&) {
        }
        for (const auto& m : methods) {
            const auto& spec = static_cast<const AcceptSpecializer&>(m->specializer(0));
            int quality = q(spec.media_type(), tree).value_or(Quality()).thousandths();
            if (quality <= 0 || quality > previous) ok = false;
            previous = quality;
        }
        if (methods.empty() != (chosen == "406")) ok = false;
        if (ok) ++ordered;
        else std::cerr << "  negotiation: methods out of order for \"" << header << "\"\n";
    }
    failures += 100 - ordered;
    return {failures == 0, "3 fixed headers, " + std::to_string(ordered) + "/100 random headers in non-increasing q order"};
}

Outcome cache_transparency() {
    long replayed = 0, differences = 0;
    auto fact = make_fact_gf(CacheMode::disabled);
    for (const auto& [arg, result] : traces.fact) {
        ++replayed;
        if (call_fact(*fact, arg) != result) ++differences;
    }
    for (std::size_t i = 0; i < traces.configs.size(); ++i) {
        auto& c = traces.configs[i];
        c.gf->set_cache_mode(CacheMode::disabled);
        for (std::size_t k = 0; k < c.calls.size(); ++k) {
            ++replayed;
            if (print_sexpr(testing::run_traced(c, c.calls[k])) != traces.config_results[i][k]) ++differences;
        }
    }
    Walker walker(Walker::Implementation::cons_gf, CacheMode::disabled);
    for (const auto& [source, result] : traces.walks) {
        ++replayed;
        if (describe_walk(walker.check(read_sexpr(source))) != result) ++differences;
    }
    auto gf = make_negotiation_gf(default_media_types(), CacheMode::disabled);
    for (const auto& [header, result] : traces.negotiations) {
        ++replayed;
        if (call_negotiation(*gf, Value::string(header)) != result) ++differences;
    }
    bool complete = !traces.fact.empty() && !traces.configs.empty() && !traces.walks.empty() &&
                    !traces.negotiations.empty();
    return {complete && differences == 0,
            std::to_string(replayed) + " calls replayed without a cache, " + std::to_string(differences) +
                " differences"};
}

Outcome next_chain_parity() {
    auto gf = make_negotiation_gf(default_media_types());
    std::mt19937_64 rng(1945);
    int agree = 0;
    for (int i = 0; i < 50; ++i) {
        std::string header = testing::random_accept_header(rng);
        std::string from_string = call_negotiation(*gf, Value::string(header));
        std::string from_request =
            call_negotiation(*gf, make_request(Request{"GET", "/", {{"Accept", header}}}));
        if (from_string == from_request) ++agree;
        else std::cerr << "  parity: \"" << header << "\" " << from_string << " vs " << from_request << "\n";
    }
    return {agree == 50, std::to_string(agree) + "/50 headers select the same method"};
}

Outcome memoization_speedup() {
    auto start = Clock::now();
    auto signum = bench::bench_signum();
    auto cons = bench::bench_cons();
    double elapsed = seconds_since(start);
    // Rows: baseline, standard gf, one-arg cache, list-key cache, no cache.
    double signum_ratio = signum[4].micros_per_call / signum[3].micros_per_call;
    double cons_ratio = cons[4].micros_per_call / cons[3].micros_per_call;
    bool one_arg_fastest = signum[2].micros_per_call <= signum[3].micros_per_call &&
                           cons[2].micros_per_call <= cons[3].micros_per_call;
    std::cerr << bench::format_table(signum) << bench::format_table(cons);
    return {signum_ratio >= 3.0 && cons_ratio >= 2.0 && one_arg_fastest && elapsed < 60.0,
            "signum no-cache/cached " + fixed(signum_ratio) + "x, cons " + fixed(cons_ratio) +
                "x, one-arg vs list-key " + fixed(signum[2].micros_per_call, 3) + "/" +
                fixed(signum[3].micros_per_call, 3) + " and " + fixed(cons[2].micros_per_call, 3) + "/" +
                fixed(cons[3].micros_per_call, 3) + " us, " + fixed(elapsed, 1) + " s"};
}

Outcome http_end_to_end() {
    using testing::http_exchange;
    using testing::response_header;
    using testing::response_status;
    const int fuzz_inputs = 1000;
    http::Server server(0);
    std::thread worker([&server] {
        for (int i = 0; i < fuzz_inputs + 4; ++i) server.serve_one();
    });
    int failures = 0;
    auto check = [&](const std::string& raw, int status, const std::string& type) {
        std::string reply = http_exchange(server.port(), raw);
        if (response_status(reply) != status || (!type.empty() && response_header(reply, "Content-Type") != type)) {
            ++failures;
            std::cerr << "  http: unexpected reply " << reply.substr(0, reply.find('\r')) << "\n";
        }
    };
    check("GET / HTTP/1.1\r\nAccept: text/html,application/xml;q=0.9,*/*;q=0.8\r\n\r\n", 200, "text/html");
    check("GET / HTTP/1.1\r\nHost: localhost\r\n\r\n", 200, "");
    check("GET / HTTP/1.1\r\nAccept: video/mp4\r\n\r\n", 406, "");

    std::mt19937_64 rng(8080);
    int answered = 0;
    for (int i = 0; i < fuzz_inputs; ++i) {
        std::string raw;
        if (i % 4 == 1) raw = "GET / HTTP/1.1\r\nAccept: ";
        int n = std::uniform_int_distribution<int>(1, 512)(rng);
        for (int k = 0; k < n; ++k) raw += static_cast<char>(rng() & 0xff);
        if (i % 2) raw += "\r\n\r\n";
        int status = response_status(http_exchange(server.port(), raw));
        if (status == 200 || status == 400 || status == 406) ++answered;
    }
    check("GET / HTTP/1.1\r\nAccept: text/plain\r\n\r\n", 200, "text/plain");
    worker.join();
    return {failures == 0 && answered == fuzz_inputs,
            "3 end-to-end exchanges, " + std::to_string(answered) + "/" + std::to_string(fuzz_inputs) +
                " fuzz inputs answered, server alive afterwards"};
}

Outcome cache_invalidation() {
    int failures = 0;
    std::string detail;
    for (auto mode : {CacheMode::one_arg, CacheMode::list_key}) {
        auto fact = make_fact_gf(mode);
        std::string before = call_fact(*fact, Value(5));
        if (before != "120" || fact->cache_size() == 0) ++failures;
        fact->add_method(make_method({eql_specializer(Value(5))}, [](std::span<const Value>, const NextMethod& next) {
            return multiply(Value(2), next());
        }));
        std::string with_eql = call_fact(*fact, Value(5));
        if (with_eql != "240") ++failures;

        auto redefined = make_fact_gf(mode);
        call_fact(*redefined, Value(5));
        std::size_t methods = redefined->methods().size();
        redefined->add_method(make_method({make_signum_specializer(Value(1))},
                                          [](std::span<const Value>, const NextMethod&) { return Value(-1); }));
        std::string after = call_fact(*redefined, Value(5));
        if (after != "-1" || redefined->methods().size() != methods) ++failures;
        detail = "fact 5: " + before + " -> " + with_eql + " with eql 5, -> " + after + " with (signum 1) redefined";
    }
    return {failures == 0, detail + ", both cached modes"};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"factorial correctness", factorial_correctness},
        {"oracle equivalence", oracle_equivalence},
        {"cache transparency", cache_transparency},
        {"walker corpus", walker_corpus},
        {"content negotiation", content_negotiation},
        {"next-chain parity", next_chain_parity},
        {"memoization speedup", memoization_speedup},
        {"http end-to-end", http_end_to_end},
        {"cache invalidation", cache_invalidation},
    };
    // Transparency replays the traces of 1, 2, 4 and 5, so it runs after them.
    const int order[] = {0, 1, 3, 4, 2, 5, 6, 7, 8};
    std::vector<Outcome> outcomes(criteria.size());
    for (int i : order) {
        try {
            outcomes[i] = criteria[i].run();
        } catch (const std::exception& e) {
            outcomes[i] = {false, std::string("exception: ") + e.what()};
        }
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.pass) ++failed;
        std::printf("%s  %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed;
}
