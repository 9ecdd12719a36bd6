// Command-line front end: walk, fact, negotiate, serve, bench.

#include <genfn/accept.hpp>
#include <genfn/bench.hpp>
#include <genfn/http.hpp>
#include <genfn/sexpr.hpp>
#include <genfn/signum.hpp>
#include <genfn/walker.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_domain_error = 1;
constexpr int exit_usage = 2;

int run_walk(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "walk: cannot open " << path << "\n";
        return exit_domain_error;
    }
    std::stringstream text;
    text << in.rdbuf();
    try {
        for (const auto& d : genfn::walk_check(text.str())) std::cout << d.to_string() << "\n";
    } catch (const genfn::ParseError& e) {
        std::cerr << "walk: " << e.what() << "\n";
        return exit_domain_error;
    }
    return exit_ok;
}

int run_fact(const std::string& text) {
    genfn::Value n;
    try {
        n = genfn::read_sexpr(text);
    } catch (const genfn::ParseError& e) {
        std::cerr << "fact: " << e.what() << "\n";
        return exit_usage;
    }
    auto fact = genfn::make_fact_gf();
    try {
        std::cout << genfn::print_sexpr((*fact)({n})) << "\n";
    } catch (const genfn::NoApplicableMethod&) {
        std::cout << "no-applicable-method\n";
        return exit_domain_error;
    }
    return exit_ok;
}

int run_negotiate(const std::string& header, std::vector<std::string> types) {
    if (types.empty()) types = genfn::default_media_types();
    std::optional<std::string> chosen;
    try {
        chosen = genfn::negotiate(header, types);
    } catch (const std::invalid_argument& e) {
        std::cerr << "negotiate: " << e.what() << "\n";
        return exit_usage;
    }
    if (!chosen) {
        std::cout << "406\n";
        return exit_domain_error;
    }
    std::cout << *chosen << "\n";
    return exit_ok;
}

int run_serve(int port) {
    if (port < 0 || port > 65535) {
        std::cerr << "serve: port out of range\n";
        return exit_usage;
    }
    try {
        genfn::http::Server server(static_cast<std::uint16_t>(port));
        std::cerr << "serving on http://127.0.0.1:" << server.port() << "/\n";
        server.serve_forever();
    } catch (const std::exception& e) {
        std::cerr << "serve: " << e.what() << "\n";
        return exit_domain_error;
    }
}

int run_bench(const std::string& scenario) {
    try {
        if (scenario == "signum" || scenario == "all") {
            std::cout << "signum (20!)\n" << genfn::bench::format_table(genfn::bench::bench_signum()) << "\n";
        }
        if (scenario == "cons" || scenario == "all") {
            std::cout << "cons walker " << genfn::bench::cons_fixture() << "\n"
                      << genfn::bench::format_table(genfn::bench::bench_cons()) << "\n";
        }
    } catch (const genfn::bench::CorrectnessError& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return exit_domain_error;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generic-function dispatch with generalizers"};
    app.require_subcommand(1);

    std::string walk_path;
    auto* walk = app.add_subcommand("walk", "Report unused bindings and unbound variables in a form");
    walk->add_option("file", walk_path, "File holding one s-expression")->required();

    std::string fact_arg;
    auto* fact = app.add_subcommand("fact", "Factorial by signum dispatch");
    fact->add_option("n", fact_arg, "Argument, read as an s-expression")->required()->allow_extra_args(false);

    std::string header;
    std::vector<std::string> types;
    auto* negotiate = app.add_subcommand("negotiate", "Pick a media type for an Accept header");
    negotiate->add_option("header", header, "Accept header value")->required();
    negotiate->add_option("types", types, "Media types on offer (default: text/html application/xml text/plain)");

    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Serve a content-negotiated resource over HTTP/1.1");
    serve->add_option("--port", port, "TCP port on 127.0.0.1");

    std::string scenario = "all";
    auto* bench = app.add_subcommand("bench", "Time the dispatch strategies");
    bench->add_option("--scenario", scenario, "signum, cons or all")
        ->check(CLI::IsMember({"signum", "cons", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    if (*walk) return run_walk(walk_path);
    if (*fact) return run_fact(fact_arg);
    if (*negotiate) return run_negotiate(header, types);
    if (*serve) return run_serve(port);
    if (*bench) return run_bench(scenario);
    return exit_usage;
}
