// hahnexp: build Hahn-series logarithms, evaluate expressions, run the
// invariant suites and print rank or tower reports.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hahnexp/config.hpp"
#include "hahnexp/expr.hpp"
#include "hahnexp/report.hpp"
#include "hahnexp/suites.hpp"

namespace
{

using namespace hahnexp;

struct Flags {
    std::string config_file;
    std::string tau;
    unsigned depth = 0;
    unsigned max_depth = 0;
    unsigned order = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::string mode;
    std::string window;
    std::string interval_width;
    std::string format = "text";
    std::string output;
    bool timing = false;
};

RunConfig resolve(const Flags &f, const CLI::App &app)
{
    RunConfig cfg;
    if (!f.config_file.empty()) {
        apply_config_file(cfg, f.config_file);
    }
    const auto given = [&app](const char *name) { return app.count(name) > 0; };
    if (given("--tau")) {
        cfg.tau = parse_tau(f.tau);
    }
    if (given("--depth")) {
        cfg.depth = f.depth;
    }
    if (given("--max-depth")) {
        cfg.max_depth = f.max_depth;
    }
    if (given("--order")) {
        cfg.taylor_order = f.order;
    }
    if (given("--samples")) {
        cfg.samples = f.samples;
    }
    if (given("--seed")) {
        cfg.seed = f.seed;
    }
    if (given("--mode")) {
        cfg.mode = parse_mode(f.mode);
    }
    if (given("--window")) {
        cfg.window = parse_window(f.window);
    }
    if (given("--interval-width")) {
        cfg.interval_width = parse_rational(f.interval_width);
    }
    cfg.validate();
    return cfg;
}

Report eval_report(const std::string &expression, const RunConfig &cfg)
{
    Report rep{"eval", cfg};
    const Universe u = cfg.universe();
    const Evaluator ev(u, make_components(LogCrossSection(u), cfg.residue_log()), PrecisionPolicy(cfg.taylor_order));
    rep.data["expression"] = expression;
    try {
        const EvalValue v = ev.evaluate(expression);
        rep.data["kind"] = eval_kind(v);
        rep.data["value"] = to_string(v, *u);
    } catch (const parse_error &) {
        throw;
    } catch (const error &e) {
        rep.data["error"] = e.what();
        rep.ok = false;
    }
    return rep;
}

void emit(const Report &rep, const Flags &f)
{
    const std::string body = f.format == "json" ? render_json(rep) : render_text(rep);
    if (f.output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(f.output, std::ios::binary);
    if (!out) {
        throw domain_violation("cannot write '" + f.output + "'");
    }
    out << body;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hahn-series fields with strong logarithms: construction and checks"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--config", f.config_file, "key = value configuration file (flags override it)");
    app.add_option("--tau", f.tau, "order type: comma-separated labels or a size n");
    app.add_option("--depth", f.depth, "tower depth N");
    app.add_option("--max-depth", f.max_depth, "bound on the tower depth");
    app.add_option("--order", f.order, "Taylor order of the right logarithm and exponential");
    app.add_option("--samples", f.samples, "samples per suite");
    app.add_option("--seed", f.seed, "random seed");
    app.add_option("--mode", f.mode, "residue logarithm: monic or interval");
    app.add_option("--window", f.window, "offset window lo..hi");
    app.add_option("--interval-width", f.interval_width, "width of residue-log enclosures");
    app.add_option("--format", f.format, "report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--out", f.output, "write the report to a file");
    app.add_flag("--timing", f.timing, "print the elapsed time to stderr");

    auto *build = app.add_subcommand("build", "construct G, zeta, h and the tower; print the construction data");
    std::string expression;
    auto *eval = app.add_subcommand("eval", "evaluate a series expression");
    eval->add_option("expression", expression, "expression, e.g. log(t^{-e(t0,0)})")->required();
    std::vector<std::string> suites;
    auto *check = app.add_subcommand("check", "run named invariant suites ('all' runs every suite)");
    check->add_option("suites", suites, "suite names")->required();
    auto *rank = app.add_subcommand("rank", "exponential rank, principal ranks and segment compatibility");
    auto *tower = app.add_subcommand("tower", "stage-by-stage report of the tower");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        const RunConfig cfg = resolve(f, app);
        Report rep;
        if (*build) {
            rep = build_report(cfg);
        } else if (*eval) {
            rep = eval_report(expression, cfg);
        } else if (*check) {
            if (suites.size() == 1 && suites.front() == "all") {
                suites = suite_names();
            }
            for (const std::string &s : suites) {
                if (!suite_table().count(s)) {
                    std::cerr << "unknown suite '" << s << "'; available:";
                    for (const std::string &n : suite_names()) {
                        std::cerr << ' ' << n;
                    }
                    std::cerr << '\n';
                    return 2;
                }
            }
            rep = check_report(suites, cfg);
        } else if (*rank) {
            rep = rank_report(cfg);
        } else if (*tower) {
            rep = tower_report(cfg);
        }
        emit(rep, f);
        if (f.timing) {
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
            std::cerr << "elapsed: " << dt.count() << " s\n";
        }
        return rep.ok ? 0 : 1;
    } catch (const parse_error &e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
