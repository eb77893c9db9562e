#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <hahnexp/config.hpp>
#include <hahnexp/expr.hpp>
#include <hahnexp/report.hpp>
#include <hahnexp/suites.hpp>

#include "helpers.hpp"

using namespace hahnexp;
using namespace testing_support;

namespace
{

TEST(Config, TauForms)
{
    EXPECT_EQ(parse_tau("3"), (std::vector<std::string>{"t0", "t1", "t2"}));
    EXPECT_EQ(parse_tau(" a, b ,c"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_THROW(parse_tau("0"), domain_violation);
    EXPECT_THROW(parse_tau("a,,b"), domain_violation);
    EXPECT_THROW(parse_tau("a,a"), domain_violation);
    EXPECT_THROW(parse_tau("a-b"), domain_violation);
}

TEST(Config, WindowAndMode)
{
    const OffsetWindow w = parse_window("-2..5");
    EXPECT_EQ(w.lo, -2);
    EXPECT_EQ(w.hi, 5);
    EXPECT_EQ(parse_window("1,1").lo, 1);
    EXPECT_THROW(parse_window("3..1"), domain_violation);
    EXPECT_THROW(parse_window("x..1"), domain_violation);
    EXPECT_THROW(parse_window("4"), domain_violation);
    EXPECT_EQ(parse_mode("interval"), ResidueLog::Mode::interval);
    EXPECT_THROW(parse_mode("exact"), domain_violation);
}

TEST(Config, Text)
{
    RunConfig cfg;
    apply_config_text(cfg, "# comment\n tau = a,b\ndepth=1\nsamples = 7 # trailing\n\nwindow = -1..1\n"
                           "mode = interval\ninterval_width = 1/100\nseed=42\norder = 3\n");
    EXPECT_EQ(cfg.tau, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(cfg.depth, 1u);
    EXPECT_EQ(cfg.samples, 7u);
    EXPECT_EQ(cfg.window.lo, -1);
    EXPECT_EQ(cfg.mode, ResidueLog::Mode::interval);
    EXPECT_EQ(cfg.interval_width, Rational(1, 100));
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(cfg.taylor_order, 3u);
    EXPECT_NO_THROW(cfg.validate());

    RunConfig bad;
    EXPECT_THROW(apply_config_text(bad, "colour = red\n"), domain_violation);
    EXPECT_THROW(apply_config_text(bad, "depth\n"), domain_violation);
    EXPECT_THROW(apply_config_text(bad, "depth = -1\n"), domain_violation);
    try {
        apply_config_text(bad, "tau = a\n\nsamples = many\n");
        FAIL();
    } catch (const domain_violation &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Config, Validation)
{
    RunConfig cfg;
    cfg.depth = 4;
    EXPECT_THROW(cfg.validate(), depth_exceeded);
    cfg = RunConfig{};
    cfg.samples = 0;
    EXPECT_THROW(cfg.validate(), domain_violation);
    cfg = RunConfig{};
    cfg.taylor_order = 0;
    EXPECT_THROW(cfg.validate(), domain_violation);
}

class EvaluatorTest : public ::testing::Test
{
protected:
    Universe u = universe(1);
    Evaluator ev{u, make_components(LogCrossSection(u)), PrecisionPolicy(4)};

    std::string show(std::string_view text) const
    {
        return to_string(ev.evaluate(text), *u);
    }
};

TEST_F(EvaluatorTest, Examples)
{
    EXPECT_EQ(show("log(t^{-e(t0,0)})"), "t^{-e(t0,1)} (exact)");
    EXPECT_EQ(show("log(1)"), "0 (exact)");
    EXPECT_EQ(show("(1 + t^{e(t0,0)}) * (1 - t^{e(t0,0)})"), "1 - t^{2*e(t0,0)} (exact)");
    EXPECT_EQ(show("v(t^{-e(t0,0)} + 3)"), "-e(t0,0)");
    EXPECT_EQ(show("v(0)"), "+inf");
    EXPECT_EQ(show("vG(e(t0,2) - e(t0,1))"), "(t0,1)");
    EXPECT_EQ(show("chi(-e(t0,0))"), "-e(t0,1)");
    EXPECT_EQ(show("exp(log(t^{-e(t0,0)}))"), "t^{-e(t0,0)} (exact)");
    EXPECT_EQ(eval_kind(ev.evaluate("e(t0,0)")), "group");
    EXPECT_EQ(eval_kind(ev.evaluate("vG(e(t0,0))")), "index");
}

TEST_F(EvaluatorTest, Errors)
{
    EXPECT_THROW(ev.evaluate("exp(t^{-2*e(t0,0)})"), not_in_image);
    EXPECT_EQ(show("exp(t^{-e(t0,0)})"), "t^{-e(t0,-1)} (exact)");
    EXPECT_THROW(ev.evaluate("log(2)"), non_monic_residue);
    EXPECT_THROW(ev.evaluate("log(-1)"), domain_violation);
    EXPECT_THROW(ev.evaluate("foo(1)"), parse_error);
    EXPECT_THROW(ev.evaluate("e(zz,0)"), parse_error);
    EXPECT_THROW(ev.evaluate("vG(1)"), parse_error);
    EXPECT_THROW(ev.evaluate("1 +"), parse_error);
}

TEST(EvaluatorInterval, ResidueLog)
{
    const Universe u = universe(1);
    const ResidueLog mid{ResidueLog::Mode::interval, Rational(1, 1000)};
    const Evaluator ev(u, make_components(LogCrossSection(u), mid), PrecisionPolicy(4));
    const EvalValue v = ev.evaluate("log(2)");
    EXPECT_EQ(eval_kind(v), "interval-log");
    const auto &il = std::get<IntervalLog<GroupElement>>(v);
    EXPECT_TRUE(il.series_part.stored_zero());
    EXPECT_LE(il.constant.lo.get_d(), 0.6931472);
    EXPECT_GE(il.constant.hi.get_d(), 0.6931471);
}

RunConfig small_config()
{
    RunConfig cfg;
    cfg.tau = parse_tau("2");
    cfg.samples = 20;
    cfg.depth = 1;
    return cfg;
}

TEST(Reports, Deterministic)
{
    const RunConfig cfg = small_config();
    EXPECT_EQ(render_json(build_report(cfg)), render_json(build_report(cfg)));
    EXPECT_EQ(render_json(rank_report(cfg)), render_json(rank_report(cfg)));
    EXPECT_EQ(render_json(tower_report(cfg)), render_json(tower_report(cfg)));
    const std::vector<std::string> names{"strong", "cor14", "descent"};
    EXPECT_EQ(render_json(check_report(names, cfg)), render_json(check_report(names, cfg)));
    EXPECT_EQ(render_text(check_report(names, cfg)), render_text(check_report(names, cfg)));
}

TEST(Reports, SeedChangesSamples)
{
    RunConfig a = small_config();
    RunConfig b = small_config();
    b.seed = 2;
    EXPECT_NE(render_json(tower_report(a)), render_json(tower_report(b)));
}

TEST(Reports, JsonShape)
{
    const RunConfig cfg = small_config();
    const nlohmann::json j = nlohmann::json::parse(render_json(check_report({"cor14"}, cfg)));
    EXPECT_EQ(j["command"], "check");
    EXPECT_EQ(j["config"]["samples"], 20);
    ASSERT_EQ(j["suites"].size(), 1u);
    EXPECT_EQ(j["suites"][0]["name"], "cor14");
    EXPECT_EQ(j["suites"][0]["verdict"], "pass");
    EXPECT_EQ(j["result"], "pass");

    const nlohmann::json b = nlohmann::json::parse(render_json(build_report(cfg)));
    EXPECT_EQ(b["data"]["quotient_size"], 2);
    EXPECT_EQ(b["result"], "pass");
}

TEST(Suites, NamesAndUnknown)
{
    const std::vector<std::string> names = suite_names();
    EXPECT_EQ(names.size(), 13u);
    EXPECT_THROW(run_suite("nope", small_config()), domain_violation);
    RunConfig bad = small_config();
    bad.depth = 9;
    EXPECT_THROW(run_suite("strong", bad), depth_exceeded);
}

TEST(Suites, AllPassOnSmallConfig)
{
    const RunConfig cfg = small_config();
    for (const std::string &name : suite_names()) {
        const SuiteResult r = run_suite(name, cfg);
        EXPECT_TRUE(r.passed) << name << ": " << r.witness;
    }
}

TEST(Suites, SeedDerivation)
{
    EXPECT_EQ(suite_seed(1, "strong"), suite_seed(1, "strong"));
    EXPECT_NE(suite_seed(1, "strong"), suite_seed(1, "t1"));
    EXPECT_NE(suite_seed(1, "strong"), suite_seed(2, "strong"));
}

} // namespace
