#ifndef HAHNEXP_REPORT_HPP
#define HAHNEXP_REPORT_HPP

// Reports of the command-line driver: a key-value tree rendered either as
// indented text or as JSON. Reports carry no timing, so identical
// (config, seed) pairs give identical bytes.

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "contraction.hpp"
#include "exp_log.hpp"
#include "group.hpp"
#include "rank.hpp"
#include "suites.hpp"
#include "tower.hpp"

namespace hahnexp
{

using ReportTree = nlohmann::ordered_json;

struct Report {
    Report() = default;
    Report(std::string cmd, RunConfig cfg) : command(std::move(cmd)), config(std::move(cfg)) {}

    std::string command;
    RunConfig config;
    ReportTree data = ReportTree::object();
    std::vector<SuiteResult> suites;
    bool ok = true;
};

inline ReportTree config_tree(const RunConfig &cfg)
{
    ReportTree t = ReportTree::object();
    t["tau"] = cfg.tau;
    t["depth"] = cfg.depth;
    t["max_depth"] = cfg.max_depth;
    t["taylor_order"] = cfg.taylor_order;
    t["window"] = std::to_string(cfg.window.lo) + ".." + std::to_string(cfg.window.hi);
    t["samples"] = cfg.samples;
    t["seed"] = cfg.seed;
    t["mode"] = to_string(cfg.mode);
    t["interval_width"] = to_string(cfg.interval_width);
    t["witness_bound"] = cfg.witness_bound;
    return t;
}

inline ReportTree suite_tree(const SuiteResult &r)
{
    ReportTree t = ReportTree::object();
    t["name"] = r.name;
    t["verdict"] = r.passed ? "pass" : "fail";
    t["checked"] = r.checked;
    if (!r.passed) {
        t["witness"] = r.witness;
    }
    ReportTree d = ReportTree::object();
    for (const auto &[k, v] : r.details) {
        d[k] = v;
    }
    if (!d.empty()) {
        t["details"] = d;
    }
    return t;
}

inline ReportTree report_tree(const Report &rep)
{
    ReportTree t = ReportTree::object();
    t["command"] = rep.command;
    t["config"] = config_tree(rep.config);
    if (!rep.data.empty()) {
        t["data"] = rep.data;
    }
    if (!rep.suites.empty()) {
        ReportTree s = ReportTree::array();
        for (const SuiteResult &r : rep.suites) {
            s.push_back(suite_tree(r));
        }
        t["suites"] = s;
    }
    t["result"] = rep.ok ? "pass" : "fail";
    return t;
}

inline std::string render_json(const Report &rep)
{
    return report_tree(rep).dump(2) + "\n";
}

namespace detail
{

inline void render_node(std::string &out, const ReportTree &node, const std::string &indent)
{
    if (node.is_object()) {
        for (const auto &[key, value] : node.items()) {
            if (value.is_structured() && !value.empty()) {
                out += indent + key + ":\n";
                render_node(out, value, indent + "  ");
            } else {
                out += indent + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
            }
        }
    } else if (node.is_array()) {
        for (const auto &value : node) {
            if (value.is_structured() && !value.empty()) {
                out += indent + "-\n";
                render_node(out, value, indent + "  ");
            } else {
                out += indent + "- " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
            }
        }
    } else {
        out += indent + (node.is_string() ? node.get<std::string>() : node.dump()) + "\n";
    }
}

} // namespace detail

inline std::string render_text(const Report &rep)
{
    std::string out;
    detail::render_node(out, report_tree(rep), "");
    return out;
}

// --- command bodies ---------------------------------------------------------------

// Gamma, zeta, the quotient order type and the cross-section at a few points.
inline Report build_report(const RunConfig &cfg)
{
    cfg.validate();
    Report rep{"build", cfg};
    const Universe u = cfg.universe();
    const ZetaMap zeta(u);
    const LogCrossSection h(u);
    const auto comps = make_components(h, cfg.residue_log());
    rep.data["gamma"] = to_string(*u) + " x Z, lexicographic";
    rep.data["zeta"] = "(t,n) -> (t,n+1)";
    const OrderTypeSpec q = zeta_quotient_order_type(zeta);
    rep.data["quotient_order_type"] = to_string(q);
    rep.data["quotient_size"] = q.size();
    const OrderTypeSpec per = principal_exponential_rank(u);
    rep.data["principal_exponential_rank"] = to_string(per);
    bool increasing = true;
    bool induced = true;
    for (const IndexPoint &p : window_points(u, cfg.window)) {
        increasing = increasing && zeta(p) > p;
        induced = induced && zeta_from_chi(p, u, comps) == zeta(p);
    }
    rep.data["zeta_increasing_on_window"] = increasing;
    rep.data["log_induces_zeta_on_window"] = induced;
    ReportTree samples = ReportTree::array();
    for (std::size_t t = 0; t < u->size(); ++t) {
        const GroupElement g = GroupElement::basis(u, {t, 0});
        ReportTree row = ReportTree::object();
        row["g"] = to_string(g);
        row["h(g)"] = terms_to_string(h(g));
        row["log(t^{-g})"] = to_string(full_log(Series<GroupElement>::monomial(-g), comps, PrecisionPolicy(cfg.taylor_order)));
        samples.push_back(row);
    }
    rep.data["cross_section"] = samples;
    const StageTower tower(u, cfg.depth, cfg.max_depth, cfg.residue_log());
    rep.data["tower_depth"] = tower.depth();
    rep.ok = increasing && induced && same_order_type(per, *u);
    return rep;
}

inline Report rank_report(const RunConfig &cfg)
{
    cfg.validate();
    Report rep{"rank", cfg};
    const Universe u = cfg.universe();
    const auto comps = make_components(LogCrossSection(u), cfg.residue_log());
    const PrecisionPolicy policy(cfg.taylor_order);

    ReportTree er = ReportTree::array();
    for (const QuotientSegment &q : exponential_rank(u)) {
        ReportTree row = ReportTree::object();
        row["quotient_segment"] = to_string(q);
        row["final_segment"] = to_string(epsilon_preimage(q));
        row["principal"] = q.minimum().has_value();
        er.push_back(row);
    }
    rep.data["exponential_rank"] = er;
    rep.data["principal_exponential_rank"] = to_string(principal_exponential_rank(u));

    const PrincipalRankSummary pr = principal_rank(u, cfg.window);
    ReportTree prt = ReportTree::object();
    prt["order_type"] = pr.order_type;
    prt["window_principal_segments"] = pr.principal.size();
    prt["whole_group_principal"] = pr.all_is_principal;
    prt["segments_are_unions_of_principal"] = pr.unions_hold;
    rep.data["principal_rank"] = prt;

    ReportTree segs = ReportTree::array();
    bool ok = pr.unions_hold && !pr.all_is_principal;
    for (const FinalSegment &s : enumerate_segments(u, cfg.window)) {
        const CompatibilityVerdicts v = compatibility_verdicts(s, cfg.window, comps, policy);
        ReportTree row = ReportTree::object();
        row["segment"] = to_string(s);
        row["compatible"] = v.f;
        row["c"] = v.c;
        row["e"] = v.e;
        row["f"] = v.f;
        ok = ok && v.agree();
        if (!v.f) {
            const auto w = incompatibility_witness(s, cfg.window, comps, policy);
            if (w && verify_incompatibility_witness(*w, s, comps, policy)) {
                row["witness"] = to_string(*w);
                row["log_witness"] = to_string(full_log(*w, comps, policy));
            } else {
                ok = false;
            }
        }
        segs.push_back(row);
    }
    rep.data["segments"] = segs;
    rep.ok = ok;
    return rep;
}

// Per-stage samples of h_n, v(h_n(g)) > g, and the exp-domain witnesses.
inline Report tower_report(const RunConfig &cfg)
{
    cfg.validate();
    Report rep{"tower", cfg};
    const Universe u = cfg.universe();
    const StageTower tower(u, cfg.depth, cfg.max_depth, cfg.residue_log());
    const PrecisionPolicy policy(cfg.taylor_order);
    Sampler rng(u, suite_seed(cfg.seed, "tower"), cfg.window);
    ReportTree stages = ReportTree::array();
    bool ok = true;
    for (unsigned n = 0; n <= cfg.depth; ++n) {
        ReportTree row = ReportTree::object();
        row["stage"] = n;
        const StageElement g = sample_negative_stage(rng, n);
        row["g"] = to_string(g);
        row["h(g)"] = terms_to_string(tower.h(n, g));
        const bool c27 = tower.check27(g, n);
        row["v(h(g)) > g"] = c27;
        const Series<StageElement> a = sample_positive_infinite_stage(rng, n);
        row["a"] = to_string(a);
        row["log(a)"] = to_string(tower.log(a, n, policy));
        row["descent"] = tower.descent(a);
        ok = ok && c27;
        if (n > 0) {
            const Series<StageElement> w = tower.exp_domain_witness(n);
            const bool grows = tower.in_exp_domain(w, n) && !tower.in_exp_domain(w, n - 1);
            row["exp_domain_witness"] = to_string(w);
            row["exp_domain_grows"] = grows;
            ok = ok && grows;
        }
        stages.push_back(row);
    }
    rep.data["stages"] = stages;
    rep.ok = ok;
    return rep;
}

inline Report check_report(const std::vector<std::string> &names, const RunConfig &cfg)
{
    cfg.validate();
    Report rep{"check", cfg};
    for (const std::string &name : names) {
        rep.suites.push_back(run_suite(name, cfg));
        rep.ok = rep.ok && rep.suites.back().passed;
    }
    return rep;
}

} // namespace hahnexp

#endif
