#include "qfano/link.hpp"

#include <algorithm>

namespace qfano {

namespace {

Basket indices_basket(const std::vector<int>& rs)
{
    Basket b;
    for (int r : rs)
        b.add(make_point(r, 1));
    return b;
}

LinkScenario fixture_scenario(std::string name, int q, int n, ClassTable t, int b)
{
    LinkScenario s;
    s.name = std::move(name);
    s.q = q;
    s.n = n;
    s.df = 3;
    s.classes = std::move(t);
    s.b = b;
    s.target = LinkTarget::QuarticDoubleSolid;
    return s;
}

void add_fixture(LinkCase& c, const std::string& label, int n, const ClassTable& t, std::optional<Basket> basket = std::nullopt,
                 std::optional<Rational> a3 = std::nullopt)
{
    if (std::find(c.torsion_orders.begin(), c.torsion_orders.end(), n) == c.torsion_orders.end())
        c.torsion_orders.push_back(n);
    for (int b : branch_values(t, c.q, 3)) {
        auto s = fixture_scenario(label + " b=" + std::to_string(b), c.q, n, t, b);
        s.basket = basket;
        s.a3 = a3;
        c.branches.push_back(std::move(s));
    }
}

const H0Range kAtLeastOne{1, std::nullopt};

} // namespace

std::vector<LinkCase> torsion_free_cases(const SearchReport& df3)
{
    std::map<int, LinkCase> by_q;
    for (const auto& p : df3.candidates) {
        if (p.df != 3)
            continue;
        const int q = p.candidate.q;
        auto& c = by_q[q];
        c.name = "torsion-free q=" + std::to_string(q);
        c.q = q;
        c.torsion_orders = {1};
        const ClassTable t = ClassTable::from_candidate(p.candidate, q);
        for (int b : branch_values(t, q, 3))
            c.branches.push_back(torsion_free_scenario(p.candidate, b, LinkTarget::QuarticDoubleSolid));
    }
    std::vector<LinkCase> out;
    for (auto it = by_q.rbegin(); it != by_q.rend(); ++it)
        out.push_back(std::move(it->second));
    return out;
}

std::vector<LinkCase> torsion_fixture_cases()
{
    std::vector<LinkCase> out;
    {
        LinkCase c{"torsion q=5", 5, {}, {}};
        ClassTable t(2, "torsion search table q=5 n=2");
        t.set({1, 0}, H0Range::exactly(1));
        t.set({1, 1}, H0Range::exactly(0));
        t.set({2, 0}, H0Range::exactly(1));
        t.set({2, 1}, H0Range::exactly(1));
        t.set({3, 0}, H0Range::exactly(2));
        t.set({3, 1}, H0Range::exactly(2));
        add_fixture(c, "torsion q=5 n=2", 2, t, indices_basket({4, 4, 12}), Rational(1, 12));
        out.push_back(std::move(c));
    }
    {
        LinkCase c{"torsion q=4", 4, {}, {}};
        ClassTable t2(2, "torsion search table q=4 n=2");
        t2.set({1, 0}, H0Range::exactly(0));
        t2.set({1, 1}, H0Range::exactly(1));
        t2.set({2, 0}, H0Range::exactly(2));
        t2.set({2, 1}, H0Range{1, 2});
        t2.set({3, 0}, H0Range::exactly(4));
        t2.set({3, 1}, H0Range::exactly(4));
        add_fixture(c, "torsion q=4 n=2", 2, t2);
        ClassTable t5(5, "torsion search table q=4 n=5");
        t5.set({1, 0}, H0Range::exactly(0));
        t5.set({2, 0}, H0Range::exactly(2));
        for (int k = 1; k < 5; ++k) {
            t5.set({1, k}, H0Range::exactly(1));
            t5.set({2, k}, H0Range::exactly(2));
        }
        for (int k = 0; k < 5; ++k)
            t5.set({3, k}, H0Range::exactly(4));
        add_fixture(c, "torsion q=4 n=5", 5, t5);
        out.push_back(std::move(c));
    }
    {
        LinkCase c{"torsion q=3", 3, {}, {}};
        // n = 2 splits on dim |2A|: = 3, or < 3 with the recorded basket
        ClassTable a(2, "torsion search table q=3 n=2, dim |2A| = 3");
        a.set({1, 0}, kAtLeastOne);
        a.set({1, 1}, kAtLeastOne);
        a.set({2, 0}, H0Range::exactly(4));
        add_fixture(c, "torsion q=3 n=2 (dim |2A| = 3)", 2, a);
        ClassTable b(2, "torsion search table q=3 n=2, dim |2A| < 3");
        b.set({1, 0}, kAtLeastOne);
        b.set({1, 1}, kAtLeastOne);
        b.set({2, 0}, H0Range{0, 3});
        add_fixture(c, "torsion q=3 n=2 (dim |2A| < 3)", 2, b, indices_basket({2, 4, 14}), Rational(15, 28));
        ClassTable t3(3, "torsion search table q=3 n=3");
        for (int k = 0; k < 3; ++k)
            t3.set({1, k}, kAtLeastOne);
        add_fixture(c, "torsion q=3 n=3", 3, t3);
        out.push_back(std::move(c));
    }
    return out;
}

CaseResult run_case(const LinkCase& c)
{
    CaseResult r;
    r.name = c.name;
    r.q = c.q;
    r.torsion_orders = c.torsion_orders;
    bool any_feasible = false, any_reduces = false;
    for (const auto& s : c.branches) {
        r.traces.push_back(apply_rules(s));
        const auto& t = r.traces.back();
        any_reduces = any_reduces || t.outcome == OutcomeKind::Reduces;
        any_feasible = any_feasible || t.outcome == OutcomeKind::Feasible || t.outcome == OutcomeKind::Forced;
    }
    if (any_feasible)
        r.outcome = OutcomeKind::Feasible;
    else if (any_reduces) {
        r.outcome = OutcomeKind::Reduces;
        r.condition = "q_hat > " + std::to_string(c.q);
    } else {
        r.outcome = OutcomeKind::Contradiction;
    }
    r.resolved = r.outcome;
    return r;
}

void resolve_reductions(std::vector<CaseResult>& results)
{
    std::vector<std::size_t> order(results.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return results[a].q > results[b].q; });
    for (std::size_t i : order) {
        auto& r = results[i];
        r.resolved = r.outcome;
        r.resolution.clear();
        if (r.outcome != OutcomeKind::Reduces)
            continue;
        bool all_contradict = true;
        for (const auto& other : results) {
            if (other.q <= r.q)
                continue;
            r.resolution.push_back(other.name + ": " + outcome_name(other.resolved));
            all_contradict = all_contradict && other.resolved == OutcomeKind::Contradiction;
        }
        if (r.resolution.empty())
            r.resolution.push_back("no registered case has index > " + std::to_string(r.q));
        if (all_contradict)
            r.resolved = OutcomeKind::Contradiction;
    }
}

std::vector<CaseResult> run_qds_registry()
{
    SearchConfig cfg;
    cfg.q_min = 3;
    cfg.q_max = 19;
    cfg.df_filter = 3;
    const SearchReport rep = enumerate_candidates(cfg);
    std::vector<CaseResult> out;
    for (const auto& c : torsion_free_cases(rep))
        out.push_back(run_case(c));
    for (const auto& c : torsion_fixture_cases())
        out.push_back(run_case(c));
    resolve_reductions(out);
    return out;
}

LinkScenario scenario_41478()
{
    const FanoCandidate c{7, Basket({make_point(2, 1), make_point(3, 1), make_point(13, 6)}), Rational(1, 78)};
    LinkScenario s = torsion_free_scenario(c, 6, LinkTarget::AnyBirational);
    s.name = "No. 41478 " + s.name;
    s.disabled_rules = {"R4"};
    return s;
}

RuleTrace run_case_41478()
{
    const LinkScenario s = scenario_41478();
    RuleTrace t = apply_rules(s);
    if (t.outcome != OutcomeKind::Forced)
        return t;
    LinkScenario probe = s;
    probe.disabled_rules.clear();
    const RuleTrace p = apply_rules(probe);
    if (p.outcome == OutcomeKind::Contradiction) {
        t.entries.push_back({"R4", "forced values", "h0(6A) = 2 makes N_6 move, so s_6 >= 1; with it the system has no solution"});
        t.entries.push_back({"NON_BIRATIONAL", "-",
                             "no birational link with q_hat <= 7: the link ends in a non-birational contraction (del Pezzo "
                             "fibration branch)"});
        t.outcome = OutcomeKind::NonBirational;
    }
    return t;
}

} // namespace qfano
