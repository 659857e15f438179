#pragma once

#include "qfano/csp.hpp"
#include "qfano/search.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfano {

/// An assignment of link invariants that no rule admits.
class LinkInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scenario that cannot be turned into finite domains.
class LinkConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Elementary relations

struct DegreeTriple {
    int b = 0;
    int a = 0;
    int d = 0;

    friend auto operator<=>(const DegreeTriple&, const DegreeTriple&) = default;
};

/// Positive (b, a, d) with 2b = q + a d and b <= q - 1, sorted.
std::vector<DegreeTriple> degree_relation_solutions(int q);

/// t in [0, r) with kA = t(-K) in the local class group: t = k q^{-1} mod r.
int local_multiple_t(int q, const QuotientPoint& point, int k);
int local_multiple_t(const FanoCandidate& c, const QuotientPoint& point, int k);

struct ThresholdConstraint {
    int t = 0;
    Rational c_upper;   // c <= 1/t
    Rational beta_per_alpha;  // beta >= t alpha
    std::string text;
};

/// Constraints implied by M ~ -tK near a non-Gorenstein point. Empty for t = 0.
std::vector<ThresholdConstraint> threshold_bounds(int t);

/// k q_hat - q s_k - (q beta_k - k alpha) e. Throws LinkInfeasible when
/// q beta_k - k alpha is not an integer.
Rational eqmain_check(int q, int q_hat, int k, std::int64_t s_k, const Rational& beta_k, const Rational& alpha, std::int64_t e);

/// Discrepancy 1/r of the Kawamata blowup of a cyclic quotient point.
Rational kawamata_alpha(int r);

/// e/d; throws LinkInfeasible when d does not divide e.
int torsion_order(int e, int d);

// ---------------------------------------------------------------------------
// Divisor classes kA + tau T in Z + Z/n and their h0 values

struct DivisorClass {
    int k = 0;
    int tau = 0;

    friend auto operator<=>(const DivisorClass&, const DivisorClass&) = default;
};

/// h0 known up to an interval; hi empty means unbounded (not recorded).
struct H0Range {
    std::int64_t lo = 0;
    std::optional<std::int64_t> hi;

    static H0Range exactly(std::int64_t v) { return {v, v}; }
    bool exact() const { return hi && *hi == lo; }
    bool surely_nonempty() const { return lo >= 1; }
    bool possibly_at_least(std::int64_t v) const { return !hi || *hi >= v; }
    bool possibly(std::int64_t v) const { return lo <= v && possibly_at_least(v); }
    std::string to_string() const;
};

class ClassTable {
public:
    ClassTable() = default;
    ClassTable(int n, std::string source);

    /// Exact table for a torsion-free candidate, k = 0..top.
    static ClassTable from_candidate(const FanoCandidate& c, int top);

    int n() const { return n_; }
    const std::string& source() const { return source_; }
    void set(DivisorClass c, H0Range v);
    /// Unrecorded classes with k >= 1 are unknown; k < 0 and nonzero
    /// numerically trivial classes are empty; the zero class has h0 = 1.
    H0Range h0(DivisorClass c) const;
    DivisorClass normalize(DivisorClass c) const;
    const std::map<DivisorClass, H0Range>& entries() const { return entries_; }

    /// h0 = 1 and no split c = c1 + c2 with both parts possibly effective
    /// (k1, k2 >= 1): the unique member is a prime divisor.
    bool forced_prime(DivisorClass c) const;

private:
    int n_ = 1;
    std::string source_ = "riemann-roch";
    std::map<DivisorClass, H0Range> entries_;
};

// ---------------------------------------------------------------------------
// Scenarios

enum class LinkTarget {
    QuarticDoubleSolid,  // q_hat = 2, half-anticanonical mobile image, s_b = 1
    AnyBirational,       // any Q-Fano with q_hat <= 7
};

struct LinkScenario {
    std::string name;
    int q = 0;
    int n = 1;  // order of the torsion subgroup
    int df = 0;
    ClassTable classes;
    std::optional<Basket> basket;
    std::optional<Rational> a3;
    int b = 0;
    std::vector<int> mobile_torsion;  // admissible torsion parts of M
    LinkTarget target = LinkTarget::QuarticDoubleSolid;
    std::set<std::string> disabled_rules;
    /// Restricts alpha and beta grids to numerators and denominators <= limit
    /// (used to compare with an external grid enumeration).
    std::optional<int> grid_limit;
    /// Scales every bound that is a plain cap rather than a derived
    /// inequality (outcomes must not depend on it).
    int cap_multiplier = 1;

    bool enabled(const std::string& rule) const { return !disabled_rules.count(rule); }
};

/// b < q with h0(bA + tau) possibly equal to df + 1 for some tau.
std::vector<int> branch_values(const ClassTable& classes, int q, int df);

/// Scenario for a torsion-free candidate with mobile system |bA|.
LinkScenario torsion_free_scenario(const FanoCandidate& c, int b, LinkTarget target);

/// All rule ids with a one-line statement.
const std::map<std::string, std::string>& link_rules();

// ---------------------------------------------------------------------------
// Outcomes and traces

enum class OutcomeKind { Contradiction, Forced, Feasible, NonBirational, Reduces };

std::string outcome_name(OutcomeKind k);

struct TraceEntry {
    std::string rule;
    std::string bindings;  // search path at the time of the step
    std::string fact;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

using Assignment = std::map<std::string, Rational>;

struct RuleTrace {
    std::string scenario;
    std::vector<std::string> bounds;
    std::vector<TraceEntry> entries;
    std::vector<csp::Event> events;
    OutcomeKind outcome = OutcomeKind::Feasible;
    Assignment forced;
    std::vector<std::pair<std::string, std::string>> equalities;
    std::vector<Assignment> solutions;
    std::string condition;  // REDUCES only

    bool uses_rule(const std::string& rule) const;
    std::string outcome_text() const;
};

struct LinkProblem {
    csp::Problem problem;
    std::vector<std::string> bounds;
};

/// Variables, finite domains (bounds are derived and logged) and one
/// constraint per rule instance.
LinkProblem build_link_problem(const LinkScenario& s);

/// Exhaustive propagation and search over the rule set.
RuleTrace apply_rules(const LinkScenario& s);

/// Rebuilds the problem and re-checks every recorded step; the replayed
/// solution set and outcome must match the trace.
csp::ReplayReport replay_trace(const LinkScenario& s, const RuleTrace& t);

// ---------------------------------------------------------------------------
// Typed views of a solution

struct LinkSetup {
    int q = 0;
    int b = 0;
    int mobile_torsion = 0;
    Rational alpha;
    std::map<int, Rational> beta;

    Rational c() const;       // alpha / beta_b
    Rational lambda() const;  // q / b
    Rational delta() const;   // alpha (lambda / c - 1)
    /// lambda > c and delta > 0; throws LinkInfeasible otherwise.
    void validate() const;
};

struct LinkSolution {
    int e = 0;
    std::map<int, std::int64_t> s;
    int q_hat = 0;
    std::optional<int> a;
    std::optional<int> d;
    std::optional<int> n;
    std::optional<int> center_index;
    std::map<int, Rational> slack;  // m_k = beta_k - t_k alpha at the center

    /// d | e when d is present; throws LinkInfeasible otherwise.
    void validate() const;
};

LinkSetup setup_of(const LinkScenario& s, const Assignment& a);
LinkSolution solution_of(const LinkScenario& s, const Assignment& a);

// ---------------------------------------------------------------------------
// Cases: a named family of branches, and the chain that resolves reductions

struct LinkCase {
    std::string name;
    int q = 0;
    std::vector<int> torsion_orders;
    std::vector<LinkScenario> branches;
};

struct CaseResult {
    std::string name;
    int q = 0;
    std::vector<int> torsion_orders;
    OutcomeKind outcome = OutcomeKind::Feasible;
    std::string condition;
    OutcomeKind resolved = OutcomeKind::Feasible;
    std::vector<std::string> resolution;
    std::vector<RuleTrace> traces;
};

/// One case per index q of the torsion-free df = 3 list, one branch per
/// candidate and admissible b, target the smooth quartic double solid.
std::vector<LinkCase> torsion_free_cases(const SearchReport& df3);

/// Torsion cases built from recorded h0 fixture tables (never recomputed),
/// one case per index with a branch per torsion order and b.
std::vector<LinkCase> torsion_fixture_cases();

CaseResult run_case(const LinkCase& c);

/// A reduction "q_hat > q0" is resolved to a contradiction when every case
/// of larger index is (recursively) a contradiction.
void resolve_reductions(std::vector<CaseResult>& results);

/// The whole quartic double solid registry: torsion-free cases from a fresh
/// df = 3 search plus the torsion fixtures, reductions resolved.
std::vector<CaseResult> run_qds_registry();

/// Scenario for the q = 7, B = (2,3,13), A^3 = 1/78 candidate with M = |6A|.
LinkScenario scenario_41478();

/// Solves without the non-contraction rule on k = b, reports the forced
/// values, then shows that the birational branch is exhausted.
RuleTrace run_case_41478();

} // namespace qfano
