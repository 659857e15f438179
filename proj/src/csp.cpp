#include "qfano/csp.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace qfano::csp {

int Problem::add_variable(std::string name, std::vector<Rational> domain)
{
    if (variable_index(name) >= 0)
        throw std::invalid_argument("duplicate variable " + name);
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    variables_.push_back({std::move(name), std::move(domain)});
    return static_cast<int>(variables_.size()) - 1;
}

int Problem::add_constraint(std::string rule, std::string description, std::vector<int> scope, Predicate holds)
{
    std::set<int> seen;
    for (int v : scope) {
        if (v < 0 || v >= static_cast<int>(variables_.size()))
            throw std::invalid_argument("constraint " + rule + " refers to an unknown variable");
        if (!seen.insert(v).second)
            throw std::invalid_argument("constraint " + rule + " repeats a variable");
    }
    constraints_.push_back({std::move(rule), std::move(description), std::move(scope), std::move(holds)});
    return static_cast<int>(constraints_.size()) - 1;
}

int Problem::variable_index(const std::string& name) const
{
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name == name)
            return static_cast<int>(i);
    return -1;
}

std::string event_kind_name(EventKind k)
{
    switch (k) {
    case EventKind::Prune:
        return "prune";
    case EventKind::Branch:
        return "branch";
    case EventKind::Fail:
        return "fail";
    case EventKind::Solution:
        return "solution";
    }
    return "?";
}

namespace {

using Alive = std::vector<std::vector<char>>;

std::vector<std::size_t> alive_indices(const Alive& alive, int var)
{
    std::vector<std::size_t> out;
    const auto& a = alive[static_cast<std::size_t>(var)];
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            out.push_back(i);
    return out;
}

std::size_t alive_count(const Alive& alive, int var)
{
    const auto& a = alive[static_cast<std::size_t>(var)];
    return static_cast<std::size_t>(std::count(a.begin(), a.end(), 1));
}

struct Support {
    bool any = false;
    bool skipped = false;                          // product too large
    std::vector<std::vector<char>> supported;      // per scope position, per domain index
};

// Enumerates every live tuple of the scope once and records which values
// occur in a satisfying tuple.
Support compute_support(const Problem& p, const Constraint& c, const Alive& alive, std::uint64_t limit)
{
    Support s;
    const std::size_t n = c.scope.size();
    std::vector<std::vector<std::size_t>> idx(n);
    std::uint64_t product = 1;
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = alive_indices(alive, c.scope[i]);
        if (idx[i].empty())
            return s;
        product *= idx[i].size();
        if (product > limit) {
            s.skipped = true;
            return s;
        }
    }
    s.supported.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        s.supported[i].assign(p.variables()[static_cast<std::size_t>(c.scope[i])].domain.size(), 0);
    std::size_t unsupported = 0;
    for (std::size_t i = 0; i < n; ++i)
        unsupported += idx[i].size();

    std::vector<std::size_t> pos(n, 0);
    Tuple t(n);
    while (true) {
        for (std::size_t i = 0; i < n; ++i)
            t[i] = p.variables()[static_cast<std::size_t>(c.scope[i])].domain[idx[i][pos[i]]];
        if (c.holds(t)) {
            s.any = true;
            for (std::size_t i = 0; i < n; ++i) {
                auto& flag = s.supported[i][idx[i][pos[i]]];
                if (!flag) {
                    flag = 1;
                    --unsupported;
                }
            }
            if (unsupported == 0)
                break;
        }
        std::size_t k = 0;
        while (k < n && ++pos[k] == idx[k].size())
            pos[k++] = 0;
        if (k == n)
            break;
    }
    return s;
}

bool all_singletons(const Alive& alive)
{
    for (std::size_t v = 0; v < alive.size(); ++v)
        if (alive_count(alive, static_cast<int>(v)) != 1)
            return false;
    return true;
}

Tuple assignment(const Problem& p, const Alive& alive)
{
    Tuple out;
    for (std::size_t v = 0; v < alive.size(); ++v)
        out.push_back(p.variables()[v].domain[alive_indices(alive, static_cast<int>(v)).front()]);
    return out;
}

// index of a constraint violated by a complete assignment, or -1
int violated(const Problem& p, const Tuple& full)
{
    for (std::size_t ci = 0; ci < p.constraints().size(); ++ci) {
        const auto& c = p.constraints()[ci];
        Tuple t;
        for (int v : c.scope)
            t.push_back(full[static_cast<std::size_t>(v)]);
        if (!c.holds(t))
            return static_cast<int>(ci);
    }
    return -1;
}

Alive initial_alive(const Problem& p)
{
    Alive a;
    for (const auto& v : p.variables())
        a.emplace_back(v.domain.size(), 1);
    return a;
}

class Solver {
public:
    Solver(const Problem& p, const Limits& l) : p_(p), limits_(l)
    {
        touching_.resize(p.variables().size());
        for (std::size_t ci = 0; ci < p.constraints().size(); ++ci)
            for (int v : p.constraints()[ci].scope)
                touching_[static_cast<std::size_t>(v)].push_back(static_cast<int>(ci));
    }

    Result run()
    {
        Alive root = initial_alive(p_);
        for (std::size_t v = 0; v < root.size(); ++v)
            if (root[v].empty()) {
                // an empty initial domain is reported through any constraint on it
                const int ci = touching_[v].empty() ? -1 : touching_[v].front();
                push({EventKind::Fail, ci, static_cast<int>(v), {}, 0});
                return std::move(result_);
            }
        node(root, 0);
        return std::move(result_);
    }

private:
    void push(Event e)
    {
        if (result_.events.size() >= limits_.max_events)
            throw SolverLimitExceeded("event log limit exceeded");
        result_.events.push_back(std::move(e));
    }

    bool propagate(Alive& alive, int depth)
    {
        std::deque<int> queue;
        std::vector<char> queued(p_.constraints().size(), 1);
        for (std::size_t ci = 0; ci < p_.constraints().size(); ++ci)
            queue.push_back(static_cast<int>(ci));
        while (!queue.empty()) {
            const int ci = queue.front();
            queue.pop_front();
            queued[static_cast<std::size_t>(ci)] = 0;
            const auto& c = p_.constraints()[static_cast<std::size_t>(ci)];
            const Support s = compute_support(p_, c, alive, limits_.max_revision_product);
            if (s.skipped)
                continue;
            if (!s.any) {
                push({EventKind::Fail, ci, -1, {}, depth});
                return false;
            }
            for (std::size_t i = 0; i < c.scope.size(); ++i) {
                const int var = c.scope[i];
                auto& a = alive[static_cast<std::size_t>(var)];
                std::vector<Rational> removed;
                for (std::size_t j = 0; j < a.size(); ++j)
                    if (a[j] && !s.supported[i][j]) {
                        a[j] = 0;
                        removed.push_back(p_.variables()[static_cast<std::size_t>(var)].domain[j]);
                    }
                if (removed.empty())
                    continue;
                push({EventKind::Prune, ci, var, std::move(removed), depth});
                for (int other : touching_[static_cast<std::size_t>(var)])
                    if (other != ci && !queued[static_cast<std::size_t>(other)]) {
                        queued[static_cast<std::size_t>(other)] = 1;
                        queue.push_back(other);
                    }
            }
        }
        return true;
    }

    void node(Alive& alive, int depth)
    {
        if (!propagate(alive, depth))
            return;
        if (all_singletons(alive)) {
            Tuple full = assignment(p_, alive);
            const int bad = violated(p_, full);
            if (bad >= 0) {
                push({EventKind::Fail, bad, -1, {}, depth});
                return;
            }
            push({EventKind::Solution, -1, -1, full, depth});
            result_.solutions.push_back(std::move(full));
            if (result_.solutions.size() > limits_.max_solutions)
                throw SolverLimitExceeded("solution limit exceeded");
            return;
        }
        int best = -1;
        std::size_t best_size = 0;
        for (std::size_t v = 0; v < alive.size(); ++v) {
            const std::size_t n = alive_count(alive, static_cast<int>(v));
            if (n > 1 && (best < 0 || n < best_size)) {
                best = static_cast<int>(v);
                best_size = n;
            }
        }
        for (std::size_t j : alive_indices(alive, best)) {
            Alive child = alive;
            auto& a = child[static_cast<std::size_t>(best)];
            std::fill(a.begin(), a.end(), 0);
            a[j] = 1;
            push({EventKind::Branch, -1, best, {p_.variables()[static_cast<std::size_t>(best)].domain[j]}, depth + 1});
            node(child, depth + 1);
        }
    }

    const Problem& p_;
    Limits limits_;
    std::vector<std::vector<int>> touching_;
    Result result_;
};

std::size_t domain_index(const Variable& v, const Rational& x)
{
    const auto it = std::lower_bound(v.domain.begin(), v.domain.end(), x);
    if (it == v.domain.end() || *it != x)
        return v.domain.size();
    return static_cast<std::size_t>(it - v.domain.begin());
}

} // namespace

Result solve(const Problem& problem, const Limits& limits)
{
    return Solver(problem, limits).run();
}

ReplayReport replay(const Problem& problem, const std::vector<Event>& events)
{
    struct Node {
        Alive alive;
        int branch_var = -1;
        std::set<Rational> tried;
        bool closed = false;  // failed or solved
    };
    ReplayReport rep;
    auto fail = [&](std::size_t at, const std::string& why) {
        rep.ok = false;
        rep.detail = "event " + std::to_string(at) + ": " + why;
        return rep;
    };
    auto leave = [&](const Node& n) -> std::string {
        if (n.branch_var >= 0) {
            for (std::size_t j : alive_indices(n.alive, n.branch_var))
                if (!n.tried.count(problem.variables()[static_cast<std::size_t>(n.branch_var)].domain[j]))
                    return "branching on " + problem.variables()[static_cast<std::size_t>(n.branch_var)].name + " skipped a value";
            return "";
        }
        return n.closed ? "" : "search node left open";
    };
    auto constraint_of = [&](int ci) -> const Constraint* {
        if (ci < 0 || ci >= static_cast<int>(problem.constraints().size()))
            return nullptr;
        return &problem.constraints()[static_cast<std::size_t>(ci)];
    };

    std::vector<Node> stack(1);
    stack[0].alive = initial_alive(problem);
    for (std::size_t at = 0; at < events.size(); ++at) {
        const Event& e = events[at];
        if (e.kind == EventKind::Branch) {
            if (e.depth < 1 || e.depth > static_cast<int>(stack.size()))
                return fail(at, "branch depth out of range");
            while (static_cast<int>(stack.size()) > e.depth) {
                const std::string why = leave(stack.back());
                if (!why.empty())
                    return fail(at, why);
                stack.pop_back();
            }
            Node& parent = stack.back();
            if (parent.closed)
                return fail(at, "branch below a closed node");
            if (parent.branch_var >= 0 && parent.branch_var != e.variable)
                return fail(at, "branch variable changed within a node");
            if (e.variable < 0 || e.variable >= static_cast<int>(problem.variables().size()) || e.values.size() != 1)
                return fail(at, "malformed branch");
            const auto& var = problem.variables()[static_cast<std::size_t>(e.variable)];
            const std::size_t j = domain_index(var, e.values[0]);
            if (j == var.domain.size() || !parent.alive[static_cast<std::size_t>(e.variable)][j])
                return fail(at, "branch value not in the live domain of " + var.name);
            parent.branch_var = e.variable;
            parent.tried.insert(e.values[0]);
            Node child;
            child.alive = parent.alive;
            auto& a = child.alive[static_cast<std::size_t>(e.variable)];
            std::fill(a.begin(), a.end(), 0);
            a[j] = 1;
            stack.push_back(std::move(child));
            continue;
        }
        if (e.depth != static_cast<int>(stack.size()) - 1)
            return fail(at, "event depth does not match the search stack");
        Node& cur = stack.back();
        if (cur.closed || cur.branch_var >= 0)
            return fail(at, "event on a finished node");
        if (e.kind == EventKind::Prune) {
            const Constraint* c = constraint_of(e.constraint);
            if (!c)
                return fail(at, "prune without a constraint");
            const auto pos = std::find(c->scope.begin(), c->scope.end(), e.variable);
            if (pos == c->scope.end())
                return fail(at, "pruned variable outside the scope of " + c->rule);
            const Support s = compute_support(problem, *c, cur.alive, UINT64_MAX);
            const auto i = static_cast<std::size_t>(pos - c->scope.begin());
            const auto& var = problem.variables()[static_cast<std::size_t>(e.variable)];
            for (const auto& x : e.values) {
                const std::size_t j = domain_index(var, x);
                if (j == var.domain.size() || !cur.alive[static_cast<std::size_t>(e.variable)][j])
                    return fail(at, "pruned value " + x.to_string() + " not live for " + var.name);
                if (s.any && s.supported[i][j])
                    return fail(at, c->rule + " still supports " + var.name + " = " + x.to_string());
                cur.alive[static_cast<std::size_t>(e.variable)][j] = 0;
            }
        } else if (e.kind == EventKind::Fail) {
            const Constraint* c = constraint_of(e.constraint);
            bool empty = false;
            for (std::size_t v = 0; v < cur.alive.size(); ++v)
                empty = empty || alive_count(cur.alive, static_cast<int>(v)) == 0;
            if (!empty) {
                if (!c)
                    return fail(at, "failure without a witness");
                if (compute_support(problem, *c, cur.alive, UINT64_MAX).any)
                    return fail(at, c->rule + " is still satisfiable");
            }
            cur.closed = true;
        } else {
            if (!all_singletons(cur.alive))
                return fail(at, "solution recorded before every domain is a singleton");
            const Tuple full = assignment(problem, cur.alive);
            if (full != e.values)
                return fail(at, "recorded solution differs from the node");
            if (violated(problem, full) >= 0)
                return fail(at, "recorded solution violates a constraint");
            rep.solutions.push_back(full);
            cur.closed = true;
        }
    }
    while (!stack.empty()) {
        const std::string why = leave(stack.back());
        if (!why.empty())
            return fail(events.size(), why);
        stack.pop_back();
    }
    return rep;
}

} // namespace qfano::csp
