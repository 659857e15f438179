#pragma once

#include "qfano/rational.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Finite-domain constraint solver over exact rationals. Every domain
// reduction and every search decision is logged as an event so that a run
// can be re-checked step by step (see replay).
namespace qfano::csp {

class SolverLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Tuple = std::vector<Rational>;
using Predicate = std::function<bool(const Tuple&)>;

struct Variable {
    std::string name;
    std::vector<Rational> domain;  // sorted, distinct
};

struct Constraint {
    std::string rule;
    std::string description;
    std::vector<int> scope;
    Predicate holds;
};

class Problem {
public:
    int add_variable(std::string name, std::vector<Rational> domain);
    int add_constraint(std::string rule, std::string description, std::vector<int> scope, Predicate holds);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    int variable_index(const std::string& name) const;  // -1 if absent
    bool has_variable(const std::string& name) const { return variable_index(name) >= 0; }

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
};

enum class EventKind {
    Prune,     // constraint removed unsupported values from variable
    Branch,    // variable fixed to a value at a new search depth
    Fail,      // constraint has no support left at the current node
    Solution,  // all domains singletons and every constraint holds
};

struct Event {
    EventKind kind = EventKind::Prune;
    int constraint = -1;
    int variable = -1;
    std::vector<Rational> values;
    int depth = 0;
};

struct Limits {
    /// Constraints whose scope product exceeds this are only checked at
    /// leaves, never used for pruning.
    std::uint64_t max_revision_product = 4'000'000;
    std::size_t max_solutions = 200'000;
    std::size_t max_events = 2'000'000;
};

struct Result {
    std::vector<Event> events;
    std::vector<Tuple> solutions;  // one value per variable, in variable order
};

Result solve(const Problem& problem, const Limits& limits = {});

struct ReplayReport {
    bool ok = true;
    std::string detail;
    std::vector<Tuple> solutions;
};

/// Re-executes a recorded event list against the problem: every pruned value
/// must lack support at the point it was removed, every failure must be a
/// genuine wipeout, every solution must satisfy all constraints, and every
/// branching node must cover its whole domain.
ReplayReport replay(const Problem& problem, const std::vector<Event>& events);

std::string event_kind_name(EventKind k);

} // namespace qfano::csp
