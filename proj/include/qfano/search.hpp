#pragma once

#include "qfano/orbifold_rr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qfano {

/// How the finite set of A^3 values is produced for each (q, basket).
enum class DegreePolicy {
    /// q >= 3: the single value forced by chi(-A) = 0.
    /// q = 2: the residue class forced by integrality of chi(A), stepped by 1.
    Solved,
    /// Every m/D with 0 < q^3 m/D <= degree_cap, D a provable multiple of
    /// the true denominator; integrality then prunes.
    SupersetGrid,
};

struct SearchConfig {
    int q_min = 2;
    int q_max = 19;
    /// Upper bound for q^3 A^3.
    Rational degree_cap{72};
    DegreePolicy policy = DegreePolicy::Solved;
    /// SupersetGrid only: override the grid denominator.
    std::optional<std::int64_t> grid_denominator;
    int horizon = kDefaultHorizon;
    std::optional<int> df_filter;
    bool strict_kc2 = true;
    bool require_vanishing = true;
    bool require_kawamata_bound = true;
    /// Restrict baskets to these point types (empty: all).
    std::vector<QuotientPoint> allowed_points;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
    std::string describe() const;
};

/// Degree cap, the enabled obstructions and integrality; the search keeps
/// exactly the candidates passing this.
bool passes_filters(const FanoCandidate& c, const SearchConfig& cfg);

struct AssertionRecord {
    std::string name;
    bool passed = true;
    std::string detail;

    friend bool operator==(const AssertionRecord&, const AssertionRecord&) = default;
};

struct SearchReport {
    SearchConfig config;
    std::vector<HilbertProfile> candidates;
    int distinct_hilbert_series_count = 0;
    std::vector<AssertionRecord> assertions;
    std::string provenance;
};

SearchReport enumerate_candidates(const SearchConfig& config);

/// Number of equivalence classes of candidates with identical Hilbert series.
int count_distinct_hilbert_series(const std::vector<HilbertProfile>& profiles);

/// Re-runs every validity predicate on every candidate.
AssertionRecord recheck_validity(const SearchReport& report);

/// Sub-assertions (i)-(iv) for the df = 3 list; the summary record comes
/// first, one record per sub-assertion follows.
std::vector<AssertionRecord> check_prop_search1(const SearchReport& report);

struct PencilHit {
    std::string candidate_id;
    int k = 0;
    std::string provenance;

    friend bool operator==(const PencilHit&, const PencilHit&) = default;
};

/// Candidates with some k, 2k < q, h0(kA) = 2 and h0(2kA) = 3.
std::vector<PencilHit> check_pencil_pattern(const SearchReport& report);

/// Candidates with df >= 2.
int applicability_count(const SearchReport& report);
/// Alternative reading: 2 <= df <= 3.
int applicability_count_bounded(const SearchReport& report);

enum class ConfigToggle { KawamataBound, StrictKc2, DegreeCapTimesTen };

std::string toggle_name(ConfigToggle t);
SearchConfig apply_toggle(SearchConfig config, ConfigToggle t);

struct ConstraintDiff {
    std::string toggle;
    std::size_t base_count = 0;
    std::size_t toggled_count = 0;
    std::vector<std::string> only_in_base;
    std::vector<std::string> only_in_toggled;
};

/// Candidates present or absent when a single constraint is flipped.
ConstraintDiff constraint_diff(const SearchReport& base, ConfigToggle toggle);

} // namespace qfano
