#include "doctest.h"
#include "qfano/search.hpp"

#include <set>

using namespace qfano;

namespace {

SearchConfig range(int lo, int hi)
{
    SearchConfig c;
    c.q_min = lo;
    c.q_max = hi;
    return c;
}

std::set<FanoCandidate> candidate_set(const SearchReport& r)
{
    std::set<FanoCandidate> s;
    for (const auto& p : r.candidates)
        s.insert(p.candidate);
    return s;
}

} // namespace

TEST_CASE("config validation")
{
    CHECK_THROWS_AS(range(1, 5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(range(5, 4).validate(), std::invalid_argument);
    auto c = range(3, 5);
    c.degree_cap = Rational(0);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = range(3, 5);
    c.require_vanishing = false;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.policy = DegreePolicy::SupersetGrid;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("high index candidates")
{
    const auto r = enumerate_candidates(range(12, 19));
    std::vector<std::string> ids;
    for (const auto& p : r.candidates)
        ids.push_back(candidate_id(p.candidate));
    // P(1,3,4,5), P(2,3,5,7), P(3,4,5,7) and one non-toric basket at q = 13
    CHECK(ids == std::vector<std::string>{"q13:2-1,3-1,3-1,5-2,7-2:1/210", "q13:3-1,4-1,5-2:1/60", "q17:2-1,3-1,5-1,7-2:1/210",
                                          "q19:3-1,4-1,5-2,7-3:1/420"});
}

TEST_CASE("the df = 3 list for q >= 3")
{
    auto cfg = range(3, 19);
    cfg.df_filter = 3;
    const auto r = enumerate_candidates(cfg);
    CHECK(r.candidates.size() == 30);
    CHECK(r.distinct_hilbert_series_count == 30);
    const auto recs = check_prop_search1(r);
    REQUIRE(recs.size() == 5);
    for (const auto& rec : recs) {
        CAPTURE(rec.name);
        CAPTURE(rec.detail);
        CHECK(rec.passed);
    }
    CHECK(recs[0].detail == "q values {3,4,5,7}");
    std::vector<std::string> three;
    for (const auto& p : r.candidates)
        if (p.candidate.q == 4 && p.h0[2] == 3)
            three.push_back(candidate_id(p.candidate));
    CHECK(three == std::vector<std::string>{"q4:11-2:2/11"});
    CHECK(applicability_count(r) == 30);
    CHECK(recheck_validity(r).passed);
}

TEST_CASE("negative control for assertion (i)")
{
    SearchReport r;
    HilbertProfile p;
    p.candidate = FanoCandidate{4, Basket({{9, 2}, {9, 4}}), Rational(1, 9)};
    p.h0 = {1, 1, 2, 4, 7};
    p.df = 3;
    r.candidates.push_back(p);
    const auto recs = check_prop_search1(r);
    CHECK_FALSE(recs[0].passed);
    CHECK_FALSE(recs[1].passed);
    CHECK(recs[1].detail == "first violation: q4:9-2,9-4:1/9");
    CHECK(recs[4].passed);
}

TEST_CASE("pencil pattern")
{
    const auto full = enumerate_candidates(range(3, 19));
    CHECK(check_pencil_pattern(full).empty());
    CHECK(check_pencil_pattern(SearchReport{}).empty());

    // diagnostic sweep: bound off and cap raised tenfold
    auto cfg = range(3, 19);
    cfg.require_kawamata_bound = false;
    cfg.degree_cap = Rational(720);
    const auto relaxed = enumerate_candidates(cfg);
    CHECK(relaxed.candidates.size() == 2134);
    CHECK(check_pencil_pattern(relaxed).empty());

    // synthetic hit keeps its provenance
    SearchReport synth;
    synth.provenance = "synthetic";
    HilbertProfile p;
    p.candidate = FanoCandidate{5, Basket{}, Rational(1)};
    p.h0 = {1, 2, 3, 4, 5};
    synth.candidates.push_back(p);
    const auto hits = check_pencil_pattern(synth);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].k == 1);
    CHECK(hits[0].provenance == "synthetic");
}

TEST_CASE("tiny instance recovers No. 41478 on the superset grid")
{
    auto cfg = range(7, 7);
    cfg.policy = DegreePolicy::SupersetGrid;
    cfg.grid_denominator = 78;
    cfg.allowed_points = {{2, 1}, {3, 1}};
    for (int b = 1; b <= 6; ++b)
        cfg.allowed_points.push_back({13, b});
    const auto r = enumerate_candidates(cfg);
    const auto s = candidate_set(r);
    CHECK(s.count(FanoCandidate{7, Basket({{2, 1}, {3, 1}, {13, 6}}), Rational(1, 78)}) == 1);
}

TEST_CASE("superset grid and solved lattice agree")
{
    auto agree = [](SearchConfig cfg) {
        const auto solved = enumerate_candidates(cfg);
        cfg.policy = DegreePolicy::SupersetGrid;
        const auto grid = enumerate_candidates(cfg);
        CHECK(!solved.candidates.empty());
        CHECK(candidate_set(solved) == candidate_set(grid));
    };
    agree(range(4, 4));
    agree(range(5, 7));
    auto low = range(2, 3);
    low.allowed_points = {{2, 1}, {3, 1}, {5, 1}, {5, 2}, {7, 1}, {7, 2}, {7, 3}};
    agree(low);
}

TEST_CASE("partitioning does not change the result")
{
    auto cfg = range(3, 7);
    cfg.threads = 1;
    const auto one = enumerate_candidates(cfg);
    cfg.threads = 3;
    const auto three = enumerate_candidates(cfg);
    REQUIRE(one.candidates.size() == three.candidates.size());
    for (std::size_t i = 0; i < one.candidates.size(); ++i)
        CHECK(one.candidates[i] == three.candidates[i]);
}

TEST_CASE("counts shrink as constraints tighten")
{
    auto loose = range(3, 8);
    loose.require_kawamata_bound = false;
    auto mid = range(3, 8);
    auto tight = range(3, 8);
    tight.degree_cap = Rational(10);
    const auto a = enumerate_candidates(loose).candidates.size();
    const auto b = enumerate_candidates(mid).candidates.size();
    const auto c = enumerate_candidates(tight).candidates.size();
    CHECK(a >= b);
    CHECK(b >= c);
    CHECK(c > 0);
}

TEST_CASE("constraint diff names what a toggle adds")
{
    const auto base = enumerate_candidates(range(9, 11));
    const auto d = constraint_diff(base, ConfigToggle::KawamataBound);
    CHECK(d.toggle == "kawamata-bound");
    CHECK(d.base_count == base.candidates.size());
    CHECK(d.only_in_base.empty());
    CHECK(d.toggled_count == d.base_count + d.only_in_toggled.size());
    const auto cap = constraint_diff(base, ConfigToggle::DegreeCapTimesTen);
    CHECK(cap.only_in_base.empty());
    CHECK(cap.only_in_toggled.empty());
}

TEST_CASE("full counts at the default cap and with the cap lifted")
{
    auto cfg = range(3, 19);
    const auto capped = enumerate_candidates(cfg);
    CHECK(capped.candidates.size() == 468);
    CHECK(applicability_count(capped) == 309);

    const auto diff = constraint_diff(capped, ConfigToggle::DegreeCapTimesTen);
    CHECK(diff.only_in_base.empty());
    CHECK(diff.only_in_toggled ==
          std::vector<std::string>{"q4:5-1:6/5", "q5:2-1,6-1:2/3", "q6:5-2,7-1:12/35", "q7:3-1,9-2:2/9"});

    cfg.degree_cap = Rational(720);
    const auto lifted = enumerate_candidates(cfg);
    CHECK(lifted.candidates.size() == 472);
    CHECK(lifted.distinct_hilbert_series_count == 472);
    CHECK(applicability_count(lifted) == 313);
    CHECK(applicability_count_bounded(lifted) == 80);

    auto two = range(2, 2);
    const auto q2 = enumerate_candidates(two);
    CHECK(q2.candidates.size() == 1492);
    CHECK(applicability_count(q2) == 382);
    CHECK(applicability_count_bounded(q2) == 271);
    two.degree_cap = Rational(720);
    CHECK(enumerate_candidates(two).candidates.size() == 1492);
}
