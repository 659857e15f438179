#include "qfano/calibration.hpp"
#include "qfano/catalog.hpp"
#include "qfano/json_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace qfano;

namespace {

// Every canonical b for which some unit u and ordering carry (1,-1,b) onto
// the given weights mod r.
std::set<int> types_by_search(int r, std::vector<int> w)
{
    for (auto& x : w)
        x = static_cast<int>(mod_floor(x, r));
    std::sort(w.begin(), w.end());
    std::set<int> out;
    for (int b = 1; b < r; ++b) {
        if (std::gcd(b, r) != 1)
            continue;
        for (int u = 1; u < r; ++u) {
            if (std::gcd(u, r) != 1)
                continue;
            std::vector<int> img{u % r, (r - u) % r, (u * b) % r};
            std::sort(img.begin(), img.end());
            if (img == w)
                out.insert(std::min(b, r - b));
        }
    }
    return out;
}

std::vector<CatalogEntry> import_text(const std::string& s)
{
    std::istringstream in(s);
    return import_catalog(in);
}

int error_line(const std::string& s)
{
    try {
        (void)import_text(s);
    } catch (const CatalogError& e) {
        return e.line();
    }
    return -1;
}

SearchReport small_report()
{
    SearchConfig cfg;
    cfg.q_min = 7;
    cfg.q_max = 7;
    return enumerate_candidates(cfg);
}

const FanoCandidate k41478{7, Basket({make_point(2, 1), make_point(3, 1), make_point(13, 6)}), Rational(1, 78)};

} // namespace

TEST_CASE("triple normalization examples")
{
    CHECK(types_by_search(13, {1, 3, 10}) == std::set<int>{4});
    CHECK(parse_basket_text("1/13(1,3,10)") == Basket({make_point(13, 4)}));
    CHECK(parse_basket_text("1/2(1,1,1)") == Basket({make_point(2, 1)}));
    CHECK_THROWS_AS(parse_basket_text("1/5(1,1,2)"), InputError);
    CHECK_THROWS_AS(parse_basket_text("1/6(2,4,1)"), InputError);  // not coprime
    CHECK_THROWS_AS(parse_basket_text("1/1(1,1,1)"), InputError);
    CHECK_THROWS_AS(parse_basket_text("1/7(1,6)"), InputError);
    CHECK_THROWS_AS(parse_basket_text("1/7(1,6,2"), InputError);
    CHECK_THROWS_AS(parse_basket_text("(2,x)"), InputError);
    CHECK_THROWS_AS(parse_basket_text("(4:2)"), InputError);
}

TEST_CASE("triple normalization agrees with the search over units and orderings")
{
    std::mt19937 rng(20261019);
    for (int r = 2; r <= kMaxIndex; ++r)
        for (int b = 1; b < r; ++b) {
            if (std::gcd(b, r) != 1)
                continue;
            std::uniform_int_distribution<int> unit(1, r - 1);
            int u = unit(rng);
            while (std::gcd(u, r) != 1)
                u = unit(rng);
            std::vector<int> w{u, r - u, static_cast<int>((static_cast<long>(u) * b) % r)};
            std::shuffle(w.begin(), w.end(), rng);
            const QuotientPoint p = normalize_triple(r, w[0], w[1], w[2]);
            CHECK(p == make_point(r, b));
            CHECK(types_by_search(r, w) == std::set<int>{p.b});
        }
    // non-terminal triples are rejected exactly when the search finds nothing
    for (int r = 2; r <= 12; ++r)
        for (int x = 1; x < r; ++x)
            for (int y = x; y < r; ++y)
                for (int z = y; z < r; ++z) {
                    const bool coprime = std::gcd(x, r) == 1 && std::gcd(y, r) == 1 && std::gcd(z, r) == 1;
                    if (!coprime)
                        continue;
                    const auto expected = types_by_search(r, {x, y, z});
                    if (expected.empty())
                        CHECK_THROWS_AS(normalize_triple(r, x, y, z), InputError);
                    else
                        CHECK(std::set<int>{normalize_triple(r, x, y, z).b} == expected);
                }
}

TEST_CASE("index-list form and defaulted weights")
{
    const ParsedBasket a = parse_basket_spec("(2,3,13)");
    CHECK(a.defaulted == std::vector<int>{13});
    CHECK_FALSE(a.weights_explicit());
    CHECK(a.matches(k41478.basket));
    CHECK(a.matches(Basket({make_point(2, 1), make_point(3, 1), make_point(13, 4)})));
    CHECK_FALSE(a.matches(Basket({make_point(2, 1), make_point(13, 6)})));
    CHECK_FALSE(a.matches(Basket({make_point(2, 1), make_point(2, 1), make_point(13, 6)})));

    const ParsedBasket b = parse_basket_spec("(2,3,13:6)");
    CHECK(b.weights_explicit());
    CHECK(b.basket == k41478.basket);
    CHECK(b.matches(k41478.basket));
    CHECK_FALSE(b.matches(Basket({make_point(2, 1), make_point(3, 1), make_point(13, 4)})));

    const ParsedBasket c = parse_basket_spec("(13,13:1)");
    CHECK(c.matches(Basket({make_point(13, 1), make_point(13, 5)})));
    CHECK_FALSE(c.matches(Basket({make_point(13, 5), make_point(13, 5)})));

    CHECK(parse_basket_text("()").empty());
    CHECK(parse_basket_text("").empty());
    CHECK(parse_basket_text("2, 4 ; 6") == Basket({make_point(2, 1), make_point(4, 1), make_point(6, 1)}));
}

TEST_CASE("parse, render, parse is the identity on canonical baskets")
{
    const auto types = all_point_types();
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, types.size() - 1);
    std::uniform_int_distribution<int> len(0, 6);
    for (int i = 0; i < 500; ++i) {
        Basket b;
        for (int k = len(rng); k > 0; --k)
            b.add(types[pick(rng)]);
        const Basket once = parse_basket_text(render(b));
        CHECK(once == b);
        CHECK(parse_basket_text(render(once)) == once);
        CHECK(render(once) == render(b));
    }
}

TEST_CASE("catalog import")
{
    const auto rows = import_text("id,q,a3,basket\n41478,7,1/78,\"1/2(1,1,1);1/3(1,1,2);1/13(1,3,10)\"\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].id == "41478");
    CHECK(rows[0].q == 7);
    CHECK(rows[0].a3 == Rational(1, 78));
    CHECK(rows[0].basket.basket.indices() == std::vector<int>{2, 3, 13});
    CHECK(rows[0].line == 2);

    CHECK(import_text("").empty());
    CHECK(import_text("id,q,a3,basket\n").empty());
    CHECK(import_text("\n\nid,q,a3,basket,pins\n\n").empty());

    const auto pinned = import_text("ID,Q,A3,Basket,Pins\r\nx,7,1/78,\"(2,3,13:6)\",6=2;1=1\r\ny,7,1/78,(2;3;13:6)\n");
    REQUIRE(pinned.size() == 2);
    CHECK(pinned[0].h0_pins == std::map<int, std::int64_t>{{1, 1}, {6, 2}});
    CHECK(pinned[1].h0_pins.empty());
    CHECK(pinned[1].basket.basket == k41478.basket);

    CHECK(error_line("id,q,a3,basket\n1,7,1/0,(2)\n") == 2);
    CHECK(error_line("id,q,a3,basket\n1,7,1/78,(2)\n\n2,7,x/2,(2)\n") == 4);
    CHECK(error_line("id,q,a3,basket\n1,7,-1/78,(2)\n") == 2);
    CHECK(error_line("id,q,a3,basket\n1,7,1/78,1/5(1,1,2)\n") == 2);
    CHECK(error_line("id,q,a3,basket\n1,7,1/78\n") == 2);
    CHECK(error_line("id,q,basket\n") == 1);
    CHECK(error_line("id,q,a3,basket,pins\n1,7,1/78,(2),6\n") == 2);
    CHECK(error_line("id,q,a3,basket,pins\n1,7,1/78,(2),6=1;6=2\n") == 2);
    CHECK(error_line("id,q,a3,basket\n1,7,1/78,(2)\n1,7,1/78,(3)\n") == 3);
    CHECK(error_line("id,q,a3,basket\n1,7,1/78,\"(2)\n") == 2);
    CHECK_THROWS_AS(import_catalog_file("/nonexistent/catalog.csv"), InputError);
}

TEST_CASE("catalog diff")
{
    const SearchReport ours = small_report();
    REQUIRE(std::any_of(ours.candidates.begin(), ours.candidates.end(), [](const HilbertProfile& p) { return p.candidate == k41478; }));

    // identical inputs: one row per candidate, exact weights
    std::string csv = "id,q,a3,basket\n";
    for (std::size_t i = 0; i < ours.candidates.size(); ++i) {
        const auto& c = ours.candidates[i].candidate;
        csv += "c" + std::to_string(i) + "," + std::to_string(c.q) + "," + c.a3.to_fraction_string() + ",\"" + render(c.basket) + "\"\n";
    }
    const CatalogDiff same = diff_catalogs(ours, import_text(csv));
    CHECK(same.empty());
    CHECK(same.matched.size() == ours.candidates.size());

    // ours missing No. 41478
    SearchReport missing = ours;
    std::erase_if(missing.candidates, [](const HilbertProfile& p) { return p.candidate == k41478; });
    const auto row = import_text("id,q,a3,basket,pins\n41478,7,1/78,\"(2,3,13)\",6=1\n");
    const CatalogDiff gone = diff_catalogs(missing, row);
    CHECK(gone.theirs_only == std::vector<std::string>{"41478"});

    // a pin of 1 for h0(6A) is a negative control: the computed value is 2
    const CatalogDiff pin = diff_catalogs(ours, row);
    CHECK(pin.theirs_only.empty());
    REQUIRE(pin.pin_mismatches.size() == 1);
    CHECK(pin.pin_mismatches[0] == PinMismatch{"41478", candidate_id(k41478), 6, 1, 2});
    CHECK(pin.ours_only.size() == ours.candidates.size() - 1);

    const CatalogDiff ok = diff_catalogs(ours, import_text("id,q,a3,basket,pins\n41478,7,1/78,\"(2,3,13)\",6=2;5=1;30=" +
                                                          std::to_string(h0(k41478, 30)) + "\n"));
    CHECK(ok.pin_mismatches.empty());
}

TEST_CASE("search report JSON round trip")
{
    SearchConfig cfg;
    cfg.q_min = 3;
    cfg.q_max = 19;
    cfg.df_filter = 3;
    cfg.degree_cap = Rational(1440, 2);
    SearchReport r = enumerate_candidates(cfg);
    r.assertions = {{"sample", true, "detail"}, {"other", false, ""}};
    const Json j = report_to_json(r);
    const SearchReport back = report_from_json(Json::parse(dump(j)));
    CHECK(back.candidates == r.candidates);
    CHECK(back.distinct_hilbert_series_count == r.distinct_hilbert_series_count);
    CHECK(back.assertions == r.assertions);
    CHECK(back.provenance == r.provenance);
    CHECK(back.config.describe() == r.config.describe());
    CHECK(dump(report_to_json(back)) == dump(j));

    const Json& c0 = j["candidates"][0];
    CHECK(c0["a3"].get<std::string>().find('/') != std::string::npos);
    CHECK(c0["sigma"].get<std::string>().find('/') != std::string::npos);
    CHECK(c0["valid"].get<bool>());
    for (const char* key : {"id", "q", "a3", "basket", "sigma", "h0", "df", "valid", "provenance"})
        CHECK(c0.contains(key));

    Json bad = j;
    bad["candidates"][0]["id"] = "q3::1/1";
    CHECK_THROWS_AS(report_from_json(bad), InputError);
    bad = j;
    bad["candidates"][0]["sigma"] = "1/2";
    CHECK_THROWS_AS(report_from_json(bad), InputError);
    bad = j;
    bad["candidate_count"] = 3;
    CHECK_THROWS_AS(report_from_json(bad), InputError);
    bad = j;
    bad["config"]["degree_cap"] = "1/0";
    CHECK_THROWS_AS(report_from_json(bad), InputError);
    bad = j;
    bad.erase("schema");
    CHECK_THROWS_AS(report_from_json(bad), InputError);
}

TEST_CASE("scenario files")
{
    const Json tf = Json::parse(R"j({"q": 4, "basket": "(11:2)", "a3": "2/11", "b": 3, "disabled_rules": ["R8"]})j");
    const LinkScenario s = scenario_from_json(tf);
    CHECK(s.q == 4);
    CHECK(s.b == 3);
    CHECK(s.basket == Basket({make_point(11, 2)}));
    CHECK(s.disabled_rules == std::set<std::string>{"R8"});
    CHECK(apply_rules(s).outcome == OutcomeKind::Contradiction);

    const Json table = Json::parse(R"j({"name": "t", "q": 5, "n": 2, "df": 3, "b": 4,
        "classes": [{"k": 1, "tau": 0, "lo": 1, "hi": 1}, {"k": 1, "tau": 1, "lo": 0, "hi": 0},
                    {"k": 2, "tau": 0, "lo": 1, "hi": 1}, {"k": 2, "tau": 1, "lo": 1, "hi": 1},
                    {"k": 3, "tau": 0, "lo": 2, "hi": 2}, {"k": 3, "tau": 1, "lo": 2, "hi": 2}]})j");
    const LinkScenario t = scenario_from_json(table);
    CHECK(t.n == 2);
    CHECK(t.classes.h0({2, 1}).exact());
    CHECK(t.name == "t");

    CHECK_THROWS_AS(scenario_from_json(Json::parse(R"j({"q": 4, "b": 3})j")), Json::exception);
    CHECK_THROWS_AS(scenario_from_json(Json::parse(R"j({"q": 4, "basket": "(11:2)", "a3": "2/11", "b": 3, "target": "x"})j")), InputError);
    CHECK_THROWS_AS(scenario_from_json(Json::parse(R"j({"q": 4, "basket": "(11:2)", "a3": "3/11", "b": 3})j")), InputError);
    CHECK_THROWS_AS(scenario_from_json(Json::parse(R"j({"q": 5, "df": 3, "b": 4, "classes": [{"k": 1, "lo": 2, "hi": 1}]})j")), InputError);
}

TEST_CASE("calibration helper")
{
    // the generating-function recursion as a second count
    auto recursion = [](const std::vector<int>& w, int top) {
        std::vector<std::int64_t> c(static_cast<std::size_t>(top) + 1, 0);
        c[0] = 1;
        for (int x : w)
            for (int d = x; d <= top; ++d)
                c[static_cast<std::size_t>(d)] += c[static_cast<std::size_t>(d - x)];
        return c;
    };
    for (const auto& s : calibration_spaces())
        CHECK(monomial_counts(s.weights, 40) == recursion(s.weights, 40));
    CHECK(monomial_counts({1, 1, 1, 1}, 3) == std::vector<std::int64_t>{1, 4, 10, 20});
    CHECK(calibration_spaces()[3].candidate() == FanoCandidate{11, Basket({make_point(2, 1), make_point(3, 1), make_point(5, 2)}), Rational(1, 30)});
    for (const auto& row : run_calibration(24))
        CHECK_MESSAGE(row.passed(), row.space);
    CHECK_THROWS_AS(monomial_counts({1, 0}, 3), std::invalid_argument);
}
