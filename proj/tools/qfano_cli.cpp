#include "qfano/calibration.hpp"
#include "qfano/catalog.hpp"
#include "qfano/json_io.hpp"
#include "qfano/link.hpp"
#include "qfano/search.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>

using namespace qfano;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct Common {
    std::string format = "table";
    bool json() const { return format == "json"; }
};

void emit(const Common& o, const Json& j, const std::string& table)
{
    if (o.json())
        std::cout << dump(j);
    else
        std::cout << table;
}

std::string pad(std::string s, std::size_t w)
{
    if (s.size() < w)
        s.append(w - s.size(), ' ');
    return s;
}

std::string join(const std::vector<std::int64_t>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

/// A bare index is only accepted where it names a single quotient type.
Basket basket_for_candidate(const std::string& text)
{
    const ParsedBasket pb = parse_basket_spec(text);
    if (!pb.weights_explicit())
        throw InputError("index " + std::to_string(pb.defaulted.front()) + " has several quotient types; write it as " +
                         std::to_string(pb.defaulted.front()) + ":b");
    return pb.basket;
}

// ---------------------------------------------------------------------------

struct HilbertArgs {
    int q = 0;
    std::string basket;
    std::string a3;
    int horizon = kDefaultHorizon;
};

int run_hilbert(const Common& o, const HilbertArgs& a)
{
    FanoCandidate c;
    c.q = a.q;
    c.basket = basket_for_candidate(a.basket);
    try {
        c.a3 = Rational::parse(a.a3);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--a3: ") + e.what());
    }
    if (a.horizon < 0)
        throw InputError("--horizon must be non-negative");
    try {
        check_candidate_shape(c);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    const bool integral = integrality_valid(c, a.horizon);
    const bool vanishing = vanishing_valid(c);
    const bool kawamata = kawamata_bound_valid(c);
    const bool valid = integral && vanishing && kawamata;
    Json j{{"id", candidate_id(c)},
           {"q", c.q},
           {"a3", rational_to_json(c.a3)},
           {"basket", basket_to_json(c.basket)},
           {"sigma", rational_to_json(sigma(c.basket))},
           {"checks", {{"integrality", integral}, {"vanishing", vanishing}, {"kawamata_bound", kawamata}}},
           {"valid", valid}};
    std::ostringstream t;
    t << "candidate " << candidate_id(c) << "\n";
    t << "basket    " << render(c.basket) << "  sigma " << sigma(c.basket) << "\n";
    t << "checks    integrality=" << integral << " vanishing=" << vanishing << " kawamata_bound=" << kawamata << "\n";
    if (integral) {
        const HilbertProfile p = hilbert_profile(c, a.horizon);
        j["h0"] = p.h0;
        j["df"] = p.df;
        t << "h0        " << join(p.h0) << "\n";
        t << "df        " << p.df << "\n";
    } else {
        Json chi = Json::array();
        t << "chi       ";
        for (int n = 0; n <= std::max(a.horizon, c.q - 1); ++n) {
            const Rational x = euler_char(c, n);
            chi.push_back(rational_to_json(x));
            t << (n ? " " : "") << x;
        }
        t << "\n";
        j["chi"] = chi;
    }
    t << "valid     " << (valid ? "yes" : "no") << "\n";
    emit(o, j, t.str());
    return valid ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

struct SearchArgs {
    int q_min = 2;
    int q_max = 19;
    std::optional<int> df;
    std::string degree_cap = "72";
    int horizon = kDefaultHorizon;
    std::string policy = "solved";
    bool no_kawamata = false;
    bool no_vanishing = false;
    bool kc2_nonstrict = false;
    unsigned threads = 0;
    std::string out;
};

SearchConfig config_of(const SearchArgs& a)
{
    SearchConfig c;
    c.q_min = a.q_min;
    c.q_max = a.q_max;
    c.df_filter = a.df;
    try {
        c.degree_cap = Rational::parse(a.degree_cap);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--degree-cap: ") + e.what());
    }
    c.horizon = a.horizon;
    c.policy = a.policy == "grid" ? DegreePolicy::SupersetGrid : DegreePolicy::Solved;
    c.require_kawamata_bound = !a.no_kawamata;
    c.require_vanishing = !a.no_vanishing;
    c.strict_kc2 = !a.kc2_nonstrict;
    c.threads = a.threads;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return c;
}

std::string report_table(const SearchReport& r)
{
    std::ostringstream t;
    t << "search " << r.config.describe() << "\n";
    t << "candidates " << r.candidates.size() << "  distinct Hilbert series " << r.distinct_hilbert_series_count
      << "  df>=2 " << applicability_count(r) << "\n";
    for (const auto& p : r.candidates)
        t << "  " << pad(candidate_id(p.candidate), 40) << " df=" << p.df << "\n";
    return t.str();
}

int run_search(const Common& o, const SearchArgs& a)
{
    const SearchReport r = enumerate_candidates(config_of(a));
    const Json j = report_to_json(r);
    if (!a.out.empty()) {
        write_text_file(a.out, dump(j));
        std::ostringstream t;
        t << "search " << r.config.describe() << "\n";
        t << "candidates " << r.candidates.size() << "  distinct Hilbert series " << r.distinct_hilbert_series_count << "\n";
        t << "wrote " << a.out << "\n";
        emit(o,
             Json{{"out", a.out},
                  {"candidate_count", r.candidates.size()},
                  {"distinct_hilbert_series_count", r.distinct_hilbert_series_count}},
             t.str());
    } else {
        emit(o, j, report_table(r));
    }
    return kExitOk;
}

SearchReport report_or_search(const std::string& path, const SearchConfig& fallback)
{
    if (!path.empty())
        return report_from_json(load_json_file(path));
    return enumerate_candidates(fallback);
}

// ---------------------------------------------------------------------------

int run_check_props(const Common& o, const std::string& in)
{
    SearchConfig df3;
    df3.q_min = 3;
    df3.q_max = 19;
    df3.df_filter = 3;
    const SearchReport r = report_or_search(in, df3);
    std::vector<AssertionRecord> recs{recheck_validity(r)};
    for (auto& x : check_prop_search1(r))
        recs.push_back(std::move(x));
    const auto hits = check_pencil_pattern(r);
    std::string hit_text;
    for (const auto& h : hits)
        hit_text += (hit_text.empty() ? "" : "; ") + h.candidate_id + " k=" + std::to_string(h.k);
    recs.push_back({"pencil pattern absent", hits.empty(), hits.empty() ? "no hits" : hit_text});
    bool ok = true;
    Json arr = Json::array();
    std::ostringstream t;
    for (const auto& x : recs) {
        ok = ok && x.passed;
        arr.push_back({{"name", x.name}, {"passed", x.passed}, {"detail", x.detail}});
        t << (x.passed ? "PASS " : "FAIL ") << x.name << ": " << x.detail << "\n";
    }
    emit(o, Json{{"assertions", arr}, {"passed", ok}}, t.str());
    return ok ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

struct LinkArgs {
    std::string which = "qds";
    std::string scenario;
    bool events = false;
};

std::string trace_table(const RuleTrace& t, const std::string& indent)
{
    std::ostringstream s;
    s << indent << t.scenario << ": " << t.outcome_text() << "  (" << t.events.size() << " events, " << t.solutions.size() << " solutions)\n";
    for (const auto& e : t.entries)
        s << indent << "  [" << e.rule << "] " << (e.bindings.empty() ? "" : e.bindings + ": ") << e.fact << "\n";
    return s.str();
}

int run_link(const Common& o, const LinkArgs& a)
{
    bool replay_ok = true;
    auto check = [&](const LinkScenario& s, const RuleTrace& t, Json& j) {
        const auto rep = replay_trace(s, t);
        j["replay"] = rep.ok ? "ok" : rep.detail;
        replay_ok = replay_ok && rep.ok;
        return rep.ok;
    };
    if (a.which == "qds") {
        SearchConfig cfg;
        cfg.q_min = 3;
        cfg.q_max = 19;
        cfg.df_filter = 3;
        const SearchReport rep = enumerate_candidates(cfg);
        std::vector<LinkCase> cases = torsion_free_cases(rep);
        for (auto& c : torsion_fixture_cases())
            cases.push_back(std::move(c));
        std::vector<CaseResult> results;
        for (const auto& c : cases)
            results.push_back(run_case(c));
        resolve_reductions(results);
        Json arr = Json::array();
        std::ostringstream t;
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            Json j = case_result_to_json(r, a.events);
            t << r.name << ": " << outcome_name(r.outcome) << (r.condition.empty() ? "" : "(" + r.condition + ")");
            if (r.resolved != r.outcome)
                t << " -> " << outcome_name(r.resolved);
            t << "\n";
            for (std::size_t k = 0; k < r.traces.size(); ++k) {
                check(cases[i].branches[k], r.traces[k], j["branches"][k]);
                t << trace_table(r.traces[k], "  ");
            }
            for (const auto& line : r.resolution)
                t << "  chain: " << line << "\n";
            arr.push_back(j);
        }
        t << "replay " << (replay_ok ? "ok" : "FAILED") << "\n";
        emit(o, Json{{"cases", arr}, {"replay_ok", replay_ok}}, t.str());
    } else if (a.which == "41478") {
        const LinkScenario s = scenario_41478();
        const RuleTrace tr = run_case_41478();
        Json j = trace_to_json(tr, a.events);
        // replay covers the solve; the appended probe entries are not events
        RuleTrace solve = apply_rules(s);
        check(s, solve, j);
        emit(o, j, trace_table(tr, "") + "replay " + (replay_ok ? "ok" : "FAILED") + "\n");
    } else if (a.which == "file") {
        if (a.scenario.empty())
            throw InputError("--case file needs --scenario PATH");
        const LinkScenario s = scenario_from_json(load_json_file(a.scenario));
        RuleTrace tr;
        try {
            tr = apply_rules(s);
        } catch (const LinkConfigError& e) {
            throw InputError(e.what());
        }
        Json j = trace_to_json(tr, a.events);
        check(s, tr, j);
        emit(o, j, trace_table(tr, "") + "replay " + (replay_ok ? "ok" : "FAILED") + "\n");
    } else {
        throw InputError("--case must be qds, 41478 or file");
    }
    return replay_ok ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

int run_calibrate(const Common& o, int top)
{
    if (top < 0)
        throw InputError("--top must be non-negative");
    const auto rows = run_calibration(top);
    bool ok = true;
    Json arr = Json::array();
    std::ostringstream t;
    for (const auto& r : rows) {
        ok = ok && r.passed();
        arr.push_back({{"space", r.space}, {"candidate", r.candidate_id}, {"checked", r.checked}, {"first_mismatch", r.first_mismatch}, {"passed", r.passed()}});
        t << (r.passed() ? "PASS " : "FAIL ") << pad(r.space, 12) << " " << pad(r.candidate_id, 28) << " n=0.." << top;
        if (!r.passed())
            t << " first mismatch at n=" << r.first_mismatch;
        t << "\n";
    }
    emit(o, Json{{"spaces", arr}, {"passed", ok}}, t.str());
    return ok ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

int run_catalog_import(const Common& o, const std::string& path)
{
    const auto entries = import_catalog_file(path);
    Json arr = Json::array();
    std::ostringstream t;
    t << entries.size() << " entries\n";
    for (const auto& e : entries) {
        arr.push_back(catalog_entry_to_json(e));
        t << "  " << pad(e.id, 10) << " q=" << e.q << " a3=" << e.a3 << " basket=" << (e.basket.weights_explicit() ? render(e.basket.basket) : e.basket.basket.index_string())
          << (e.h0_pins.empty() ? "" : " pins=" + std::to_string(e.h0_pins.size())) << "\n";
    }
    emit(o, Json{{"entries", arr}, {"count", entries.size()}}, t.str());
    return kExitOk;
}

int run_catalog_diff(const Common& o, const std::string& path, const std::string& report, const SearchArgs& search)
{
    const auto entries = import_catalog_file(path);
    const SearchReport ours = report_or_search(report, config_of(search));
    const CatalogDiff d = diff_catalogs(ours, entries);
    std::ostringstream t;
    t << "matched " << d.matched.size() << "  ours-only " << d.ours_only.size() << "  theirs-only " << d.theirs_only.size() << "  pin mismatches "
      << d.pin_mismatches.size() << "\n";
    for (const auto& id : d.theirs_only)
        t << "  theirs-only " << id << "\n";
    for (const auto& m : d.pin_mismatches)
        t << "  pin " << m.entry_id << " (" << m.candidate_id << ") h0(" << m.n << "A): pinned " << m.pinned << ", computed " << m.computed << "\n";
    for (const auto& id : d.ours_only)
        t << "  ours-only " << id << "\n";
    emit(o, catalog_diff_to_json(d), t.str());
    return d.empty() ? kExitOk : kExitFailed;
}

void add_search_flags(CLI::App* c, SearchArgs& a)
{
    c->add_option("--q-min", a.q_min, "smallest index")->capture_default_str();
    c->add_option("--q-max", a.q_max, "largest index")->capture_default_str();
    c->add_option("--df", a.df, "keep only candidates with this df");
    c->add_option("--degree-cap", a.degree_cap, "upper bound for q^3 A^3")->capture_default_str();
    c->add_option("--horizon", a.horizon, "h0 table length")->capture_default_str();
    c->add_option("--policy", a.policy, "degree policy")->check(CLI::IsMember({"solved", "grid"}))->capture_default_str();
    c->add_flag("--no-kawamata", a.no_kawamata, "drop the Kawamata-type degree bound");
    c->add_flag("--no-vanishing", a.no_vanishing, "drop the vanishing check");
    c->add_flag("--kc2-nonstrict", a.kc2_nonstrict, "allow (-K).c2 = 0");
    c->add_option("--threads", a.threads, "worker threads (0: hardware)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical Q-Fano candidate atlas"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--format", common.format, "output format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();

    HilbertArgs hil;
    auto* hilbert = app.add_subcommand("hilbert", "h0 table, df and validity of one candidate");
    hilbert->add_option("--q", hil.q, "Fano index")->required();
    hilbert->add_option("--basket", hil.basket, "basket, e.g. \"(2,3,13:6)\" or \"1/2(1,1,1);1/13(1,12,6)\"")->required();
    hilbert->add_option("--a3", hil.a3, "A^3 as p/q")->required();
    hilbert->add_option("--horizon", hil.horizon, "h0 table length")->capture_default_str();

    SearchArgs sea;
    auto* search = app.add_subcommand("search", "enumerate candidates");
    add_search_flags(search, sea);
    search->add_option("--out", sea.out, "write the JSON report here");

    std::string props_in;
    auto* props = app.add_subcommand("check-props", "proposition assertions over a df = 3 report");
    props->add_option("--in", props_in, "report JSON (default: fresh df = 3 search)");

    LinkArgs lk;
    auto* link = app.add_subcommand("link", "run link scenarios");
    link->add_option("--case", lk.which, "qds, 41478 or file")->check(CLI::IsMember({"qds", "41478", "file"}))->capture_default_str();
    link->add_option("--scenario", lk.scenario, "scenario JSON for --case file");
    link->add_flag("--events", lk.events, "include the raw event log in JSON output");

    int cal_top = kDefaultHorizon;
    auto* calibrate = app.add_subcommand("calibrate", "h0 against monomial counts on weighted projective spaces");
    calibrate->add_option("--top", cal_top, "largest degree checked")->capture_default_str();

    auto* catalog = app.add_subcommand("catalog", "external catalog import and diff");
    catalog->require_subcommand(1);
    std::string cat_path, cat_report;
    SearchArgs cat_search;
    cat_search.q_min = 3;
    auto* cimport = catalog->add_subcommand("import", "parse and validate a catalog CSV");
    cimport->add_option("file", cat_path, "CSV file")->required();
    auto* cdiff = catalog->add_subcommand("diff", "compare a catalog CSV with a search");
    cdiff->add_option("file", cat_path, "CSV file")->required();
    cdiff->add_option("--report", cat_report, "report JSON (default: run a search)");
    add_search_flags(cdiff, cat_search);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*hilbert)
            return run_hilbert(common, hil);
        if (*search)
            return run_search(common, sea);
        if (*props)
            return run_check_props(common, props_in);
        if (*link)
            return run_link(common, lk);
        if (*calibrate)
            return run_calibrate(common, cal_top);
        if (*cimport)
            return run_catalog_import(common, cat_path);
        if (*cdiff)
            return run_catalog_diff(common, cat_path, cat_report, cat_search);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const BasketError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitInput;
}
