#include "qfano/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qfano {

namespace {

template <typename T>
T field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw InputError(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
std::optional<T> optional_field(const Json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return field<T>(j, key);
}

} // namespace

Json rational_to_json(const Rational& r) { return r.to_fraction_string(); }

Rational rational_from_json(const Json& j)
{
    try {
        if (j.is_number_integer())
            return Rational(j.get<std::int64_t>());
        if (j.is_string())
            return Rational::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("bad fraction: ") + e.what());
    }
    throw InputError("expected a fraction string, got " + j.dump());
}

Json basket_to_json(const Basket& b)
{
    Json out = Json::array();
    for (const auto& p : b.points())
        out.push_back({{"r", p.r}, {"b", p.b}});
    return out;
}

Basket basket_from_json(const Json& j)
{
    if (j.is_string())
        return parse_basket_text(j.get<std::string>());
    if (!j.is_array())
        throw InputError("basket must be an array of {r, b} or a basket string");
    Basket out;
    for (const auto& p : j) {
        try {
            out.add(make_point(field<int>(p, "r"), field<int>(p, "b")));
        } catch (const BasketError& e) {
            throw InputError(e.what());
        }
    }
    return out;
}

Json candidate_to_json(const HilbertProfile& p, bool valid, const std::string& provenance)
{
    const auto& c = p.candidate;
    return Json{{"id", candidate_id(c)},
                {"q", c.q},
                {"a3", rational_to_json(c.a3)},
                {"basket", basket_to_json(c.basket)},
                {"sigma", rational_to_json(sigma(c.basket))},
                {"h0", p.h0},
                {"df", p.df},
                {"valid", valid},
                {"provenance", provenance}};
}

HilbertProfile candidate_from_json(const Json& j)
{
    HilbertProfile p;
    p.candidate.q = field<int>(j, "q");
    p.candidate.a3 = rational_from_json(j.at("a3"));
    p.candidate.basket = basket_from_json(j.at("basket"));
    p.h0 = field<std::vector<std::int64_t>>(j, "h0");
    p.df = field<int>(j, "df");
    const std::string id = candidate_id(p.candidate);
    if (auto given = optional_field<std::string>(j, "id"); given && *given != id)
        throw InputError("candidate id " + *given + " does not match its fields (" + id + ")");
    if (j.contains("sigma") && rational_from_json(j.at("sigma")) != sigma(p.candidate.basket))
        throw InputError("candidate " + id + ": sigma does not match the basket");
    return p;
}

Json config_to_json(const SearchConfig& c)
{
    Json pts = Json::array();
    for (const auto& p : c.allowed_points)
        pts.push_back({{"r", p.r}, {"b", p.b}});
    return Json{{"q_min", c.q_min},
                {"q_max", c.q_max},
                {"degree_cap", rational_to_json(c.degree_cap)},
                {"policy", c.policy == DegreePolicy::Solved ? "solved" : "grid"},
                {"grid_denominator", c.grid_denominator ? Json(*c.grid_denominator) : Json(nullptr)},
                {"horizon", c.horizon},
                {"df_filter", c.df_filter ? Json(*c.df_filter) : Json(nullptr)},
                {"strict_kc2", c.strict_kc2},
                {"require_vanishing", c.require_vanishing},
                {"require_kawamata_bound", c.require_kawamata_bound},
                {"allowed_points", pts}};
}

SearchConfig config_from_json(const Json& j)
{
    SearchConfig c;
    c.q_min = field<int>(j, "q_min");
    c.q_max = field<int>(j, "q_max");
    c.degree_cap = rational_from_json(j.at("degree_cap"));
    const auto policy = field<std::string>(j, "policy");
    if (policy != "solved" && policy != "grid")
        throw InputError("unknown degree policy '" + policy + "'");
    c.policy = policy == "solved" ? DegreePolicy::Solved : DegreePolicy::SupersetGrid;
    c.grid_denominator = optional_field<std::int64_t>(j, "grid_denominator");
    c.horizon = field<int>(j, "horizon");
    c.df_filter = optional_field<int>(j, "df_filter");
    c.strict_kc2 = field<bool>(j, "strict_kc2");
    c.require_vanishing = field<bool>(j, "require_vanishing");
    c.require_kawamata_bound = field<bool>(j, "require_kawamata_bound");
    for (const auto& p : j.value("allowed_points", Json::array()))
        c.allowed_points.push_back({field<int>(p, "r"), field<int>(p, "b")});
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    return c;
}

Json report_to_json(const SearchReport& r)
{
    Json cands = Json::array();
    for (const auto& p : r.candidates)
        cands.push_back(candidate_to_json(p, passes_filters(p.candidate, r.config), r.provenance));
    Json asserts = Json::array();
    for (const auto& a : r.assertions)
        asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    return Json{{"schema", "qfano.search-report/1"},
                {"config", config_to_json(r.config)},
                {"candidates", cands},
                {"candidate_count", r.candidates.size()},
                {"distinct_hilbert_series_count", r.distinct_hilbert_series_count},
                {"assertions", asserts},
                {"provenance", r.provenance}};
}

SearchReport report_from_json(const Json& j)
{
    if (field<std::string>(j, "schema") != "qfano.search-report/1")
        throw InputError("unsupported report schema");
    SearchReport r;
    r.config = config_from_json(j.at("config"));
    for (const auto& c : field<Json>(j, "candidates"))
        r.candidates.push_back(candidate_from_json(c));
    if (j.contains("candidate_count") && field<std::size_t>(j, "candidate_count") != r.candidates.size())
        throw InputError("candidate_count does not match the candidate list");
    r.distinct_hilbert_series_count = field<int>(j, "distinct_hilbert_series_count");
    for (const auto& a : field<Json>(j, "assertions"))
        r.assertions.push_back({field<std::string>(a, "name"), field<bool>(a, "passed"), field<std::string>(a, "detail")});
    r.provenance = field<std::string>(j, "provenance");
    return r;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path);
    out << text;
    if (!out)
        throw InputError("write failed for " + path);
}

Json trace_to_json(const RuleTrace& t, bool with_events)
{
    Json entries = Json::array();
    for (const auto& e : t.entries)
        entries.push_back({{"rule", e.rule}, {"bindings", e.bindings}, {"fact", e.fact}});
    Json forced = Json::object();
    for (const auto& [k, v] : t.forced)
        forced[k] = rational_to_json(v);
    Json eqs = Json::array();
    for (const auto& [x, y] : t.equalities)
        eqs.push_back({x, y});
    Json out{{"scenario", t.scenario},
             {"outcome", outcome_name(t.outcome)},
             {"outcome_text", t.outcome_text()},
             {"bounds", t.bounds},
             {"entries", entries},
             {"forced", forced},
             {"equalities", eqs},
             {"solution_count", t.solutions.size()},
             {"event_count", t.events.size()}};
    if (!t.condition.empty())
        out["condition"] = t.condition;
    if (with_events) {
        Json ev = Json::array();
        for (const auto& e : t.events) {
            Json vals = Json::array();
            for (const auto& v : e.values)
                vals.push_back(rational_to_json(v));
            ev.push_back({{"kind", csp::event_kind_name(e.kind)},
                          {"constraint", e.constraint},
                          {"variable", e.variable},
                          {"values", vals},
                          {"depth", e.depth}});
        }
        out["events"] = ev;
    }
    return out;
}

Json case_result_to_json(const CaseResult& r, bool with_events)
{
    Json traces = Json::array();
    for (const auto& t : r.traces)
        traces.push_back(trace_to_json(t, with_events));
    Json out{{"name", r.name},
             {"q", r.q},
             {"torsion_orders", r.torsion_orders},
             {"outcome", outcome_name(r.outcome)},
             {"resolved", outcome_name(r.resolved)},
             {"resolution", r.resolution},
             {"branches", traces}};
    if (!r.condition.empty())
        out["condition"] = r.condition;
    return out;
}

Json catalog_diff_to_json(const CatalogDiff& d)
{
    Json matched = Json::array();
    for (const auto& [e, c] : d.matched)
        matched.push_back({{"entry", e}, {"candidate", c}});
    Json pins = Json::array();
    for (const auto& m : d.pin_mismatches)
        pins.push_back({{"entry", m.entry_id}, {"candidate", m.candidate_id}, {"n", m.n}, {"pinned", m.pinned}, {"computed", m.computed}});
    return Json{{"matched", matched}, {"ours_only", d.ours_only}, {"theirs_only", d.theirs_only}, {"pin_mismatches", pins}, {"empty", d.empty()}};
}

Json catalog_entry_to_json(const CatalogEntry& e)
{
    Json pins = Json::object();
    for (const auto& [n, v] : e.h0_pins)
        pins[std::to_string(n)] = v;
    return Json{{"id", e.id},
                {"q", e.q},
                {"a3", rational_to_json(e.a3)},
                {"basket_text", e.basket_text},
                {"basket", basket_to_json(e.basket.basket)},
                {"defaulted_indices", e.basket.defaulted},
                {"h0_pins", pins},
                {"line", e.line}};
}

LinkScenario scenario_from_json(const Json& j)
{
    if (!j.is_object())
        throw InputError("scenario must be a JSON object");
    const std::string target_name = j.value("target", std::string("qds"));
    if (target_name != "qds" && target_name != "any")
        throw InputError("target must be 'qds' or 'any'");
    const LinkTarget target = target_name == "qds" ? LinkTarget::QuarticDoubleSolid : LinkTarget::AnyBirational;
    LinkScenario s;
    if (!j.contains("classes")) {
        FanoCandidate c{field<int>(j, "q"), basket_from_json(j.at("basket")), rational_from_json(j.at("a3"))};
        try {
            check_candidate_shape(c);
            (void)hilbert_profile(c);
        } catch (const std::exception& e) {
            throw InputError(std::string("scenario candidate: ") + e.what());
        }
        s = torsion_free_scenario(c, field<int>(j, "b"), target);
    } else {
        s.q = field<int>(j, "q");
        s.n = j.value("n", 1);
        s.df = field<int>(j, "df");
        s.b = field<int>(j, "b");
        s.target = target;
        try {
            s.classes = ClassTable(s.n, j.value("source", std::string("scenario file")));
            for (const auto& c : field<Json>(j, "classes")) {
                H0Range r{field<std::int64_t>(c, "lo"), optional_field<std::int64_t>(c, "hi")};
                s.classes.set({field<int>(c, "k"), c.value("tau", 0)}, r);
            }
        } catch (const InputError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("classes: ") + e.what());
        }
        if (j.contains("basket"))
            s.basket = basket_from_json(j.at("basket"));
        if (j.contains("a3"))
            s.a3 = rational_from_json(j.at("a3"));
        s.mobile_torsion = j.value("mobile_torsion", std::vector<int>{});
    }
    if (j.contains("name"))
        s.name = field<std::string>(j, "name");
    for (const auto& r : j.value("disabled_rules", std::vector<std::string>{}))
        s.disabled_rules.insert(r);
    s.grid_limit = optional_field<int>(j, "grid_limit");
    s.cap_multiplier = j.value("cap_multiplier", 1);
    return s;
}

} // namespace qfano
