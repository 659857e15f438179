#pragma once

#include "qfano/catalog.hpp"
#include "qfano/link.hpp"
#include "qfano/search.hpp"

#include "json.hpp"

#include <string>

namespace qfano {

using Json = nlohmann::json;

/// Fractions are written as reduced "p/q" strings.
Json rational_to_json(const Rational& r);
/// Accepts "p/q", "p" or an integer; throws InputError.
Rational rational_from_json(const Json& j);

Json basket_to_json(const Basket& b);
Basket basket_from_json(const Json& j);

/// {id, q, a3, basket:[{r,b}], sigma, h0, df, valid, provenance}
Json candidate_to_json(const HilbertProfile& p, bool valid, const std::string& provenance);
/// Checks that id, sigma and df agree with the other fields.
HilbertProfile candidate_from_json(const Json& j);

Json config_to_json(const SearchConfig& c);
SearchConfig config_from_json(const Json& j);

Json report_to_json(const SearchReport& r);
SearchReport report_from_json(const Json& j);

/// Deterministic text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json trace_to_json(const RuleTrace& t, bool with_events);
Json case_result_to_json(const CaseResult& r, bool with_events);
Json catalog_diff_to_json(const CatalogDiff& d);
Json catalog_entry_to_json(const CatalogEntry& e);

/// Scenario file. Either a torsion-free candidate
///   {"q", "basket", "a3", "b", "target"?: "qds"|"any", "disabled_rules"?}
/// or an explicit class table
///   {"name", "q", "n", "df", "b", "classes": [{"k", "tau", "lo", "hi"?}], ...}.
LinkScenario scenario_from_json(const Json& j);

} // namespace qfano
