#pragma once

#include "qfano/search.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qfano {

/// Malformed user input (files, flags, basket text).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A catalog row that does not parse; line is 1-based.
class CatalogError : public InputError {
public:
    CatalogError(int line, const std::string& what);
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Type of the germ 1/r(w1,w2,w3): scales a pair summing to 0 mod r to
/// (1,-1) and reads off the third weight. Throws InputError when no pair
/// qualifies (not terminal) or the weights are not coprime to r.
QuotientPoint normalize_triple(int r, int w1, int w2, int w3);

struct ParsedBasket {
    Basket basket;
    /// Indices given alone ("13" in "(2,3,13)") where several quotient types
    /// exist; such points carry weight 1 in basket and match on index only.
    std::vector<int> defaulted;

    bool weights_explicit() const { return defaulted.empty(); }
    /// Exact match on explicit points, index match on defaulted ones.
    bool matches(const Basket& b) const;
};

/// Accepted forms:
///   index list   "(2,3,13)", "()", entries "r" or "r:b" (a bare r is exact
///                when r has a single type, e.g. 2, 3, 4, 6);
///   triple list  "1/2(1,1,1);1/13(1,3,10)", separated by ';' or ','.
ParsedBasket parse_basket_spec(std::string_view text);
Basket parse_basket_text(std::string_view text);

/// Triple form, which parses back to the same basket.
std::string render(const Basket& basket);

struct CatalogEntry {
    std::string id;
    int q = 0;
    Rational a3;
    std::string basket_text;
    ParsedBasket basket;
    std::map<int, std::int64_t> h0_pins;
    int line = 0;
};

/// CSV with header "id,q,a3,basket[,pins]", pins as "n=h0;n=h0". Fields may
/// be double-quoted. Blank lines are skipped; any malformed row throws
/// CatalogError with its line number.
std::vector<CatalogEntry> import_catalog(std::istream& in);
std::vector<CatalogEntry> import_catalog_file(const std::string& path);

struct PinMismatch {
    std::string entry_id;
    std::string candidate_id;
    int n = 0;
    std::int64_t pinned = 0;
    std::int64_t computed = 0;

    friend bool operator==(const PinMismatch&, const PinMismatch&) = default;
};

struct CatalogDiff {
    std::vector<std::pair<std::string, std::string>> matched;  // entry id, candidate id
    std::vector<std::string> ours_only;                          // candidate ids
    std::vector<std::string> theirs_only;                        // entry ids
    std::vector<PinMismatch> pin_mismatches;

    bool empty() const { return ours_only.empty() && theirs_only.empty() && pin_mismatches.empty(); }
};

/// Matches on (q, A^3, basket up to b <-> r-b); defaulted points match on
/// their index.
CatalogDiff diff_catalogs(const SearchReport& ours, const std::vector<CatalogEntry>& theirs);

} // namespace qfano
