#include "qfano/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <set>

namespace qfano {

CatalogError::CatalogError(int line, const std::string& what) : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

int parse_int(std::string_view s, const std::string& what)
{
    s = trim(s);
    if (s.empty())
        throw InputError("empty " + what);
    std::size_t i = s[0] == '-' || s[0] == '+' ? 1 : 0;
    if (i == s.size())
        throw InputError("malformed " + what + " '" + std::string(s) + "'");
    long long v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw InputError("malformed " + what + " '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
        if (v > 1000000000)
            throw InputError(what + " out of range '" + std::string(s) + "'");
    }
    return static_cast<int>(s[0] == '-' ? -v : v);
}

/// Splits on separators outside parentheses.
std::vector<std::string_view> split_top(std::string_view s, std::string_view seps)
{
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(')
            ++depth;
        else if (s[i] == ')') {
            if (--depth < 0)
                throw InputError("unbalanced parentheses in '" + std::string(s) + "'");
        } else if (depth == 0 && seps.find(s[i]) != std::string_view::npos) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (depth != 0)
        throw InputError("unbalanced parentheses in '" + std::string(s) + "'");
    out.push_back(trim(s.substr(start)));
    return out;
}

QuotientPoint point_or_input_error(int r, int b)
{
    try {
        return make_point(r, b);
    } catch (const BasketError& e) {
        throw InputError(e.what());
    }
}

QuotientPoint parse_triple(std::string_view t)
{
    // 1/r(w1,w2,w3)
    if (t.substr(0, 2) != "1/")
        throw InputError("expected '1/r(w1,w2,w3)', got '" + std::string(t) + "'");
    const auto open = t.find('(');
    if (open == std::string_view::npos || t.back() != ')')
        throw InputError("expected '1/r(w1,w2,w3)', got '" + std::string(t) + "'");
    const int r = parse_int(t.substr(2, open - 2), "index");
    const auto w = split_top(t.substr(open + 1, t.size() - open - 2), ",");
    if (w.size() != 3)
        throw InputError("a quotient type needs three weights: '" + std::string(t) + "'");
    return normalize_triple(r, parse_int(w[0], "weight"), parse_int(w[1], "weight"), parse_int(w[2], "weight"));
}

int quotient_types(int r)
{
    int n = 0;
    for (int b = 1; 2 * b <= r; ++b)
        n += std::gcd(b, r) == 1;
    return n;
}

} // namespace

bool ParsedBasket::matches(const Basket& b) const
{
    if (b.size() != basket.size())
        return false;
    std::vector<QuotientPoint> rest = b.points();
    std::vector<int> pending = defaulted;
    for (const auto& p : basket.points()) {
        // points standing in for a defaulted index carry weight 1
        const auto d = std::find(pending.begin(), pending.end(), p.r);
        if (p.b == 1 && d != pending.end()) {
            pending.erase(d);
            continue;
        }
        const auto it = std::find(rest.begin(), rest.end(), p);
        if (it == rest.end())
            return false;
        rest.erase(it);
    }
    for (int r : defaulted) {
        const auto it = std::find_if(rest.begin(), rest.end(), [&](const QuotientPoint& p) { return p.r == r; });
        if (it == rest.end())
            return false;
        rest.erase(it);
    }
    return rest.empty();
}

QuotientPoint normalize_triple(int r, int w1, int w2, int w3)
{
    if (r < 2)
        throw InputError("index must be at least 2, got " + std::to_string(r));
    const std::int64_t w[3] = {mod_floor(w1, r), mod_floor(w2, r), mod_floor(w3, r)};
    const std::string label = "1/" + std::to_string(r) + "(" + std::to_string(w1) + "," + std::to_string(w2) + "," + std::to_string(w3) + ")";
    for (auto x : w)
        if (std::gcd(x, static_cast<std::int64_t>(r)) != 1)
            throw InputError(label + ": weight " + std::to_string(x) + " not coprime to " + std::to_string(r));
    std::optional<QuotientPoint> found;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            if ((w[i] + w[j]) % r != 0)
                continue;
            const int k = 3 - i - j;
            const auto b = static_cast<int>(mod_floor(w[k] * mod_inverse(w[i], r), r));
            const QuotientPoint p = point_or_input_error(r, b);
            if (found && *found != p)
                throw InputError(label + ": ambiguous normalization");
            found = p;
        }
    if (!found)
        throw InputError(label + " is not terminal: no pair of weights sums to 0 mod " + std::to_string(r));
    return *found;
}

ParsedBasket parse_basket_spec(std::string_view text)
{
    text = trim(text);
    ParsedBasket out;
    if (text.empty() || text == "()" || text == "-")
        return out;
    if (text.substr(0, 2) == "1/") {
        for (auto t : split_top(text, ",;"))
            out.basket.add(parse_triple(t));
        return out;
    }
    if (text.front() == '(' && text.back() == ')')
        text = trim(text.substr(1, text.size() - 2));
    for (auto t : split_top(text, ",;")) {
        const auto colon = t.find(':');
        if (colon == std::string_view::npos) {
            const int r = parse_int(t, "index");
            out.basket.add(point_or_input_error(r, 1));
            if (quotient_types(r) > 1)
                out.defaulted.push_back(r);
        } else {
            out.basket.add(point_or_input_error(parse_int(t.substr(0, colon), "index"), parse_int(t.substr(colon + 1), "weight")));
        }
    }
    return out;
}

Basket parse_basket_text(std::string_view text) { return parse_basket_spec(text).basket; }

std::string render(const Basket& basket) { return basket.triple_string(); }

namespace {

std::vector<std::string> split_csv_line(const std::string& line, int lineno)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::string(trim(cur)));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted)
        throw CatalogError(lineno, "unterminated quote");
    out.push_back(std::string(trim(cur)));
    return out;
}

std::map<int, std::int64_t> parse_pins(std::string_view s)
{
    std::map<int, std::int64_t> pins;
    s = trim(s);
    if (s.empty())
        return pins;
    for (auto p : split_top(s, ";")) {
        const auto eq = p.find('=');
        if (eq == std::string_view::npos)
            throw InputError("pin '" + std::string(p) + "' is not of the form n=h0");
        const int n = parse_int(p.substr(0, eq), "pin degree");
        const int v = parse_int(p.substr(eq + 1), "pin value");
        if (n < 0 || v < 0)
            throw InputError("pin '" + std::string(p) + "' must be non-negative");
        if (!pins.emplace(n, v).second)
            throw InputError("pin degree " + std::to_string(n) + " repeated");
    }
    return pins;
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

std::vector<CatalogEntry> import_catalog(std::istream& in)
{
    std::vector<CatalogEntry> out;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    bool have_pins = false;
    std::set<std::string> ids;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto fields = split_csv_line(line, lineno);
        if (!have_header) {
            for (auto& f : fields)
                f = lower(f);
            const std::vector<std::string> base = {"id", "q", "a3", "basket"};
            if (fields.size() < 4 || fields.size() > 5 || !std::equal(base.begin(), base.end(), fields.begin()) ||
                (fields.size() == 5 && fields[4] != "pins"))
                throw CatalogError(lineno, "header must be id,q,a3,basket[,pins]");
            have_pins = fields.size() == 5;
            have_header = true;
            continue;
        }
        const std::size_t want = have_pins ? 5 : 4;
        if (fields.size() != want && !(have_pins && fields.size() == 4))
            throw CatalogError(lineno, "expected " + std::to_string(want) + " columns, got " + std::to_string(fields.size()));
        CatalogEntry e;
        e.line = lineno;
        try {
            e.id = fields[0];
            if (e.id.empty())
                throw InputError("empty id");
            if (!ids.insert(e.id).second)
                throw InputError("duplicate id " + e.id);
            e.q = parse_int(fields[1], "q");
            if (e.q < 1)
                throw InputError("q must be positive");
            try {
                e.a3 = Rational::parse(fields[2]);
            } catch (const std::exception& x) {
                throw InputError(std::string("a3: ") + x.what());
            }
            if (e.a3.sign() <= 0)
                throw InputError("a3 must be positive, got " + e.a3.to_string());
            e.basket_text = fields[3];
            e.basket = parse_basket_spec(fields[3]);
            if (fields.size() == 5)
                e.h0_pins = parse_pins(fields[4]);
        } catch (const CatalogError&) {
            throw;
        } catch (const InputError& x) {
            throw CatalogError(lineno, x.what());
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CatalogEntry> import_catalog_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open catalog " + path);
    return import_catalog(in);
}

CatalogDiff diff_catalogs(const SearchReport& ours, const std::vector<CatalogEntry>& theirs)
{
    CatalogDiff d;
    std::vector<bool> used(ours.candidates.size(), false);
    for (const auto& e : theirs) {
        bool any = false;
        for (std::size_t i = 0; i < ours.candidates.size(); ++i) {
            const auto& p = ours.candidates[i];
            const auto& c = p.candidate;
            if (c.q != e.q || c.a3 != e.a3)
                continue;
            if (!e.basket.matches(c.basket))
                continue;
            any = true;
            used[i] = true;
            const std::string cid = candidate_id(c);
            d.matched.emplace_back(e.id, cid);
            for (const auto& [n, v] : e.h0_pins) {
                const std::int64_t got = static_cast<std::size_t>(n) < p.h0.size() ? p.h0[static_cast<std::size_t>(n)] : h0(c, n);
                if (got != v)
                    d.pin_mismatches.push_back({e.id, cid, n, v, got});
            }
        }
        if (!any)
            d.theirs_only.push_back(e.id);
    }
    for (std::size_t i = 0; i < ours.candidates.size(); ++i)
        if (!used[i])
            d.ours_only.push_back(candidate_id(ours.candidates[i].candidate));
    return d;
}

} // namespace qfano
