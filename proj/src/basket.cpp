#include "qfano/basket.hpp"

#include <algorithm>
#include <numeric>

namespace qfano {

QuotientPoint make_point(int r, int b)
{
    if (r < 2)
        throw BasketError("index must be at least 2, got " + std::to_string(r));
    if (b < 1 || b > r - 1)
        throw BasketError("weight " + std::to_string(b) + " out of range for index " + std::to_string(r));
    if (std::gcd(r, b) != 1)
        throw BasketError("weight " + std::to_string(b) + " not coprime to index " + std::to_string(r));
    return QuotientPoint{r, std::min(b, r - b)};
}

Basket::Basket(std::vector<QuotientPoint> points) : points_(std::move(points))
{
    for (auto& p : points_)
        p = make_point(p.r, p.b);
    std::sort(points_.begin(), points_.end());
}

void Basket::add(QuotientPoint p)
{
    p = make_point(p.r, p.b);
    points_.insert(std::upper_bound(points_.begin(), points_.end(), p), p);
}

Basket Basket::merged(const Basket& other) const
{
    Basket out = *this;
    for (const auto& p : other.points_)
        out.add(p);
    return out;
}

std::vector<int> Basket::indices() const
{
    std::vector<int> out;
    out.reserve(points_.size());
    for (const auto& p : points_)
        out.push_back(p.r);
    return out;
}

std::int64_t Basket::period() const
{
    std::int64_t l = 1;
    for (const auto& p : points_)
        l = std::lcm(l, static_cast<std::int64_t>(p.r));
    return l;
}

int Basket::count_index(int r) const
{
    return static_cast<int>(std::count_if(points_.begin(), points_.end(), [r](const QuotientPoint& p) { return p.r == r; }));
}

std::string Basket::index_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(points_[i].r);
    }
    return s + ")";
}

std::string Basket::triple_string() const
{
    std::string s;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (i)
            s += ";";
        s += "1/" + std::to_string(p.r) + "(1," + std::to_string(p.r - 1) + "," + std::to_string(p.b) + ")";
    }
    return s;
}

std::string Basket::key() const
{
    std::string s;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(points_[i].r) + "-" + std::to_string(points_[i].b);
    }
    return s;
}

Rational sigma(const Basket& basket)
{
    Rational s;
    for (const auto& p : basket.points())
        s += p.contribution();
    return s;
}

Rational anticanonical_c2(const Basket& basket, bool strict)
{
    const Rational s = sigma(basket);
    if (strict ? s >= Rational(24) : s > Rational(24))
        throw BasketError("basket " + basket.index_string() + " has sigma " + s.to_string() + ", violating the bound 24");
    return Rational(24) - s;
}

std::vector<QuotientPoint> all_point_types(std::optional<int> coprime_to)
{
    std::vector<QuotientPoint> out;
    for (int r = 2; r <= kMaxIndex; ++r) {
        if (coprime_to && std::gcd(r, *coprime_to) != 1)
            continue;
        for (int b = 1; 2 * b <= r; ++b)
            if (std::gcd(r, b) == 1)
                out.push_back({r, b});
    }
    return out;
}

namespace {

void extend(const std::vector<QuotientPoint>& types, std::size_t from, const Rational& used, const BasketEnumeration& opts,
            std::vector<QuotientPoint>& current, std::vector<Basket>& out)
{
    out.emplace_back(current);
    for (std::size_t i = from; i < types.size(); ++i) {
        const Rational next = used + types[i].contribution();
        const bool fits = opts.strict ? next < opts.max_sigma : next <= opts.max_sigma;
        // contribution depends on r only and grows with it; types are sorted by r
        if (!fits)
            break;
        current.push_back(types[i]);
        extend(types, i, next, opts, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<Basket> enumerate_baskets(const BasketEnumeration& opts)
{
    const auto types = all_point_types(opts.coprime_to);
    std::vector<Basket> out;
    const bool empty_fits = opts.strict ? Rational(0) < opts.max_sigma : Rational(0) <= opts.max_sigma;
    if (!empty_fits)
        return out;
    std::vector<QuotientPoint> current;
    extend(types, 0, Rational(0), opts, current, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Basket> enumerate_baskets(Rational max_sigma, std::optional<int> coprime_to)
{
    return enumerate_baskets(BasketEnumeration{max_sigma, coprime_to, true});
}

} // namespace qfano
