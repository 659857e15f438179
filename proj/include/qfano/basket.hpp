#pragma once

#include "qfano/rational.hpp"

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfano {

class BasketError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Largest index that can occur: a single point of index 25 already has
/// r - 1/r > 24.
inline constexpr int kMaxIndex = 24;
/// Every point contributes at least 3/2, so a basket holds at most 15 points.
inline constexpr int kMaxPoints = 15;

/// Terminal cyclic quotient singularity 1/r(1,-1,b), stored with b <= r-b.
struct QuotientPoint {
    int r = 2;
    int b = 1;

    /// r - 1/r
    Rational contribution() const { return Rational(static_cast<std::int64_t>(r) * r - 1, r); }

    friend auto operator<=>(const QuotientPoint&, const QuotientPoint&) = default;
};

/// Canonical point; b is replaced by min(b, r-b). Throws BasketError.
QuotientPoint make_point(int r, int b);

/// Multiset of quotient points, kept sorted by (r, b).
class Basket {
public:
    Basket() = default;
    explicit Basket(std::vector<QuotientPoint> points);

    const std::vector<QuotientPoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    void add(QuotientPoint p);
    Basket merged(const Basket& other) const;

    /// Index multiset, sorted.
    std::vector<int> indices() const;
    /// lcm of all indices (1 for the empty basket).
    std::int64_t period() const;
    int count_index(int r) const;

    /// "(2,3,13)" style index list.
    std::string index_string() const;
    /// "1/2(1,1,1);1/13(1,12,6)" style; parses back to the same basket.
    std::string triple_string() const;
    /// Compact key "2-1,3-1,13-6" used in identifiers.
    std::string key() const;

    friend auto operator<=>(const Basket&, const Basket&) = default;

private:
    std::vector<QuotientPoint> points_;
};

Rational sigma(const Basket& basket);

/// (-K).c2 = 24 - sigma, forced by chi(O_X) = 1. Throws BasketError unless
/// sigma < 24 (or sigma <= 24 with strict = false).
Rational anticanonical_c2(const Basket& basket, bool strict = true);

/// All canonical point types with r <= kMaxIndex, ordered by (r, b).
std::vector<QuotientPoint> all_point_types(std::optional<int> coprime_to = std::nullopt);

struct BasketEnumeration {
    Rational max_sigma{24};
    std::optional<int> coprime_to;
    /// sigma < max_sigma when true, sigma <= max_sigma otherwise.
    bool strict = true;
};

/// Every basket within the bound, each exactly once, in canonical order.
std::vector<Basket> enumerate_baskets(const BasketEnumeration& opts);
std::vector<Basket> enumerate_baskets(Rational max_sigma, std::optional<int> coprime_to = std::nullopt);

} // namespace qfano
