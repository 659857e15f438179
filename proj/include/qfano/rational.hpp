#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qfano {

/*
 * Exact rational on 64-bit numerator/denominator.
 *
 * Every intermediate is formed in 128 bits and narrowed with a range check,
 * so an overflow throws instead of wrapping. Values are always reduced with
 * a positive denominator; equality is therefore structural.
 */
class Rational {
public:
    using int_type = std::int64_t;

    constexpr Rational() noexcept = default;
    constexpr Rational(int_type n) noexcept : num_(n), den_(1) {}  // NOLINT: implicit from integer is intended
    Rational(int_type n, int_type d) { assign(n, d); }

    constexpr int_type num() const noexcept { return num_; }
    constexpr int_type den() const noexcept { return den_; }

    constexpr bool is_integer() const noexcept { return den_ == 1; }
    constexpr bool is_zero() const noexcept { return num_ == 0; }
    constexpr int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    /// Greatest integer not exceeding the value.
    int_type floor() const noexcept
    {
        int_type q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0)
            --q;
        return q;
    }
    int_type ceil() const noexcept { return -Rational(-num_, den_).floor(); }

    /// Fractional part in [0, 1).
    Rational frac() const { return *this - Rational(floor()); }

    Rational operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        const int_type g = std::gcd(a.den_, b.den_);
        const __int128 n = static_cast<__int128>(a.num_) * (b.den_ / g) + static_cast<__int128>(b.num_) * (a.den_ / g);
        const __int128 d = static_cast<__int128>(a.den_ / g) * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        const int_type g1 = std::gcd(a.num_, b.den_);
        const int_type g2 = std::gcd(b.num_, a.den_);
        const __int128 n = static_cast<__int128>(g1 ? a.num_ / g1 : 0) * (g2 ? b.num_ / g2 : 0);
        const __int128 d = static_cast<__int128>(a.den_ / (g2 ? g2 : 1)) * (b.den_ / (g1 ? g1 : 1));
        return from_wide(n, d);
    }
    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.num_ == 0)
            throw std::domain_error("rational division by zero");
        return a * Rational(b.den_, b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

    /// "p/q" always, including integers ("3/1") and zero ("0/1").
    std::string to_fraction_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    /// "p" for integers, "p/q" otherwise.
    std::string to_string() const
    {
        return den_ == 1 ? std::to_string(num_) : to_fraction_string();
    }

    /// Accepts "p", "p/q", with optional sign on p. Throws std::invalid_argument.
    static Rational parse(std::string_view text);

private:
    void assign(int_type n, int_type d)
    {
        if (d == 0)
            throw std::domain_error("rational with zero denominator");
        *this = from_wide(n, d);
    }

    static Rational from_wide(__int128 n, __int128 d)
    {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<int_type>(n);
        r.den_ = static_cast<int_type>(d == 0 ? 1 : d);
        return r;
    }

    int_type num_ = 0;
    int_type den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

inline Rational Rational::parse(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
            s.remove_suffix(1);
        return s;
    };
    auto parse_int = [&](std::string_view s) -> int_type {
        s = trim(s);
        if (s.empty())
            throw std::invalid_argument("empty integer in fraction");
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size())
            throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
        __int128 v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
            v = v * 10 + (s[i] - '0');
            if (v > INT64_MAX)
                throw std::invalid_argument("integer out of range '" + std::string(s) + "'");
        }
        return static_cast<int_type>(neg ? -v : v);
    };
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    const int_type d = parse_int(text.substr(slash + 1));
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), d);
}

/// Least non-negative residue of x modulo m (m > 0).
constexpr std::int64_t mod_floor(std::int64_t x, std::int64_t m) noexcept
{
    const std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

/// Inverse of a modulo m, assuming gcd(a, m) = 1 and m >= 1.
constexpr std::int64_t mod_inverse(std::int64_t a, std::int64_t m) noexcept
{
    if (m == 1)
        return 0;
    std::int64_t old_r = mod_floor(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    return mod_floor(old_s, m);
}

} // namespace qfano
