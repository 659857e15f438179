#include "qfano/orbifold_rr.hpp"

#include <array>
#include <numeric>

namespace qfano {

namespace {

Rational contribution_direct(const QuotientPoint& p, int i, RRConventions conv)
{
    const std::int64_t r = p.r;
    const std::int64_t w = conv.weight_is_inverse ? mod_inverse(p.b, r) : p.b;
    Rational s(-static_cast<std::int64_t>(i) * (r * r - 1), 12 * r);
    for (std::int64_t j = 1; j < i; ++j) {
        const std::int64_t x = mod_floor(j * w, r);
        s += Rational(x * (r - x), 2 * r);
    }
    return s;
}

// c[r][b][i] for the calibrated conventions
using ContributionTable = std::array<std::array<std::array<Rational, kMaxIndex + 1>, kMaxIndex + 1>, kMaxIndex + 1>;

const ContributionTable& calibrated_table()
{
    static const ContributionTable table = [] {
        ContributionTable t{};
        for (int r = 2; r <= kMaxIndex; ++r)
            for (int b = 1; b < r; ++b)
                if (std::gcd(r, b) == 1)
                    for (int i = 0; i < r; ++i)
                        t[r][b][i] = contribution_direct(QuotientPoint{r, b}, i, kCalibratedConventions);
        return t;
    }();
    return table;
}

bool is_calibrated(RRConventions conv) { return conv.orientation == -1 && !conv.weight_is_inverse; }

Rational polynomial_part(const FanoCandidate& c, const Rational& kc2, std::int64_t n)
{
    const std::int64_t q = c.q;
    return Rational(1) + Rational(n * (n + q) * (2 * n + q), 12) * c.a3 + Rational(n, 12 * q) * kc2;
}

} // namespace

void check_candidate_shape(const FanoCandidate& c)
{
    if (c.q < 1)
        throw CandidateInvalid("Fano index must be positive");
    if (c.a3.sign() <= 0)
        throw CandidateInvalid("A^3 must be positive, got " + c.a3.to_string());
    for (const auto& p : c.basket.points())
        if (std::gcd(c.q, p.r) != 1)
            throw CandidateInvalid("index " + std::to_string(p.r) + " not coprime to q = " + std::to_string(c.q));
    if (sigma(c.basket) >= Rational(24))
        throw CandidateInvalid("basket violates sigma < 24");
}

int local_class_of_A(int q, const QuotientPoint& point)
{
    if (std::gcd(q, point.r) != 1)
        throw BasketError("q = " + std::to_string(q) + " not coprime to index " + std::to_string(point.r));
    return static_cast<int>(mod_inverse(q, point.r));
}

int canonical_multiple(const QuotientPoint& point, int q, std::int64_t n, RRConventions conv)
{
    const std::int64_t t = local_class_of_A(q, point);
    return static_cast<int>(mod_floor(conv.orientation * mod_floor(n, point.r) * t, point.r));
}

Rational point_contribution_for_class(const QuotientPoint& point, int i, RRConventions conv)
{
    if (is_calibrated(conv) && point.r <= kMaxIndex && i >= 0 && i < point.r)
        return calibrated_table()[point.r][point.b][i];
    return contribution_direct(point, static_cast<int>(mod_floor(i, point.r)), conv);
}

Rational point_contribution(const QuotientPoint& point, int q, std::int64_t n, RRConventions conv)
{
    return point_contribution_for_class(point, canonical_multiple(point, q, n, conv), conv);
}

Rational euler_char(const FanoCandidate& c, std::int64_t n, RRConventions conv)
{
    Rational chi = polynomial_part(c, Rational(24) - sigma(c.basket), n);
    for (const auto& p : c.basket.points())
        chi += point_contribution(p, c.q, n, conv);
    return chi;
}

std::int64_t h0(const FanoCandidate& c, std::int64_t n)
{
    if (n < 0)
        return 0;
    const Rational chi = euler_char(c, n);
    if (!chi.is_integer())
        throw CandidateInvalid("chi(" + std::to_string(n) + "A) = " + chi.to_string() + " is not an integer for " + candidate_id(c));
    if (chi.sign() < 0)
        throw CandidateInvalid("chi(" + std::to_string(n) + "A) = " + chi.to_string() + " is negative for " + candidate_id(c));
    return chi.num();
}

HilbertProfile hilbert_profile(const FanoCandidate& c, int horizon)
{
    HilbertProfile hp;
    hp.candidate = c;
    const int top = std::max(horizon, c.q - 1);
    hp.h0.reserve(static_cast<std::size_t>(top) + 1);
    for (int n = 0; n <= top; ++n)
        hp.h0.push_back(h0(c, n));
    std::int64_t best = 0;
    for (int k = 0; k < c.q; ++k)
        best = std::max(best, hp.h0[static_cast<std::size_t>(k)] - 1);
    hp.df = static_cast<int>(best);
    return hp;
}

bool integrality_valid(const FanoCandidate& c, int horizon)
{
    if (c.a3.sign() <= 0)
        return false;
    for (const auto& p : c.basket.points())
        if (std::gcd(c.q, p.r) != 1)
            return false;
    const Rational kc2 = Rational(24) - sigma(c.basket);
    const std::int64_t period = c.basket.period();
    const std::int64_t top = std::max<std::int64_t>(period + 2, horizon);
    for (std::int64_t n = 0; n <= top; ++n) {
        Rational chi = polynomial_part(c, kc2, n);
        for (const auto& p : c.basket.points())
            chi += point_contribution(p, c.q, n);
        if (!chi.is_integer())
            return false;
        if (n <= horizon && chi.sign() < 0)
            return false;
    }
    return true;
}

bool vanishing_valid(const FanoCandidate& c)
{
    for (int k = 1; k < c.q; ++k)
        if (!euler_char(c, -k).is_zero())
            return false;
    return true;
}

bool kawamata_bound_valid(const FanoCandidate& c)
{
    const std::int64_t q = c.q;
    return Rational(4 * q * q - 3 * q) * c.a3 <= Rational(4) * (Rational(24) - sigma(c.basket));
}

Rational lambda_of(int q, int k)
{
    if (k < 1)
        throw std::invalid_argument("lambda_of needs k >= 1");
    return Rational(q, k);
}

Rational degree_from_vanishing(int q, const Basket& basket)
{
    if (q < 3)
        throw std::invalid_argument("A^3 is not determined by chi(-A) = 0 for q < 3");
    const FanoCandidate zero{q, basket, Rational(0)};
    // chi(-A) = chi_0(-A) - (q-1)(q-2)/12 * A^3
    const Rational coefficient(-static_cast<std::int64_t>(q - 1) * (q - 2), 12);
    return -euler_char(zero, -1) / coefficient;
}

Rational degree_residue_index_two(const Basket& basket)
{
    const FanoCandidate zero{2, basket, Rational(0)};
    // chi(A) = chi_0(A) + A^3 when q = 2
    return (-euler_char(zero, 1)).frac();
}

std::string candidate_id(const FanoCandidate& c)
{
    return "q" + std::to_string(c.q) + ":" + c.basket.key() + ":" + c.a3.to_fraction_string();
}

} // namespace qfano
