#include "qfano/link.hpp"

#include <algorithm>
#include <numeric>

namespace qfano {

std::vector<DegreeTriple> degree_relation_solutions(int q)
{
    if (q < 2)
        throw std::invalid_argument("degree relation needs q >= 2");
    std::vector<DegreeTriple> out;
    for (int b = 1; b <= q - 1; ++b) {
        const int ad = 2 * b - q;
        if (ad <= 0)
            continue;
        for (int a = 1; a <= ad; ++a)
            if (ad % a == 0)
                out.push_back({b, a, ad / a});
    }
    std::sort(out.begin(), out.end());
    return out;
}

int local_multiple_t(int q, const QuotientPoint& point, int k)
{
    return static_cast<int>(mod_floor(static_cast<std::int64_t>(k) * local_class_of_A(q, point), point.r));
}

int local_multiple_t(const FanoCandidate& c, const QuotientPoint& point, int k)
{
    return local_multiple_t(c.q, point, k);
}

std::vector<ThresholdConstraint> threshold_bounds(int t)
{
    if (t < 0)
        throw std::invalid_argument("threshold multiple must be non-negative");
    if (t == 0)
        return {};
    ThresholdConstraint c;
    c.t = t;
    c.c_upper = Rational(1, t);
    c.beta_per_alpha = Rational(t);
    c.text = "c <= 1/" + std::to_string(t) + ", beta >= " + std::to_string(t) + " alpha";
    return {c};
}

Rational eqmain_check(int q, int q_hat, int k, std::int64_t s_k, const Rational& beta_k, const Rational& alpha, std::int64_t e)
{
    const Rational w = Rational(q) * beta_k - Rational(k) * alpha;
    if (!w.is_integer())
        throw LinkInfeasible("q beta_k - k alpha = " + w.to_string() + " is not an integer");
    return Rational(static_cast<std::int64_t>(k) * q_hat) - Rational(static_cast<std::int64_t>(q) * s_k) - w * Rational(e);
}

Rational kawamata_alpha(int r)
{
    if (r < 2)
        throw std::invalid_argument("Kawamata blowup needs a point of index >= 2");
    return Rational(1, r);
}

int torsion_order(int e, int d)
{
    if (e < 1 || d < 1)
        throw std::invalid_argument("torsion order needs e, d >= 1");
    if (e % d != 0)
        throw LinkInfeasible("d = " + std::to_string(d) + " does not divide e = " + std::to_string(e));
    return e / d;
}

std::string H0Range::to_string() const
{
    if (exact())
        return std::to_string(lo);
    return "[" + std::to_string(lo) + "," + (hi ? std::to_string(*hi) : std::string("?")) + "]";
}

ClassTable::ClassTable(int n, std::string source) : n_(n), source_(std::move(source))
{
    if (n < 1)
        throw std::invalid_argument("torsion order must be >= 1");
}

ClassTable ClassTable::from_candidate(const FanoCandidate& c, int top)
{
    ClassTable t(1, "riemann-roch " + candidate_id(c));
    for (int k = 0; k <= top; ++k)
        t.set({k, 0}, H0Range::exactly(qfano::h0(c, k)));
    return t;
}

DivisorClass ClassTable::normalize(DivisorClass c) const
{
    return {c.k, static_cast<int>(mod_floor(c.tau, n_))};
}

void ClassTable::set(DivisorClass c, H0Range v)
{
    if (v.lo < 0 || (v.hi && *v.hi < v.lo))
        throw std::invalid_argument("bad h0 range " + v.to_string());
    entries_[normalize(c)] = v;
}

H0Range ClassTable::h0(DivisorClass c) const
{
    c = normalize(c);
    if (c.k < 0)
        return H0Range::exactly(0);
    if (c.k == 0)
        return H0Range::exactly(c.tau == 0 ? 1 : 0);
    const auto it = entries_.find(c);
    if (it != entries_.end())
        return it->second;
    return {0, std::nullopt};
}

bool ClassTable::forced_prime(DivisorClass c) const
{
    c = normalize(c);
    if (c.k < 1 || !h0(c).exact() || h0(c).lo != 1)
        return false;
    for (int k1 = 1; k1 < c.k; ++k1)
        for (int t1 = 0; t1 < n_; ++t1) {
            const DivisorClass a{k1, t1};
            const DivisorClass b = normalize({c.k - k1, c.tau - t1});
            if (h0(a).possibly_at_least(1) && h0(b).possibly_at_least(1))
                return false;
        }
    return true;
}

std::string outcome_name(OutcomeKind k)
{
    switch (k) {
    case OutcomeKind::Contradiction:
        return "CONTRADICTION";
    case OutcomeKind::Forced:
        return "FORCED";
    case OutcomeKind::Feasible:
        return "FEASIBLE";
    case OutcomeKind::NonBirational:
        return "NON_BIRATIONAL";
    case OutcomeKind::Reduces:
        return "REDUCES";
    }
    return "?";
}

Rational LinkSetup::c() const
{
    const auto it = beta.find(b);
    if (it == beta.end() || it->second.is_zero())
        throw LinkInfeasible("beta_b must be positive");
    return alpha / it->second;
}

Rational LinkSetup::lambda() const { return Rational(q, b); }

Rational LinkSetup::delta() const { return alpha * (lambda() / c() - Rational(1)); }

void LinkSetup::validate() const
{
    if (alpha <= Rational(0))
        throw LinkInfeasible("alpha must be positive");
    if (!(lambda() > c()))
        throw LinkInfeasible("lambda = " + lambda().to_string() + " does not exceed c = " + c().to_string());
    if (!(delta() > Rational(0)))
        throw LinkInfeasible("delta must be positive");
}

void LinkSolution::validate() const
{
    if (e < 1)
        throw LinkInfeasible("e must be >= 1");
    if (d)
        (void)torsion_order(e, *d);
}

} // namespace qfano
