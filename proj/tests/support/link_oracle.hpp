#pragma once

// Brute-force oracle for the torsion-free quartic double solid link
// scenario, shared by the unit tests and the acceptance run.

#include "qfano/link.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qfano::oracle {

inline FanoCandidate cand(int q, std::vector<std::pair<int, int>> pts, Rational a3)
{
    std::vector<QuotientPoint> v;
    for (auto [r, b] : pts)
        v.push_back(make_point(r, b));
    return {q, Basket(v), a3};
}

// Reduced fractions p/s with 0 <= p <= limit, 1 <= s <= limit.
inline std::vector<Rational> small_rationals(int limit, bool with_zero)
{
    std::set<Rational> out;
    if (with_zero)
        out.insert(Rational(0));
    for (int s = 1; s <= limit; ++s)
        for (int p = 1; p <= limit; ++p)
            if (std::gcd(p, s) == 1)
                out.insert(Rational(p, s));
    return {out.begin(), out.end()};
}

// Independent enumeration of every assignment of the quartic double solid
// scenario for a torsion-free candidate, over rationals with numerators and
// denominators <= limit and integers <= limit. Every rule is re-stated here
// directly from its definition.
inline std::set<Assignment> brute_force(const FanoCandidate& c, int b, const std::set<std::string>& off, int limit)
{
    const int q = c.q;
    auto on = [&](const char* r) { return !off.count(r); };
    auto h = [&](int k) -> std::int64_t { return k < 0 ? 0 : (k == 0 ? 1 : h0(c, k)); };
    auto prime = [&](int k) {
        if (k < 1 || h(k) != 1)
            return false;
        for (int j = 1; j < k; ++j)
            if (h(j) >= 1 && h(k - j) >= 1)
                return false;
        return true;
    };
    std::vector<int> ks;
    for (int k = 1; k < q; ++k)
        if (h(k) >= 1 || k == b)
            ks.push_back(k);
    std::vector<int> centers{1};
    for (int r : c.basket.indices())
        centers.push_back(r);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    int tmax = 1;
    if (on("L32"))
        for (const auto& p : c.basket.points())
            tmax = std::max<int>(tmax, static_cast<int>(mod_floor(static_cast<std::int64_t>(b) * mod_inverse(q, p.r), p.r)));

    const auto alphas = small_rationals(limit, false);
    const auto betas = small_rationals(limit, true);
    std::set<Assignment> out;

    for (int a = 1; a <= limit; ++a)
        for (int d = 1; d <= limit; ++d) {
            if (on("DEG") && 2 * b != q + a * d)
                continue;
            if (on("FDIV") && h(d) < 1)
                continue;
            const int e = d;  // TOR with n = 1
            if (on("TOR") && std::gcd(b, d) != 1)
                continue;
            for (int img = 0; img <= 1; ++img) {
                if (on("R15") && img != (a == 1 ? 1 : 0))
                    continue;
                // R8: bA = t cA with t >= 2 and cA effective (or cA = F)
                bool r8_ok = true;
                if (on("R8"))
                    for (int t = 2; t <= b; ++t) {
                        if (b % t)
                            continue;
                        const int k = b / t;
                        if (k != d && h(k) < 1)
                            continue;
                        if (!(e == 1 && a >= 2 && img == 0))
                            r8_ok = false;
                        if (k != d && (h(k) >= 2 || k % d != 0 || (prime(k) && k != d)))
                            r8_ok = false;
                    }
                if (!r8_ok)
                    continue;
                bool r9_ok = true;
                if (on("R9"))
                    for (int k1 = 1; k1 < b; ++k1)
                        for (int k2 = k1 + 1; k2 < b; ++k2)
                            for (int m1 = 1; m1 * k1 < b; ++m1)
                                for (int m2 = 1; m1 * k1 + m2 * k2 <= b; ++m2)
                                    if (m1 * k1 + m2 * k2 == b && prime(k1) && prime(k2) && !((m2 == 1 && d == k1) || (m1 == 1 && d == k2)))
                                        r9_ok = false;
                if (!r9_ok)
                    continue;
                if (on("R10") && a > 1) {
                    bool found = false;
                    for (int delta = 1; b - delta * d >= 0; ++delta)
                        found = found || h(b - delta * d) >= 3;
                    if (!found)
                        continue;
                }
                const int dgate = (on("GAM") && h(q - b) >= 1 && q - b != d) ? 1 : 0;

                for (int r : centers)
                    for (const auto& alpha : alphas) {
                        if (on("CTR") && !(r == 1 ? alpha.is_integer() : (alpha * Rational(r)).is_integer()))
                            continue;
                        if (on("R11") && r > 1 && c.basket.count_index(r) == 1 && alpha != Rational(1, r))
                            continue;
                        // choose beta_k for every tracked k, checking per-k rules
                        std::vector<std::vector<std::pair<Rational, std::int64_t>>> per_k;  // (beta, s_k)
                        bool dead = false;
                        for (int k : ks) {
                            std::vector<std::pair<Rational, std::int64_t>> opts;
                            for (const auto& beta : betas) {
                                if (on("R6") && !(beta * Rational(r)).is_integer())
                                    continue;
                                if (on("R7") && r > 1 && mod_floor(static_cast<std::int64_t>(k) * mod_inverse(q, r), r) != 0 && beta <= Rational(0))
                                    continue;
                                if (k == b && on("L32") && beta < Rational(tmax) * alpha)
                                    continue;
                                const Rational w = Rational(q) * beta - Rational(k) * alpha;
                                if (!w.is_integer())
                                    continue;
                                // k q_hat = q s_k + w e with q_hat = 2
                                const Rational s = (Rational(2 * k) - w * Rational(e)) / Rational(q);
                                if (!s.is_integer() || s < Rational(0) || s > Rational(limit))
                                    continue;
                                const std::int64_t sk = s.num();
                                if (on("R4") && (k == b || h(k) >= 2) && sk < 1)
                                    continue;
                                if (k == b && on("R14") && sk != 1)
                                    continue;
                                if (k == b && on("R3") && sk >= 1 && !(2 * b > q * sk))
                                    continue;
                                opts.push_back({beta, sk});
                            }
                            if (opts.empty())
                                dead = true;
                            per_k.push_back(std::move(opts));
                        }
                        if (dead)
                            continue;
                        std::vector<std::size_t> pos(ks.size(), 0);
                        while (true) {
                            std::map<int, Rational> beta;
                            std::map<int, std::int64_t> s;
                            for (std::size_t i = 0; i < ks.size(); ++i) {
                                beta[ks[i]] = per_k[i][pos[i]].first;
                                s[ks[i]] = per_k[i][pos[i]].second;
                            }
                            bool ok = true;
                            if (on("SUB"))
                                for (int k1 : ks)
                                    for (int k2 : ks)
                                        if (beta.count(k1 + k2) && beta[k1 + k2] > beta[k1] + beta[k2])
                                            ok = false;
                            if (ok && on("R13") && on("R12") && beta[b] == alpha) {
                                // smallest m with m q divisible by b and by q - b
                                std::int64_t m = 1;
                                while ((m * q) % b || (m * q) % (q - b))
                                    ++m;
                                for (int rr : c.basket.indices())
                                    ok = ok && m % rr == 0;
                            }
                            for (std::int64_t sD = 0; ok && sD <= limit; ++sD) {
                                if (dgate) {
                                    if (sD < 1)
                                        continue;
                                    const Rational gamma = Rational(2 - s[b] - sD, e);
                                    if (gamma < Rational(0) || gamma < beta[b] - alpha)
                                        continue;
                                } else if (sD != 0) {
                                    continue;
                                }
                                Assignment x;
                                x["tau_M"] = Rational(0);
                                x["tau_F"] = Rational(0);
                                x["a"] = Rational(a);
                                x["d"] = Rational(d);
                                x["img"] = Rational(img);
                                x["e"] = Rational(e);
                                x["q_hat"] = Rational(2);
                                x["r"] = Rational(r);
                                x["alpha"] = alpha;
                                for (int k : ks) {
                                    x["beta_" + std::to_string(k)] = beta[k];
                                    x["s_" + std::to_string(k)] = Rational(s[k]);
                                    x["w_" + std::to_string(k)] = Rational(q) * beta[k] - Rational(k) * alpha;
                                }
                                if (on("GAM")) {
                                    x["dgate"] = Rational(dgate);
                                    x["s_D"] = Rational(sD);
                                }
                                out.insert(x);
                            }
                            std::size_t i = 0;
                            while (i < ks.size() && ++pos[i] == per_k[i].size())
                                pos[i++] = 0;
                            if (i == ks.size())
                                break;
                        }
                    }
            }
        }
    return out;
}

inline std::set<Assignment> engine_set(const LinkScenario& s)
{
    const RuleTrace t = apply_rules(s);
    return {t.solutions.begin(), t.solutions.end()};
}

inline const std::vector<FanoCandidate>& q4_candidates()
{
    static const std::vector<FanoCandidate> v{
        cand(4, {{11, 2}}, Rational(2, 11)),
        cand(4, {{3, 1}, {3, 1}, {5, 2}}, Rational(2, 15)),
        cand(4, {{5, 2}, {7, 3}, {7, 3}}, Rational(8, 35)),
        cand(4, {{7, 2}, {13, 6}}, Rational(18, 91)),
    };
    return v;
}

inline std::string describe_difference(const std::set<Assignment>& engine, const std::set<Assignment>& oracle)
{
    auto show = [](const Assignment& a) {
        std::string s;
        for (const auto& [k, v] : a)
            s += k + "=" + v.to_string() + " ";
        return s;
    };
    std::string out = "engine " + std::to_string(engine.size()) + ", oracle " + std::to_string(oracle.size());
    for (const auto& a : engine)
        if (!oracle.count(a))
            return out + "; engine only: " + show(a);
    for (const auto& a : oracle)
        if (!engine.count(a))
            return out + "; oracle only: " + show(a);
    return out;
}

/// Rule sets switched off for the comparison; the empty set is the full
/// rule set.
inline const std::vector<std::set<std::string>>& ablations()
{
    static const std::vector<std::set<std::string>> v{
        {},
        {"R8", "R10"},
        {"R8", "R10", "R11"},
        {"R8", "R10", "R11", "GAM"},
        {"R8", "R10", "R11", "GAM", "R4"},
        {"R8", "R10", "R11", "GAM", "R4", "R7"},
        {"R8", "R10", "R11", "GAM", "R4", "SUB"},
        {"R8", "R10", "R11", "R14", "R4"},
        {"R8", "R9", "R10", "R11", "R13", "R15"},
    };
    return v;
}

} // namespace qfano::oracle
