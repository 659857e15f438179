#include "qfano/link.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qfano {

namespace {

using csp::Tuple;

constexpr int kQHatMax = 7;

Rational R(std::int64_t n) { return Rational(n); }

int as_int(const Rational& x) { return static_cast<int>(x.num()); }

std::string join_values(const std::vector<Rational>& v, std::size_t max_shown = 8)
{
    std::string out = "{";
    for (std::size_t i = 0; i < v.size() && i < max_shown; ++i)
        out += (i ? ", " : "") + v[i].to_string();
    if (v.size() > max_shown)
        out += ", ... (" + std::to_string(v.size()) + " values)";
    return out + "}";
}

std::vector<Rational> int_range(std::int64_t lo, std::int64_t hi)
{
    std::vector<Rational> out;
    for (std::int64_t i = lo; i <= hi; ++i)
        out.emplace_back(i);
    return out;
}

// Values m/r <= max over the center indices; zero included on request.
std::vector<Rational> center_grid(const std::vector<int>& centers, const Rational& max, bool with_zero, std::optional<int> limit)
{
    std::vector<Rational> out;
    if (with_zero)
        out.emplace_back(0);
    for (int r : centers) {
        const std::int64_t top = (max * Rational(r)).floor();
        for (std::int64_t m = 1; m <= top; ++m) {
            const Rational x(m, r);
            if (limit && (x.num() > *limit || x.den() > *limit))
                continue;
            out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> split_rule(const std::string& rule)
{
    std::vector<std::string> out;
    std::stringstream ss(rule);
    std::string part;
    while (std::getline(ss, part, '/'))
        out.push_back(part);
    return out;
}

// Smallest m >= 1 with m(-K) in Z D and in Z M, classes in Z + Z/n with
// -K = (q, 0); empty when no such m exists.
std::optional<std::int64_t> cartier_multiple(int q, int n, DivisorClass m_cls, DivisorClass d_cls)
{
    auto in_span = [&](std::int64_t mk, DivisorClass g) {
        if (g.k == 0)
            return false;
        if ((mk * q) % g.k != 0)
            return false;
        const std::int64_t j = mk * q / g.k;
        return mod_floor(j * g.tau, n) == 0;
    };
    for (std::int64_t m = 1; m <= 100000; ++m)
        if (in_span(m, m_cls) && in_span(m, d_cls))
            return m;
    return std::nullopt;
}

class Builder {
public:
    explicit Builder(const LinkScenario& s) : s_(s) {}

    LinkProblem build()
    {
        validate();
        const bool qds = s_.target == LinkTarget::QuarticDoubleSolid;
        const int n = s_.n;
        const int b = s_.b;
        const int q = s_.q;
        const int qhat_max = qds ? 2 : kQHatMax;
        const int cap = s_.cap_multiplier;
        const bool torsion_free = n == 1;

        // tracked k: every k < q with a nonzero section, plus b
        std::vector<int> ks;
        if (torsion_free) {
            for (int k = 1; k < q; ++k)
                if (s_.classes.h0({k, 0}).surely_nonempty() || k == b)
                    ks.push_back(k);
        } else {
            ks.push_back(b);
        }
        const bool eqm = torsion_free && s_.enabled("EQM") && s_.enabled("R5");

        // mobile torsion
        std::vector<int> taus = s_.mobile_torsion;
        if (taus.empty())
            for (int t = 0; t < n; ++t)
                if (s_.classes.h0({b, t}).possibly(s_.df + 1))
                    taus.push_back(t);
        if (taus.empty())
            throw LinkConfigError(s_.name + ": no admissible mobile class " + std::to_string(b) + "A + tau");
        admissible_ = taus;
        add_var("tau_M", std::vector<Rational>(taus.begin(), taus.end()));
        note("tau_M in " + join_values(std::vector<Rational>(taus.begin(), taus.end())) + ": h0(" + std::to_string(b) +
             "A + tau) can equal df + 1 = " + std::to_string(s_.df + 1));

        // discrepancy data of F (target specific)
        int e_max;
        if (qds) {
            const int ad = 2 * b - q;
            if (s_.enabled("DEG") && ad >= 1) {
                add_var("a", int_range(1, ad));
                add_var("d", int_range(1, ad));
                note("a, d <= 2b - q = " + std::to_string(ad) + " (DEG)");
            } else {
                const int c = std::max(1, 2 * q) * cap;
                add_var("a", int_range(1, c));
                add_var("d", int_range(1, c));
                note("a, d <= " + std::to_string(c) + " (cap)");
            }
            add_var("tau_F", int_range(0, n - 1));
            add_var("img", {R(0), R(1)});
            e_max = n * as_int(var_max("d"));
            if (!(s_.enabled("TOR")))
                e_max = 7 * b * cap;
            note("e <= " + std::to_string(e_max) + (s_.enabled("TOR") ? " (TOR: e = n d)" : " (cap)"));
        } else {
            e_max = 7 * b * (eqm && s_.enabled("L32") ? 1 : cap);
            note("e <= 7b = " + std::to_string(e_max) + (eqm && s_.enabled("L32") ? " (EQM at k = b, w_b >= 1)" : " (cap)"));
        }
        add_var("e", int_range(1, e_max));
        note("e >= 1 (R1)");
        add_var("q_hat", qds ? std::vector<Rational>{R(2)} : int_range(1, kQHatMax));
        note(qds ? std::string("q_hat = 2 (target)") : std::string("q_hat <= 7 (R2)"));

        // center, alpha, beta
        const bool numeric = s_.basket.has_value();
        Rational alpha_max;
        int t_prime = 1;
        if (numeric) {
            std::vector<int> centers{1};
            for (int r : s_.basket->indices())
                centers.push_back(r);
            std::sort(centers.begin(), centers.end());
            centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
            centers_ = centers;
            add_var("r", std::vector<Rational>(centers.begin(), centers.end()));
            note("center index r in " + join_values(std::vector<Rational>(centers.begin(), centers.end())));

            if (torsion_free && s_.enabled("L32"))
                for (const auto& p : s_.basket->points())
                    t_prime = std::max(t_prime, local_multiple_t(q, p, b));
            if (eqm && s_.enabled("L32")) {
                alpha_max = Rational(static_cast<std::int64_t>(qhat_max) * b, static_cast<std::int64_t>(q) * t_prime - b);
                note("alpha <= q_hat b/(q t - b) = " + alpha_max.to_string() + " with t = " + std::to_string(t_prime) +
                     " (EQM at k = b, L32)");
            } else {
                alpha_max = Rational(q * cap);
                note("alpha <= " + alpha_max.to_string() + " (cap)");
            }
            add_var("alpha", center_grid(centers, alpha_max, false, s_.grid_limit));
            for (int k : ks) {
                Rational bmax;
                if (eqm) {
                    bmax = (Rational(static_cast<std::int64_t>(k) * qhat_max) + Rational(k) * alpha_max) / Rational(q);
                    note("beta_" + std::to_string(k) + " <= (k q_hat + k alpha)/q = " + bmax.to_string() + " (EQM)");
                } else {
                    bmax = Rational(2 * q * cap);
                    note("beta_" + std::to_string(k) + " <= " + bmax.to_string() + " (cap)");
                }
                add_var(beta(k), center_grid(centers, bmax, true, s_.grid_limit));
            }
            if (eqm)
                for (int k : ks) {
                    const std::int64_t lo = (-(Rational(k) * alpha_max)).floor();
                    const std::int64_t hi = static_cast<std::int64_t>(k) * qhat_max;
                    add_var(w(k), int_range(lo, hi));
                }
        }
        for (int k : ks) {
            std::int64_t hi = qhat_max;
            if (eqm)
                hi = (Rational(static_cast<std::int64_t>(k) * qhat_max) + Rational(k) * alpha_max * Rational(e_max)).floor() / q;
            else
                hi = static_cast<std::int64_t>(qhat_max) * cap;
            add_var(sv(k), int_range(0, hi));
        }
        const bool gam = qds && numeric && s_.enabled("GAM");
        if (gam) {
            add_var("dgate", {R(0), R(1)});
            add_var("s_D", int_range(0, qhat_max));
        }

        add_rules(ks, qds, numeric, eqm, gam, t_prime);
        return {std::move(p_), std::move(bounds_)};
    }

private:
    void validate() const
    {
        if (s_.q < 2)
            throw LinkConfigError("scenario needs q >= 2");
        if (s_.b < 1 || s_.b >= s_.q)
            throw LinkConfigError("mobile class b must satisfy 1 <= b < q");
        if (s_.n < 1 || s_.classes.n() != s_.n)
            throw LinkConfigError("torsion order does not match the class table");
        if (s_.cap_multiplier < 1)
            throw LinkConfigError("cap multiplier must be >= 1");
        for (const auto& r : s_.disabled_rules)
            if (!link_rules().count(r))
                throw LinkConfigError("unknown rule " + r);
        // the alpha and beta grids are built from CTR and R6
        if (s_.basket && (!s_.enabled("CTR") || !s_.enabled("R6")))
            throw LinkConfigError("CTR and R6 define the alpha and beta grids and cannot be disabled");
        for (int t : s_.mobile_torsion)
            if (t < 0 || t >= s_.n)
                throw LinkConfigError("mobile torsion label out of range");
        if (s_.basket && s_.n == 1)
            for (const auto& p : s_.basket->points())
                if (std::gcd(s_.q, p.r) != 1)
                    throw LinkConfigError("basket index " + std::to_string(p.r) + " not coprime to q");
    }

    static std::string beta(int k) { return "beta_" + std::to_string(k); }
    static std::string w(int k) { return "w_" + std::to_string(k); }
    static std::string sv(int k) { return "s_" + std::to_string(k); }

    void note(std::string s) { bounds_.push_back(std::move(s)); }

    void add_var(const std::string& name, std::vector<Rational> dom) { p_.add_variable(name, std::move(dom)); }

    Rational var_max(const std::string& name) const { return p_.variables()[static_cast<std::size_t>(p_.variable_index(name))].domain.back(); }

    int idx(const std::string& name) const
    {
        const int i = p_.variable_index(name);
        if (i < 0)
            throw std::logic_error("missing link variable " + name);
        return i;
    }

    void rule(const std::string& id, const std::string& text, const std::vector<std::string>& scope, csp::Predicate f)
    {
        for (const auto& part : split_rule(id))
            if (!s_.enabled(part))
                return;
        std::vector<int> sc;
        for (const auto& v : scope)
            sc.push_back(idx(v));
        p_.add_constraint(id, text, std::move(sc), std::move(f));
    }

    void add_rules(const std::vector<int>& ks, bool qds, bool numeric, bool eqm, bool gam, int t_prime)
    {
        const int q = s_.q;
        const int b = s_.b;
        const int n = s_.n;
        const ClassTable cl = s_.classes;
        const bool torsion_free = n == 1;
        auto cls = [n](int k, int tau) { return DivisorClass{k, static_cast<int>(mod_floor(tau, n))}; };

        if (qds) {
            rule("R14", "the image of M generates: s_b = 1", {sv(b)}, [](const Tuple& t) { return t[0] == R(1); });
            rule("DEG", "2b = q + a d and 2 tau_M = a tau_F (-K ~ 2M - aF)", {"a", "d", "tau_M", "tau_F"}, [q, b, n](const Tuple& t) {
                const std::int64_t a = t[0].num(), d = t[1].num(), tm = t[2].num(), tf = t[3].num();
                return 2 * b == q + a * d && mod_floor(2 * tm - a * tf, n) == 0;
            });
            rule("TOR", "e = n d and gcd(b, d) = 1", {"e", "d"}, [b, n](const Tuple& t) {
                return t[0] == Rational(n) * t[1] && std::gcd<std::int64_t>(b, t[1].num()) == 1;
            });
            rule("FDIV", "F ~ dA + tau_F T is effective", {"d", "tau_F"},
                 [cl](const Tuple& t) { return cl.h0({as_int(t[0]), as_int(t[1])}).possibly_at_least(1); });
            rule("R15", "a = 1 exactly when F maps to a curve", {"a", "img"}, [](const Tuple& t) { return (t[0] == R(1)) == (t[1] == R(1)); });

            rule("R8", "M contains tN with t >= 2: Supp N = F, e = d = 1, torsion free, a >= 2, F over a point",
                 {"tau_M", "e", "a", "img", "d", "tau_F"}, [=](const Tuple& t) {
                     const int tm = as_int(t[0]);
                     const DivisorClass f = cls(as_int(t[4]), as_int(t[5]));
                     const DivisorClass m = cls(b, tm);
                     bool fires = false;
                     bool ok = true;
                     auto consequences = [&]() {
                         return n == 1 && t[1] == R(1) && t[2] >= R(2) && t[3] == R(0);
                     };
                     for (int mult = 2; mult <= b; ++mult) {
                         if (b % mult != 0)
                             continue;
                         const int k = b / mult;
                         for (int tau = 0; tau < n; ++tau) {
                             const DivisorClass c = cls(k, tau);
                             if (cls(mult * k, mult * tau) != m)
                                 continue;
                             const bool is_f = c == f;
                             const H0Range h = cl.h0(c);
                             if (!is_f && !h.surely_nonempty())
                                 continue;
                             fires = true;
                             if (is_f)
                                 continue;
                             // every member of |c| is supported on F
                             if (h.lo >= 2)
                                 ok = false;
                             bool multiple_of_f = false;
                             for (int j = 1; j * f.k <= c.k; ++j)
                                 multiple_of_f = multiple_of_f || cls(j * f.k, j * f.tau) == c;
                             ok = ok && multiple_of_f;
                             if (cl.forced_prime(c))
                                 ok = ok && c == f;
                         }
                     }
                     return !fires || (ok && consequences());
                 });

            rule("R9", "M contains t1 N1 + t2 N2 with distinct prime N1, N2: F is N1 (t2 = 1) or N2 (t1 = 1)", {"tau_M", "d", "tau_F"},
                 [=](const Tuple& t) {
                     const DivisorClass m = cls(b, as_int(t[0]));
                     const DivisorClass f = cls(as_int(t[1]), as_int(t[2]));
                     for (int k1 = 1; k1 < b; ++k1)
                         for (int t1 = 0; t1 < n; ++t1) {
                             const DivisorClass c1 = cls(k1, t1);
                             if (!cl.forced_prime(c1))
                                 continue;
                             for (int m1 = 1; m1 * k1 < b; ++m1)
                                 for (int k2 = 1; m1 * k1 + k2 <= b; ++k2)
                                     for (int t2 = 0; t2 < n; ++t2) {
                                         const DivisorClass c2 = cls(k2, t2);
                                         if (!(c1 < c2) || !cl.forced_prime(c2))
                                             continue;
                                         for (int m2 = 1; m1 * k1 + m2 * k2 <= b; ++m2) {
                                             if (cls(m1 * k1 + m2 * k2, m1 * t1 + m2 * t2) != m)
                                                 continue;
                                             const bool ok = (m2 == 1 && f == c1) || (m1 == 1 && f == c2);
                                             if (!ok)
                                                 return false;
                                         }
                                     }
                         }
                     return true;
                 });

            rule("R10", "a > 1: M ~ N + delta F with delta >= 1 and dim |N| >= 2", {"a", "d", "tau_M", "tau_F"}, [=](const Tuple& t) {
                if (t[0] <= R(1))
                    return true;
                const int d = as_int(t[1]), tm = as_int(t[2]), tf = as_int(t[3]);
                for (int delta = 1; b - delta * d >= 0; ++delta)
                    if (cl.h0(cls(b - delta * d, tm - delta * tf)).possibly_at_least(3))
                        return true;
                return false;
            });
        }

        for (int k : ks) {
            if (k == b) {
                rule("R4", "M is mobile, so N_b is not contracted: s_b >= 1", {sv(k)}, [](const Tuple& t) { return t[0] >= R(1); });
            } else if (cl.h0({k, 0}).lo >= 2) {
                rule("R4", "h0(" + std::to_string(k) + "A) >= 2, so N_" + std::to_string(k) + " moves and is not contracted", {sv(k)},
                     [](const Tuple& t) { return t[0] >= R(1); });
            }
        }
        rule("R3", "s_b >= 1 implies q_hat b > q s_b (lambda increases)", {"q_hat", sv(b)}, [q, b](const Tuple& t) {
            return t[1] < R(1) || Rational(b) * t[0] > Rational(q) * t[1];
        });

        if (numeric) {
            rule("CTR", "alpha is a positive integer at a Gorenstein center and lies in (1/r)Z at an index-r point", {"r", "alpha"},
                 [](const Tuple& t) {
                     const Rational& r = t[0];
                     const Rational& a = t[1];
                     if (r == R(1))
                         return a.is_integer() && a >= R(1);
                     return (a * r).is_integer() && a > R(0);
                 });
            const Basket basket = *s_.basket;
            rule("R11", "an index-r center with a single index-r basket point is a cyclic quotient: alpha = 1/r", {"r", "alpha"},
                 [basket](const Tuple& t) {
                     const int r = as_int(t[0]);
                     if (r > 1 && basket.count_index(r) == 1)
                         return t[1] == Rational(1, r);
                     return true;
                 });
            for (int k : ks) {
                rule("R6", "r beta_" + std::to_string(k) + " is an integer", {"r", beta(k)},
                     [](const Tuple& t) { return (t[0] * t[1]).is_integer(); });
                if (torsion_free)
                    rule("R7", "beta_" + std::to_string(k) + " > 0 when kA is not Cartier at the center", {"r", beta(k)},
                         [q, k](const Tuple& t) {
                             const int r = as_int(t[0]);
                             if (r > 1 && mod_floor(static_cast<std::int64_t>(k) * mod_inverse(q, r), r) != 0)
                                 return t[1] > R(0);
                             return true;
                         });
                if (eqm) {
                    rule("R5", w(k) + " = q beta_" + std::to_string(k) + " - " + std::to_string(k) + " alpha is an integer",
                         {"alpha", beta(k), w(k)},
                         [q, k](const Tuple& t) { return t[2] == Rational(q) * t[1] - Rational(k) * t[0]; });
                    rule("EQM", std::to_string(k) + " q_hat = q s_" + std::to_string(k) + " + " + w(k) + " e",
                         {"q_hat", sv(k), w(k), "e"},
                         [q, k](const Tuple& t) { return Rational(k) * t[0] == Rational(q) * t[1] + t[2] * t[3]; });
                }
            }
            rule("L32", "beta_b >= " + std::to_string(t_prime) + " alpha (M ~ -tK near a basket point, c <= 1/t)",
                 {"alpha", beta(b)}, [t_prime](const Tuple& t) { return t[1] >= Rational(t_prime) * t[0]; });
            if (torsion_free)
                for (std::size_t i = 0; i < ks.size(); ++i)
                    for (std::size_t j = i; j < ks.size(); ++j) {
                        const int k3 = ks[i] + ks[j];
                        if (std::find(ks.begin(), ks.end(), k3) == ks.end())
                            continue;
                        const std::string txt = "beta_" + std::to_string(k3) + " <= beta_" + std::to_string(ks[i]) + " + beta_" +
                                                std::to_string(ks[j]);
                        if (i == j)
                            rule("SUB", txt, {beta(ks[i]), beta(k3)}, [](const Tuple& t) { return t[1] <= t[0] + t[0]; });
                        else
                            rule("SUB", txt, {beta(ks[i]), beta(ks[j]), beta(k3)},
                                 [](const Tuple& t) { return t[2] <= t[0] + t[1]; });
                    }
            // canonical pair: M ~ -K near every base point, so m(-K) is
            // Cartier for the m below and every basket index divides it
            const std::vector<int> indices = s_.basket->indices();
            rule("R13/R12", "beta_b = alpha makes (X, M) canonical: the Cartier multiple of -K is divisible by every index",
                 {"alpha", beta(b), "tau_M"}, [=](const Tuple& t) {
                     if (t[0] != t[1])
                         return true;
                     const int tau = as_int(t[2]);
                     const auto m = cartier_multiple(q, n, cls(b, tau), cls(q - b, -tau));
                     if (!m)
                         return true;
                     return std::all_of(indices.begin(), indices.end(), [&](int r) { return *m % r == 0; });
                 });
        }

        if (gam) {
            rule("GAM", "dgate = 1 exactly when D = -K - M is effective and not the class of F", {"tau_M", "d", "tau_F", "dgate"},
                 [=](const Tuple& t) {
                     const int tm = as_int(t[0]);
                     const DivisorClass dcls = cls(q - b, -tm);
                     const bool on = cl.h0(dcls).surely_nonempty() && dcls != cls(as_int(t[1]), as_int(t[2]));
                     return (t[3] == R(1)) == on;
                 });
            rule("GAM", "D is not contracted: s_D >= 1 (s_D = 0 when the rule does not apply)", {"dgate", "s_D"},
                 [](const Tuple& t) { return t[0] == R(0) ? t[1] == R(0) : t[1] >= R(1); });
            rule("GAM", "q_hat = s_b + s_D + gamma e with gamma >= max(0, beta_b - alpha)",
                 {"dgate", "q_hat", sv(b), "s_D", "e", "alpha", beta(b)}, [](const Tuple& t) {
                     if (t[0] == R(0))
                         return true;
                     const Rational gamma = (t[1] - t[2] - t[3]) / t[4];
                     return gamma >= R(0) && gamma >= t[6] - t[5];
                 });
        }
    }

    const LinkScenario& s_;
    csp::Problem p_;
    std::vector<std::string> bounds_;
    std::vector<int> admissible_;
    std::vector<int> centers_;
};

Assignment to_assignment(const csp::Problem& p, const Tuple& t)
{
    Assignment a;
    for (std::size_t i = 0; i < t.size(); ++i)
        a[p.variables()[i].name] = t[i];
    return a;
}

std::vector<TraceEntry> narrate(const csp::Problem& p, const std::vector<csp::Event>& events)
{
    std::vector<TraceEntry> out;
    std::vector<std::string> path;
    auto bindings = [&]() {
        std::string s;
        for (const auto& x : path)
            s += (s.empty() ? "" : ", ") + x;
        return s.empty() ? std::string("-") : s;
    };
    for (const auto& e : events) {
        const csp::Constraint* c = e.constraint >= 0 ? &p.constraints()[static_cast<std::size_t>(e.constraint)] : nullptr;
        switch (e.kind) {
        case csp::EventKind::Branch: {
            path.resize(static_cast<std::size_t>(e.depth - 1));
            const std::string b = p.variables()[static_cast<std::size_t>(e.variable)].name + "=" + e.values[0].to_string();
            out.push_back({"SEARCH", bindings(), "try " + b});
            path.push_back(b);
            break;
        }
        case csp::EventKind::Prune:
            path.resize(static_cast<std::size_t>(e.depth));
            out.push_back({c->rule, bindings(),
                           p.variables()[static_cast<std::size_t>(e.variable)].name + " loses " + join_values(e.values) + "; " + c->description});
            break;
        case csp::EventKind::Fail:
            path.resize(static_cast<std::size_t>(e.depth));
            out.push_back({c ? c->rule : "DOMAIN", bindings(), "contradiction: " + (c ? c->description : std::string("empty domain"))});
            break;
        case csp::EventKind::Solution: {
            path.resize(static_cast<std::size_t>(e.depth));
            std::string s;
            for (std::size_t i = 0; i < e.values.size(); ++i)
                s += (i ? ", " : "") + p.variables()[i].name + "=" + e.values[i].to_string();
            out.push_back({"SOLUTION", bindings(), s});
            break;
        }
        }
    }
    return out;
}

} // namespace

const std::map<std::string, std::string>& link_rules()
{
    static const std::map<std::string, std::string> rules{
        {"R1", "e >= 1: the exceptional divisor is not contracted"},
        {"R2", "q_hat <= 7"},
        {"R3", "lambda strictly increases along the link"},
        {"R4", "a moving N_k is not contracted: s_k >= 1"},
        {"R5", "q beta_k - k alpha is an integer"},
        {"R6", "r beta_k is an integer at an index-r center"},
        {"R7", "beta_k > 0 when kA is not Cartier at the center (inferred)"},
        {"R8", "M ~ tN, t >= 2, N effective: Supp N = F, e = d = 1, torsion free, a >= 2"},
        {"R9", "a split of M into two primes without common components puts F on one part"},
        {"R10", "a > 1: M ~ N + delta F with dim |N| >= 2"},
        {"R11", "a unique index-r point is a cyclic quotient: alpha = 1/r"},
        {"R12", "m K Cartier forces r | m for every basket index"},
        {"R13", "a canonical pair has M ~ -K near its base points"},
        {"R14", "target normalization s_b = 1"},
        {"R15", "a = 1 exactly when F maps to a curve"},
        {"DEG", "2b = q + a d (and the torsion part of -K ~ 2M - aF)"},
        {"TOR", "e = n d, gcd(b, d) = 1"},
        {"FDIV", "F ~ dA + tau_F T is effective"},
        {"EQM", "k q_hat = q s_k + (q beta_k - k alpha) e"},
        {"SUB", "beta is subadditive on tracked classes"},
        {"L32", "M ~ -tK near a point: beta_b >= t alpha"},
        {"CTR", "alpha is integral at Gorenstein centers and in (1/r)Z at index-r points"},
        {"GAM", "-K ~ M + D pushed to the target: q_hat = s_b + s_D + gamma e"},
    };
    return rules;
}

bool RuleTrace::uses_rule(const std::string& rule) const
{
    return std::any_of(entries.begin(), entries.end(), [&](const TraceEntry& e) {
        const auto parts = split_rule(e.rule);
        return std::find(parts.begin(), parts.end(), rule) != parts.end();
    });
}

std::string RuleTrace::outcome_text() const
{
    std::string s = outcome_name(outcome);
    if (outcome == OutcomeKind::Reduces)
        return s + "(" + condition + ")";
    if (outcome == OutcomeKind::Forced || outcome == OutcomeKind::NonBirational) {
        std::string inner;
        for (const auto& [k, v] : forced)
            inner += (inner.empty() ? "" : ", ") + k + "=" + v.to_string();
        for (const auto& [x, y] : equalities)
            inner += (inner.empty() ? "" : ", ") + x + "=" + y;
        return s + "{" + inner + "}";
    }
    if (outcome == OutcomeKind::Feasible)
        return s + "(" + std::to_string(solutions.size()) + " solutions)";
    return s;
}

std::vector<int> branch_values(const ClassTable& classes, int q, int df)
{
    std::vector<int> out;
    for (int b = 1; b < q; ++b)
        for (int t = 0; t < classes.n(); ++t)
            if (classes.h0({b, t}).possibly(df + 1)) {
                out.push_back(b);
                break;
            }
    return out;
}

LinkScenario torsion_free_scenario(const FanoCandidate& c, int b, LinkTarget target)
{
    LinkScenario s;
    s.name = candidate_id(c) + " b=" + std::to_string(b);
    s.q = c.q;
    s.n = 1;
    s.df = hilbert_profile(c).df;
    s.classes = ClassTable::from_candidate(c, c.q);
    s.basket = c.basket;
    s.a3 = c.a3;
    s.b = b;
    s.mobile_torsion = {0};
    s.target = target;
    return s;
}

LinkProblem build_link_problem(const LinkScenario& s) { return Builder(s).build(); }

RuleTrace apply_rules(const LinkScenario& s)
{
    LinkProblem lp = build_link_problem(s);
    const csp::Result res = csp::solve(lp.problem);
    RuleTrace t;
    t.scenario = s.name;
    t.bounds = lp.bounds;
    for (const auto& b : lp.bounds)
        t.entries.push_back({"BOUND", "-", b});
    auto narrated = narrate(lp.problem, res.events);
    t.entries.insert(t.entries.end(), narrated.begin(), narrated.end());
    t.events = res.events;
    for (const auto& sol : res.solutions)
        t.solutions.push_back(to_assignment(lp.problem, sol));

    if (t.solutions.empty()) {
        t.outcome = OutcomeKind::Contradiction;
        return t;
    }
    const auto& vars = lp.problem.variables();
    std::vector<std::string> loose;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& name = vars[i].name;
        const Rational v0 = t.solutions.front().at(name);
        if (std::all_of(t.solutions.begin(), t.solutions.end(), [&](const Assignment& a) { return a.at(name) == v0; }))
            t.forced[name] = v0;
        else
            loose.push_back(name);
    }
    std::set<std::string> tied;
    for (std::size_t i = 0; i < loose.size(); ++i)
        for (std::size_t j = i + 1; j < loose.size(); ++j)
            if (std::all_of(t.solutions.begin(), t.solutions.end(),
                            [&](const Assignment& a) { return a.at(loose[i]) == a.at(loose[j]); })) {
                t.equalities.push_back({loose[j], loose[i]});
                tied.insert(loose[i]);
                tied.insert(loose[j]);
            }

    if (s.target == LinkTarget::QuarticDoubleSolid) {
        std::set<Rational> seen;
        for (const auto& a : t.solutions)
            seen.insert(a.at("tau_M"));
        const auto& dom = vars[static_cast<std::size_t>(lp.problem.variable_index("tau_M"))].domain;
        std::vector<Rational> dead;
        for (const auto& x : dom)
            if (!seen.count(x))
                dead.push_back(x);
        if (!dead.empty()) {
            t.outcome = OutcomeKind::Reduces;
            t.condition = "q_hat > " + std::to_string(s.q);
            t.entries.push_back({"R3", "tau_M in " + join_values(dead),
                                 "this admissible mobile system admits no link to the target; lambda grows past q/b, so the "
                                 "target has index > " + std::to_string(s.q)});
            return t;
        }
    }
    t.outcome = loose.size() == tied.size() ? OutcomeKind::Forced : OutcomeKind::Feasible;
    return t;
}

csp::ReplayReport replay_trace(const LinkScenario& s, const RuleTrace& t)
{
    const LinkProblem lp = build_link_problem(s);
    csp::ReplayReport rep = csp::replay(lp.problem, t.events);
    if (!rep.ok)
        return rep;
    std::vector<Assignment> got;
    for (const auto& sol : rep.solutions)
        got.push_back(to_assignment(lp.problem, sol));
    if (got != t.solutions) {
        rep.ok = false;
        rep.detail = "replayed solution set differs from the trace";
    }
    if (rep.ok && (t.outcome == OutcomeKind::Contradiction) != got.empty()) {
        rep.ok = false;
        rep.detail = "outcome does not match the replayed solution set";
    }
    return rep;
}

LinkSetup setup_of(const LinkScenario& s, const Assignment& a)
{
    LinkSetup st;
    st.q = s.q;
    st.b = s.b;
    if (const auto it = a.find("tau_M"); it != a.end())
        st.mobile_torsion = as_int(it->second);
    st.alpha = a.at("alpha");
    for (const auto& [name, v] : a)
        if (name.rfind("beta_", 0) == 0)
            st.beta[std::stoi(name.substr(5))] = v;
    return st;
}

LinkSolution solution_of(const LinkScenario& s, const Assignment& a)
{
    LinkSolution sol;
    sol.e = as_int(a.at("e"));
    sol.q_hat = as_int(a.at("q_hat"));
    for (const auto& [name, v] : a)
        if (name.rfind("s_", 0) == 0 && name != "s_D")
            sol.s[std::stoi(name.substr(2))] = v.num();
    if (a.count("a"))
        sol.a = as_int(a.at("a"));
    if (a.count("d")) {
        sol.d = as_int(a.at("d"));
        sol.n = torsion_order(sol.e, *sol.d);
    }
    if (a.count("r")) {
        const int r = as_int(a.at("r"));
        sol.center_index = r;
        for (const auto& [name, v] : a)
            if (name.rfind("beta_", 0) == 0) {
                const int k = std::stoi(name.substr(5));
                const int t = (r > 1 && s.n == 1) ? static_cast<int>(mod_floor(static_cast<std::int64_t>(k) * mod_inverse(s.q, r), r)) : 0;
                sol.slack[k] = v - Rational(t) * a.at("alpha");
            }
    }
    sol.validate();
    return sol;
}

} // namespace qfano
