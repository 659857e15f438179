#include "qfano/search.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace qfano {

void SearchConfig::validate() const
{
    if (q_min < 2)
        throw std::invalid_argument("q_min must be at least 2");
    if (q_max < q_min)
        throw std::invalid_argument("q_max must not be below q_min");
    if (degree_cap.sign() <= 0)
        throw std::invalid_argument("degree cap must be positive");
    if (horizon < 0)
        throw std::invalid_argument("horizon must be non-negative");
    if (grid_denominator && *grid_denominator <= 0)
        throw std::invalid_argument("grid denominator must be positive");
    if (!require_vanishing && policy == DegreePolicy::Solved && q_max >= 3)
        throw std::invalid_argument("the solved degree policy needs the vanishing condition for q >= 3");
}

std::string SearchConfig::describe() const
{
    std::string s = "q=" + std::to_string(q_min) + ".." + std::to_string(q_max);
    s += " cap=" + degree_cap.to_string();
    s += policy == DegreePolicy::Solved ? " policy=solved" : " policy=grid";
    if (grid_denominator)
        s += " D=" + std::to_string(*grid_denominator);
    s += " horizon=" + std::to_string(horizon);
    if (df_filter)
        s += " df=" + std::to_string(*df_filter);
    if (!strict_kc2)
        s += " kc2>=0";
    if (!require_vanishing)
        s += " no-vanishing";
    if (!require_kawamata_bound)
        s += " no-kawamata";
    if (!allowed_points.empty())
        s += " restricted-points=" + std::to_string(allowed_points.size());
    return s;
}

bool passes_filters(const FanoCandidate& c, const SearchConfig& cfg)
{
    if (c.a3.sign() <= 0)
        return false;
    const std::int64_t q = c.q;
    if (Rational(q * q * q) * c.a3 > cfg.degree_cap)
        return false;
    if (cfg.require_kawamata_bound && !kawamata_bound_valid(c))
        return false;
    if (cfg.require_vanishing && !vanishing_valid(c))
        return false;
    return integrality_valid(c, cfg.horizon);
}

namespace {

struct Cell {
    int q;
    const Basket* basket;
};

std::int64_t grid_denominator_for(int q, const Basket& basket)
{
    // chi(A) integral forces A^3 into Z / (q(q+1)(q+2) L); the 12*prod(r)
    // grid is folded in so that the result refines both.
    std::int64_t prod = 1;
    for (const auto& p : basket.points())
        prod *= p.r;
    const std::int64_t q64 = q;
    return std::lcm(12 * prod, q64 * (q64 + 1) * (q64 + 2) * basket.period());
}

void degree_values(int q, const Basket& basket, const SearchConfig& cfg, std::vector<Rational>& out)
{
    out.clear();
    const std::int64_t q3 = static_cast<std::int64_t>(q) * q * q;
    const Rational max_a3 = cfg.degree_cap / Rational(q3);
    if (q >= 3) {
        out.push_back(degree_from_vanishing(q, basket));
        return;
    }
    // q = 2: A^3 runs through residue + Z
    const Rational residue = degree_residue_index_two(basket);
    for (Rational a3 = residue; a3 <= max_a3; a3 += Rational(1)) {
        if (a3.sign() <= 0)
            continue;
        if (cfg.require_kawamata_bound && !kawamata_bound_valid({q, basket, a3}))
            break;
        out.push_back(a3);
    }
}

// Superset grid scan. chi(nA) = chi_0(n) + P(n) A^3 with P the cubic
// n(n+q)(2n+q)/12. With A^3 = m/D each chi(nA) is (u + v m) / w for fixed
// integers, so chi_0 is tabulated once per basket and the scan is integer only.
void grid_scan(int q, const Basket& basket, const SearchConfig& cfg, std::vector<HilbertProfile>& out)
{
    if (std::any_of(basket.points().begin(), basket.points().end(), [&](const QuotientPoint& p) { return std::gcd(q, p.r) != 1; }))
        return;
    const std::int64_t q64 = q;
    const std::int64_t d = cfg.grid_denominator ? *cfg.grid_denominator : grid_denominator_for(q, basket);
    const Rational max_a3 = cfg.degree_cap / Rational(q64 * q64 * q64);
    std::int64_t m_max = (max_a3 * Rational(d)).floor();
    if (cfg.require_kawamata_bound) {
        const Rational bound = Rational(4) * (Rational(24) - sigma(basket)) / Rational(4 * q64 * q64 - 3 * q64);
        m_max = std::min(m_max, (bound * Rational(d)).floor());
    }
    const std::int64_t hi = std::max<std::int64_t>(basket.period() + 2, cfg.horizon);

    struct Affine {
        std::int64_t n;
        __int128 u, v, w;
    };
    const FanoCandidate zero{q, basket, Rational(0)};
    auto affine = [&](std::int64_t n) {
        const Rational c0 = euler_char(zero, n);
        const Rational p = Rational(n * (n + q64) * (2 * n + q64), 12) / Rational(d);
        const __int128 w = std::lcm(c0.den(), p.den());
        return Affine{n, c0.num() * (w / c0.den()), p.num() * (w / p.den()), w};
    };
    std::vector<Affine> zeros, values;
    if (cfg.require_vanishing)
        for (std::int64_t k = 1; k < q; ++k)
            zeros.push_back(affine(-k));
    for (std::int64_t n = 0; n <= hi; ++n)
        values.push_back(affine(n));

    for (std::int64_t m = 1; m <= m_max; ++m) {
        bool ok = std::all_of(zeros.begin(), zeros.end(), [m](const Affine& f) { return f.u + f.v * m == 0; });
        for (std::size_t i = 0; ok && i < values.size(); ++i) {
            const auto& f = values[i];
            const __int128 top = f.u + f.v * m;
            ok = top % f.w == 0 && (f.n > cfg.horizon || top >= 0);
        }
        if (!ok)
            continue;
        auto profile = hilbert_profile(FanoCandidate{q, basket, Rational(m, d)}, cfg.horizon);
        if (cfg.df_filter && profile.df != *cfg.df_filter)
            continue;
        out.push_back(std::move(profile));
    }
}

void run_cells(const std::vector<Cell>& cells, std::size_t begin, std::size_t step, const SearchConfig& cfg,
               std::vector<HilbertProfile>& out)
{
    std::vector<Rational> degrees;
    for (std::size_t i = begin; i < cells.size(); i += step) {
        const Cell& cell = cells[i];
        if (cfg.policy == DegreePolicy::SupersetGrid) {
            grid_scan(cell.q, *cell.basket, cfg, out);
            continue;
        }
        degree_values(cell.q, *cell.basket, cfg, degrees);
        for (const auto& a3 : degrees) {
            const FanoCandidate c{cell.q, *cell.basket, a3};
            if (!passes_filters(c, cfg))
                continue;
            auto profile = hilbert_profile(c, cfg.horizon);
            if (cfg.df_filter && profile.df != *cfg.df_filter)
                continue;
            out.push_back(std::move(profile));
        }
    }
}

bool same_series(const HilbertProfile& x, const HilbertProfile& y)
{
    if (x.candidate.q != y.candidate.q || x.candidate.a3 != y.candidate.a3)
        return false;
    // equal cubic parts; the difference is linear plus a term of period L,
    // so agreement on [0, L+1] forces agreement everywhere
    const std::int64_t l = std::lcm(x.candidate.basket.period(), y.candidate.basket.period());
    for (std::int64_t n = 0; n <= l + 1; ++n)
        if (euler_char(x.candidate, n) != euler_char(y.candidate, n))
            return false;
    return true;
}

} // namespace

SearchReport enumerate_candidates(const SearchConfig& config)
{
    config.validate();
    SearchReport report;
    report.config = config;
    report.provenance = "search " + config.describe();

    std::map<int, std::vector<Basket>> baskets_by_q;
    std::vector<Cell> cells;
    for (int q = config.q_min; q <= config.q_max; ++q) {
        auto baskets = enumerate_baskets(BasketEnumeration{Rational(24), q, config.strict_kc2});
        if (!config.allowed_points.empty()) {
            std::set<QuotientPoint> allowed;
            for (const auto& p : config.allowed_points)
                allowed.insert(make_point(p.r, p.b));
            std::erase_if(baskets, [&](const Basket& b) {
                return std::any_of(b.points().begin(), b.points().end(), [&](const QuotientPoint& p) { return !allowed.count(p); });
            });
        }
        baskets_by_q.emplace(q, std::move(baskets));
    }
    for (const auto& [q, baskets] : baskets_by_q)
        for (const auto& b : baskets)
            cells.push_back({q, &b});

    unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::vector<HilbertProfile>> partial(workers);
    if (workers == 1) {
        run_cells(cells, 0, 1, config, partial[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run_cells, std::cref(cells), w, workers, std::cref(config), std::ref(partial[w]));
        for (auto& t : pool)
            t.join();
    }
    for (auto& part : partial)
        for (auto& p : part)
            report.candidates.push_back(std::move(p));
    std::sort(report.candidates.begin(), report.candidates.end(),
              [](const HilbertProfile& a, const HilbertProfile& b) { return a.candidate < b.candidate; });
    report.candidates.erase(std::unique(report.candidates.begin(), report.candidates.end(),
                                        [](const HilbertProfile& a, const HilbertProfile& b) { return a.candidate == b.candidate; }),
                            report.candidates.end());
    report.distinct_hilbert_series_count = count_distinct_hilbert_series(report.candidates);
    return report;
}

int count_distinct_hilbert_series(const std::vector<HilbertProfile>& profiles)
{
    // bucket by the cheap key first, then split buckets exactly
    std::map<std::tuple<int, Rational, std::vector<std::int64_t>>, std::vector<const HilbertProfile*>> buckets;
    for (const auto& p : profiles)
        buckets[{p.candidate.q, p.candidate.a3, p.h0}].push_back(&p);
    int classes = 0;
    for (const auto& [key, members] : buckets) {
        std::vector<const HilbertProfile*> reps;
        for (const auto* m : members)
            if (std::none_of(reps.begin(), reps.end(), [&](const HilbertProfile* r) { return same_series(*r, *m); }))
                reps.push_back(m);
        classes += static_cast<int>(reps.size());
    }
    return classes;
}

AssertionRecord recheck_validity(const SearchReport& report)
{
    AssertionRecord rec{"post-hoc validity", true, ""};
    const auto& cfg = report.config;
    for (const auto& p : report.candidates) {
        const auto& c = p.candidate;
        std::string why;
        if (c.q < cfg.q_min || c.q > cfg.q_max)
            why = "q outside range";
        else if (!passes_filters(c, cfg))
            why = "fails a validity predicate";
        else if (hilbert_profile(c, cfg.horizon) != p)
            why = "stored profile differs from recomputation";
        else if (cfg.df_filter && p.df != *cfg.df_filter)
            why = "df filter";
        if (!why.empty()) {
            rec.passed = false;
            rec.detail = candidate_id(c) + ": " + why;
            return rec;
        }
    }
    rec.detail = std::to_string(report.candidates.size()) + " candidates rechecked";
    return rec;
}

std::vector<AssertionRecord> check_prop_search1(const SearchReport& report)
{
    auto h = [](const HilbertProfile& p, int n) { return p.h0.at(static_cast<std::size_t>(n)); };
    struct Sub {
        std::string name;
        std::function<bool(const HilbertProfile&)> holds;
    };
    const std::vector<Sub> subs = {
        {"(i) q <= 7, q != 6, at most one point of index >= 8",
         [](const HilbertProfile& p) {
             const auto& c = p.candidate;
             const auto big = std::count_if(c.basket.points().begin(), c.basket.points().end(),
                                            [](const QuotientPoint& pt) { return pt.r >= 8; });
             return c.q <= 7 && c.q != 6 && big <= 1;
         }},
        {"(ii) q = 7: h0(A) = 0, h0(2A) = h0(3A) = 1",
         [&](const HilbertProfile& p) { return p.candidate.q != 7 || (h(p, 1) == 0 && h(p, 2) == 1 && h(p, 3) == 1); }},
        {"(iii) q = 5: h0(2A) = 1, h0(3A) = 2",
         [&](const HilbertProfile& p) { return p.candidate.q != 5 || (h(p, 2) == 1 && h(p, 3) == 2); }},
        {"(iv) q = 4: h0(A) <= 1, 2 <= h0(2A) <= 3; h0(2A) = 3 only for A^3 = 2/11, B = (11)",
         [&](const HilbertProfile& p) {
             if (p.candidate.q != 4)
                 return true;
             if (h(p, 1) > 1 || h(p, 2) < 2 || h(p, 2) > 3)
                 return false;
             if (h(p, 2) == 3)
                 return h(p, 1) == 1 && p.candidate.a3 == Rational(2, 11) && p.candidate.basket.indices() == std::vector<int>{11};
             return true;
         }},
    };
    std::vector<AssertionRecord> out;
    AssertionRecord summary{"Prop search1", true, ""};
    for (const auto& sub : subs) {
        AssertionRecord rec{sub.name, true, "holds on " + std::to_string(report.candidates.size()) + " candidates"};
        for (const auto& p : report.candidates)
            if (!sub.holds(p)) {
                rec.passed = false;
                rec.detail = "first violation: " + candidate_id(p.candidate);
                break;
            }
        summary.passed = summary.passed && rec.passed;
        out.push_back(std::move(rec));
    }
    std::set<int> qs;
    for (const auto& p : report.candidates)
        qs.insert(p.candidate.q);
    std::string qlist;
    for (int q : qs)
        qlist += (qlist.empty() ? "" : ",") + std::to_string(q);
    summary.detail = "q values {" + qlist + "}";
    out.insert(out.begin(), std::move(summary));
    return out;
}

std::vector<PencilHit> check_pencil_pattern(const SearchReport& report)
{
    std::vector<PencilHit> hits;
    for (const auto& p : report.candidates) {
        const int q = p.candidate.q;
        for (int k = 1; 2 * k < q; ++k) {
            // the table may stop short of 2k when the horizon is small
            const auto v2k = 2 * k < static_cast<int>(p.h0.size()) ? p.h0[static_cast<std::size_t>(2 * k)] : h0(p.candidate, 2 * k);
            if (p.h0[static_cast<std::size_t>(k)] == 2 && v2k == 3)
                hits.push_back({candidate_id(p.candidate), k, report.provenance});
        }
    }
    return hits;
}

int applicability_count(const SearchReport& report)
{
    return static_cast<int>(std::count_if(report.candidates.begin(), report.candidates.end(), [](const HilbertProfile& p) { return p.df >= 2; }));
}

int applicability_count_bounded(const SearchReport& report)
{
    return static_cast<int>(std::count_if(report.candidates.begin(), report.candidates.end(),
                                          [](const HilbertProfile& p) { return p.df >= 2 && p.df <= 3; }));
}

std::string toggle_name(ConfigToggle t)
{
    switch (t) {
    case ConfigToggle::KawamataBound:
        return "kawamata-bound";
    case ConfigToggle::StrictKc2:
        return "strict-kc2";
    case ConfigToggle::DegreeCapTimesTen:
        return "degree-cap-x10";
    }
    return "unknown";
}

SearchConfig apply_toggle(SearchConfig config, ConfigToggle t)
{
    switch (t) {
    case ConfigToggle::KawamataBound:
        config.require_kawamata_bound = !config.require_kawamata_bound;
        break;
    case ConfigToggle::StrictKc2:
        config.strict_kc2 = !config.strict_kc2;
        break;
    case ConfigToggle::DegreeCapTimesTen:
        config.degree_cap = config.degree_cap * Rational(10);
        break;
    }
    return config;
}

ConstraintDiff constraint_diff(const SearchReport& base, ConfigToggle toggle)
{
    const auto other = enumerate_candidates(apply_toggle(base.config, toggle));
    ConstraintDiff diff;
    diff.toggle = toggle_name(toggle);
    diff.base_count = base.candidates.size();
    diff.toggled_count = other.candidates.size();
    std::set<FanoCandidate> in_base, in_other;
    for (const auto& p : base.candidates)
        in_base.insert(p.candidate);
    for (const auto& p : other.candidates)
        in_other.insert(p.candidate);
    for (const auto& c : in_base)
        if (!in_other.count(c))
            diff.only_in_base.push_back(candidate_id(c));
    for (const auto& c : in_other)
        if (!in_base.count(c))
            diff.only_in_toggled.push_back(candidate_id(c));
    return diff;
}

} // namespace qfano
