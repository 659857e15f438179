#include "qfano/calibration.hpp"

#include "qfano/catalog.hpp"

namespace qfano {

namespace {

void count_from(const std::vector<int>& w, std::size_t i, int degree, int top, std::vector<std::int64_t>& out)
{
    if (i + 1 == w.size()) {
        // the last exponent is determined when it divides the remainder
        for (int d = degree; d <= top; d += w[i])
            ++out[static_cast<std::size_t>(d)];
        return;
    }
    for (int d = degree; d <= top; d += w[i])
        count_from(w, i + 1, d, top, out);
}

} // namespace

std::string WeightedProjectiveSpace::name() const
{
    std::string s = "P(";
    for (std::size_t i = 0; i < weights.size(); ++i)
        s += (i ? "," : "") + std::to_string(weights[i]);
    return s + ")";
}

FanoCandidate WeightedProjectiveSpace::candidate() const
{
    if (weights.size() != 4)
        throw std::invalid_argument(name() + " is not a 3-space");
    int q = 0;
    std::int64_t prod = 1;
    Basket basket;
    for (std::size_t i = 0; i < 4; ++i) {
        q += weights[i];
        prod *= weights[i];
        if (weights[i] == 1)
            continue;
        std::vector<int> rest;
        for (std::size_t j = 0; j < 4; ++j)
            if (j != i)
                rest.push_back(weights[j]);
        basket.add(normalize_triple(weights[i], rest[0], rest[1], rest[2]));
    }
    return FanoCandidate{q, basket, Rational(1, prod)};
}

std::vector<std::int64_t> monomial_counts(const std::vector<int>& weights, int top)
{
    if (weights.empty() || top < 0)
        throw std::invalid_argument("monomial count needs weights and top >= 0");
    for (int w : weights)
        if (w < 1)
            throw std::invalid_argument("weights must be positive");
    std::vector<std::int64_t> out(static_cast<std::size_t>(top) + 1, 0);
    count_from(weights, 0, 0, top, out);
    return out;
}

const std::vector<WeightedProjectiveSpace>& calibration_spaces()
{
    static const std::vector<WeightedProjectiveSpace> spaces = {
        {{1, 1, 1, 1}}, {{1, 1, 1, 2}}, {{1, 1, 2, 3}}, {{1, 2, 3, 5}}, {{1, 3, 4, 5}},
    };
    return spaces;
}

std::vector<CalibrationRow> run_calibration(int top)
{
    std::vector<CalibrationRow> rows;
    for (const auto& s : calibration_spaces()) {
        const FanoCandidate c = s.candidate();
        const auto counts = monomial_counts(s.weights, top);
        CalibrationRow row{s.name(), candidate_id(c), top + 1, -1};
        for (int n = 0; n <= top && row.first_mismatch < 0; ++n) {
            try {
                if (h0(c, n) != counts[static_cast<std::size_t>(n)])
                    row.first_mismatch = n;
            } catch (const CandidateInvalid&) {
                row.first_mismatch = n;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace qfano
