#pragma once

#include "qfano/orbifold_rr.hpp"

#include <string>
#include <vector>

namespace qfano {

/// Well-formed weighted projective 3-space with isolated terminal points.
struct WeightedProjectiveSpace {
    std::vector<int> weights;

    std::string name() const;
    /// q = sum of weights, A^3 = 1/prod, one point 1/a(other weights) per
    /// weight a > 1.
    FanoCandidate candidate() const;
};

/// Number of monomials of weighted degree n, n = 0..top, by direct
/// enumeration of exponent vectors.
std::vector<std::int64_t> monomial_counts(const std::vector<int>& weights, int top);

/// P^3, P(1,1,1,2), P(1,1,2,3), P(1,2,3,5), P(1,3,4,5).
const std::vector<WeightedProjectiveSpace>& calibration_spaces();

struct CalibrationRow {
    std::string space;
    std::string candidate_id;
    int checked = 0;
    int first_mismatch = -1;  // -1 when h0 equals the monomial count throughout
    bool passed() const { return first_mismatch < 0; }
};

std::vector<CalibrationRow> run_calibration(int top = kDefaultHorizon);

} // namespace qfano
