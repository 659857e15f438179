#pragma once

#include "qfano/basket.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfano {

class CandidateInvalid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/*
 * Presentation conventions for the periodic Riemann-Roch term.
 *
 * A point 1/r(1,-1,b) has local class group Z/r. For the divisor nA we need
 * the multiple i with nA = i*K_X locally, and the weight w that drives the
 * j-sum. Two bookkeeping choices are left open by the formula as usually
 * quoted:
 *
 *   orientation: i = -n*q^{-1} (A is a positive multiple of -K) or
 *                i = +n*q^{-1};
 *   weight:      w = b or w = b^{-1} (mod r).
 *
 * Exactly one combination reproduces monomial counts on the terminal
 * weighted projective spaces P^3, P(1,1,1,2), P(1,1,2,3), P(1,2,3,5),
 * P(1,3,4,5), P(2,3,5,7) and P(3,4,5,7): orientation -1 and w = b. The
 * last two spaces are the ones that separate w = b from w = b^{-1}.
 */
struct RRConventions {
    int orientation = -1;
    bool weight_is_inverse = false;
};

inline constexpr RRConventions kCalibratedConventions{};

/// Torsion-free polarized candidate: -K = qA, Cl = Z.
struct FanoCandidate {
    int q = 1;
    Basket basket;
    Rational a3;

    friend auto operator<=>(const FanoCandidate&, const FanoCandidate&) = default;
};

/// Structural checks that do not need the Riemann-Roch evaluation:
/// q >= 1, a3 > 0, gcd(q, r) = 1 at every point, sigma < 24.
void check_candidate_shape(const FanoCandidate& c);

/// t with A = t(-K) in the local class group of the point, i.e. q^{-1} mod r.
/// Throws BasketError if gcd(q, r) != 1.
int local_class_of_A(int q, const QuotientPoint& point);

/// i in [0, r) with nA = i*K_X locally, per the given conventions.
int canonical_multiple(const QuotientPoint& point, int q, std::int64_t n, RRConventions conv = kCalibratedConventions);

/// Periodic contribution of one point to chi(nA).
Rational point_contribution(const QuotientPoint& point, int q, std::int64_t n, RRConventions conv = kCalibratedConventions);

/// The same term indexed directly by the local multiple i of K_X.
Rational point_contribution_for_class(const QuotientPoint& point, int i, RRConventions conv = kCalibratedConventions);

/// chi(nA) = 1 + n(n+q)(2n+q)A^3/12 + n(24 - sigma)/(12q) + sum of point terms.
Rational euler_char(const FanoCandidate& c, std::int64_t n, RRConventions conv = kCalibratedConventions);

/// dim H^0(nA): 0 for n < 0, chi(nA) otherwise. Throws CandidateInvalid if
/// chi(nA) is fractional or negative.
std::int64_t h0(const FanoCandidate& c, std::int64_t n);

struct HilbertProfile {
    FanoCandidate candidate;
    std::vector<std::int64_t> h0;  // h0[n] for n = 0..N
    int df = 0;

    friend bool operator==(const HilbertProfile&, const HilbertProfile&) = default;
};

inline constexpr int kDefaultHorizon = 24;

/// h0 table up to max(N, q-1) and df = max over 0 <= k < q of h0(kA) - 1.
HilbertProfile hilbert_profile(const FanoCandidate& c, int horizon = kDefaultHorizon);

/// chi(nA) integral for every n and h0(nA) >= 0 for 0 <= n <= horizon.
///
/// chi is a cubic plus a term of period L = lcm(r). With g(n) = chi(n+L) -
/// chi(n) a quadratic polynomial, chi is integer valued everywhere iff it is
/// integral on [0, L) and g(0), g(1), g(2) are integers, so n = 0..L+2
/// suffices.
bool integrality_valid(const FanoCandidate& c, int horizon = kDefaultHorizon);

/// chi(-kA) = 0 for 0 < k < q (Kawamata-Viehweg vanishing plus h0 = 0 on
/// anti-effective classes).
bool vanishing_valid(const FanoCandidate& c);

/// (4q^2 - 3q) A^3 <= 4 (-K).c2, the Kawamata-type bound for index q.
bool kawamata_bound_valid(const FanoCandidate& c);

/// lambda(X, kA) = q/k.
Rational lambda_of(int q, int k);

/// For q >= 3 the vanishing chi(-A) = 0 determines A^3 from (q, basket):
/// returns that value (possibly <= 0). Throws for q < 3.
Rational degree_from_vanishing(int q, const Basket& basket);

/// For q = 2 the integrality of chi(A) pins A^3 modulo 1: returns the
/// residue in [0, 1). Valid for any q with (q+1)(q+2)/12 = 1, i.e. q = 2.
Rational degree_residue_index_two(const Basket& basket);

/// Human readable candidate id, stable across runs: "q7:2-1,3-1,13-6:1/78".
std::string candidate_id(const FanoCandidate& c);

} // namespace qfano
