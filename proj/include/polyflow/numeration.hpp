#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "polyflow/cf.hpp"

namespace polyflow {

// Digit vector (b_0, ..., b_k) of N >= 0 in the alpha-numeration
//
//     N = sum_i b_i q_i,  0 <= b_0 < a_1,  0 <= b_i <= a_{i+1},  b_k > 0,
//     b_{i-1} = 0 whenever b_i = a_{i+1},
//
// so q_k <= N < q_{k+1}.  N = 0 is the empty digit vector.
struct OstrowskiRep {
    Int value;
    std::vector<long long> digits;
};

OstrowskiRep ostrowski_encode(const ContinuedFraction& cf, const Int& N);
Int ostrowski_decode(const ContinuedFraction& cf, const OstrowskiRep& rep);

// Throws IllegalDigits unless the vector satisfies the constraints above
// (trailing zeros are tolerated when allow_trailing_zero is set, which the
// encoder itself never produces).
void ostrowski_check(const ContinuedFraction& cf, const std::vector<long long>& digits,
                     bool allow_trailing_zero = false);

// Digit vector (c_0, ..., c_K) of a real beta in (-alpha, 1-alpha),
//
//     beta = sum_i c_i eta_i,
//
// same digit constraints as the integer side.  Only a finite prefix is
// stored; `rule` (when present) extends the digits to arbitrary depth, and
// tail_bound encloses the truncated tail sum_{i>K} c_i eta_i.
struct AlphaExpansion {
    std::vector<long long> digits;
    std::function<long long(long long)> rule;
    RealInterval tail_bound;

    bool has_rule() const { return static_cast<bool>(rule); }
    // c_i for any i >= 0; beyond the stored prefix this consults the rule
    // and throws PrecisionExhausted if there is none.
    long long digit(long long i) const;
};

void alpha_digits_check(const ContinuedFraction& cf, const std::vector<long long>& digits);

// sum_{i<T} c_i eta_i as an exact linear form.
LinForm alpha_prefix(const ContinuedFraction& cf, const AlphaExpansion& e, long long T);

// Exact bounds [-A, B] (linear forms) for any legal tail sum over indices
// >= T:  T even -> A = |eta_T|, B = |eta_{T-1}|;  T odd -> swapped.
std::pair<LinForm, LinForm> alpha_tail_range(const ContinuedFraction& cf, long long T);

// Rational enclosure of the represented beta using digits below depth T
// (extending by rule if needed) plus the tail range.
RealInterval alpha_value(const ContinuedFraction& cf, const AlphaExpansion& e, long long T,
                         const Rat& width_goal = Rat(1, 1000000));

// Greedy digit extraction for an interval-valued beta; K+1 digits.
AlphaExpansion alpha_expand(const ContinuedFraction& cf, const RealInterval& beta, long long K);

// Digit-rule input: validate the prefix and attach the rule for on-demand
// deepening.
AlphaExpansion alpha_expand_rule(const ContinuedFraction& cf,
                                 std::function<long long(long long)> rule, long long K);

// beta in (0, 1-alpha) iff the least i with c_i >= 1 is even; scans up to
// scan_depth digits and throws PrecisionExhausted if all of them vanish and
// no rule can settle it.
bool beta_in_upper_range(const ContinuedFraction& cf, const AlphaExpansion& e,
                         long long scan_depth = 256);

}  // namespace polyflow
