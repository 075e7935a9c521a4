#pragma once

#include <array>
#include <vector>

#include "polyflow/numeration.hpp"

namespace polyflow {

// Gap structure of the circle partition by {0, alpha, ..., N*alpha}:
// writing N = mu*q_k + q_{k-1} + r with 1 <= mu <= a_{k+1}, 0 <= r < q_k,
// the at most three gap lengths are
//   ||q_k alpha||                         with multiplicity N + 1 - q_k,
//   ||q_{k-1} alpha|| - mu ||q_k alpha||  with multiplicity r + 1,
//   ||q_{k-1} alpha|| - (mu-1)||q_k a||   with multiplicity q_k - r - 1.
struct ThreeDistanceReport {
    struct Gap {
        LinForm length;
        RealInterval length_iv;
        Int multiplicity;
    };
    long long k;
    Int mu;
    Int r;
    std::vector<Gap> gaps;  // zero-multiplicity gap omitted
};

ThreeDistanceReport three_distance(const ContinuedFraction& cf, const Int& N);

// Partition A_k(alpha) of [0,1) by the q_{k+1} points {q*alpha},
// -1 <= q <= q_{k+1} - 2.  Gaps take exactly two lengths: short ||q_k a||
// and long ||q_{k+1} a|| + ||q_k a||.
struct TwoDistancePartition {
    long long k;
    Int count;                  // q_{k+1}
    std::vector<Int> order;     // indices in circular order, starting at q = 0
    std::vector<int> gap_class; // 0 short / 1 long, between order[i] and order[i+1]
    LinForm short_gap;
    LinForm long_gap;
};

// Enumerates the full circular order; guarded against huge k.
TwoDistancePartition two_distance_partition(const ContinuedFraction& cf, long long k);

// O(k) neighbor steps on the index set [lo, lo + q_{k+1} - 1] (lo = -1 for
// A_k itself, lo = 0 for its rotation by alpha).  Sets long_gap when the
// step crosses the single long-gap wraparound.
Int partition_successor(const ContinuedFraction& cf, long long k, const Int& q, long long lo,
                        bool& long_gap);
Int partition_predecessor(const ContinuedFraction& cf, long long k, const Int& q, long long lo,
                          bool& long_gap);

struct BadlyApproximableReport {
    bool all_pass;
    Int witness_n;            // argmin of n * ||n alpha||
    RealInterval min_value;   // enclosure of the minimal n * ||n alpha||
};

// Verifies n * ||n alpha|| * (A+2) > 1 for 1 <= n <= n_max.
BadlyApproximableReport badly_approximable_check(const ContinuedFraction& cf, long long A,
                                                 long long n_max);

// Per-k diagnostics for the separation inequalities: h_minus/h_plus are the
// indices h with {h*alpha} the two neighbors of the singularity
// {r_i b - alpha} in A_k(alpha).
struct SeparationReport {
    long long k;
    Int q_k1;                          // q_{k+1}
    Rat delta;
    std::vector<std::array<Int, 2>> h; // per division number: {h_minus, h_plus}
    bool separated_from_edges;         // delta q_{k+1} < h < (1-delta) q_{k+1}
    bool pairwise_separated;           // |h - h'| > delta q_{k+1}
    bool in_K0;
};

std::vector<SeparationReport> separation_scan(const ContinuedFraction& cf,
                                              const std::vector<Rat>& division_numbers,
                                              const AlphaExpansion& b, long long k_min,
                                              long long k_max, long long hypothesis_bound = 64);

}  // namespace polyflow
