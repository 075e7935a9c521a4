#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "polyflow/linform.hpp"
#include "polyflow/rational.hpp"

namespace polyflow {

// The slope alpha, held only as a continued fraction digit stream
//
//     alpha = a0 + [0; a1, a2, a3, ...],   a_i >= 1.
//
// Everything downstream evaluates against convergents p_k/q_k of the
// fractional part, which bracket it:
//
//     p_{2j}/q_{2j} < {alpha} < p_{2j+1}/q_{2j+1},
//
// so any linear form u + v*alpha can be signed exactly by refining the
// bracket.  Immutable after construction apart from a lock-guarded memo of
// convergents, so concurrent readers are safe.
class ContinuedFraction {
  public:
    enum class Kind { Finite, Periodic, Constant };

    static ContinuedFraction from_digits(std::vector<long long> digits, long long a0 = 0);
    static ContinuedFraction periodic(std::vector<long long> pre, std::vector<long long> period,
                                      long long a0 = 0);
    static ContinuedFraction constant(long long a, long long a0 = 0);

    // Mini-format: "[a1,a2,...]", "[pre;(period)]", "const:a", optional "+a0".
    static ContinuedFraction parse(const std::string& spec);
    std::string to_string() const;

    long long a0() const { return a0_; }
    Kind kind() const { return kind_; }

    // Largest digit index this stream can serve.
    long long depth() const;

    // a_i for i >= 1; throws DepthExhausted past depth().
    long long digit(long long i) const;

    // Largest digit over the whole representable stream (finite list: all
    // entries; periodic: preperiod + period; constant: the digit).
    long long digit_bound() const;

    // Convergent numerator/denominator of the fractional part, k >= 0:
    // p_0 = 0, q_0 = 1, p_1 = 1, q_1 = a_1, then the standard recurrence.
    Int p(long long k) const;
    Int q(long long k) const;

    // Open bracket around {alpha} from convergents of order k, k+1
    // (returned as a closed RealInterval; {alpha} lies strictly inside).
    RealInterval bracket(long long k) const;

    // eta_k = q_k * alpha - p_k as an exact linear form; sign is (-1)^k.
    LinForm eta(long long k) const;
    // |eta_k| = ||q_k alpha|| as an exact linear form.
    LinForm abs_eta(long long k) const;

    // ---- exact comparison protocol on linear forms --------------------

    // Exact sign of f evaluated at this alpha.  Depth is refined on demand
    // up to max_depth extra digits (default kPrecisionCap), after which
    // PrecisionExhausted (irrational alpha: cannot happen before the digit
    // stream itself runs dry, which raises DepthExhausted).
    int sign(const LinForm& f) const;
    bool less(const LinForm& f, const LinForm& g) const { return sign(f - g) < 0; }
    bool leq(const LinForm& f, const LinForm& g) const { return sign(f - g) <= 0; }

    Int floor_of(const LinForm& f) const;
    LinForm frac_of(const LinForm& f) const;   // f - floor(f), in [0,1)
    LinForm norm_of(const LinForm& f) const;   // ||f|| = min({f}, 1-{f})

    // Rational enclosure of f with width <= width_goal.
    RealInterval approx(const LinForm& f, const Rat& width_goal) const;

    // largest k with q_k <= N (N >= 1)
    long long convergent_index_below(const Int& N) const;

    static constexpr long long kPrecisionCap = 256;
    static constexpr long long kDepthCap = 1000000;

  private:
    struct Memo {
        std::mutex mu;
        std::vector<Int> p, q;
        std::atomic<long long> sign_hint{2};  // starting depth for sign refinement
    };

    ContinuedFraction() : memo_(std::make_shared<Memo>()) {}
    void ensure(long long k) const;  // memoize convergents through index k

    Kind kind_ = Kind::Finite;
    long long a0_ = 0;
    std::vector<long long> pre_;     // Finite: all digits; Periodic: preperiod
    std::vector<long long> period_;  // Periodic only
    long long const_digit_ = 0;      // Constant only

    std::shared_ptr<Memo> memo_;  // shared between copies of the same stream
};

// Convergent report: exact p_k, q_k plus an enclosure of eta_k whose width
// is at most |eta_k| * 2^-guard.
struct ConvergentReport {
    Int p;
    Int q;
    RealInterval eta;
};
ConvergentReport convergents(const ContinuedFraction& cf, long long k, int guard = 30);

// Enclosure of {q*alpha} of width <= width_goal.
RealInterval fractional_part(const ContinuedFraction& cf, const Int& q,
                             const Rat& width_goal = Rat(1, 1000000));

// Continued fraction of 1 - {alpha} (finite stream, materialized to a depth
// far beyond anything the experiments consume).
ContinuedFraction one_minus(const ContinuedFraction& cf, long long depth = 500);

}  // namespace polyflow
