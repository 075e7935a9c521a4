#include "polyflow/parity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace polyflow {

namespace {

// Correction term at index ell read off the digits alone: the partial-sum
// comparisons reduce to the first index below ell where the digit vectors
// disagree.
int delta_from_digits(const std::vector<long long>& b, const std::vector<long long>& c,
                      long long ell) {
    if (ell % 2 == 0) {
        if (b[ell] >= c[ell]) return 0;
        for (long long m = ell - 1; m >= 0; --m) {
            if (c[m] < b[m]) return 1;
            if (c[m] > b[m]) return 0;
        }
        return 0;
    }
    if (c[ell] >= b[ell]) return 0;
    for (long long m = ell - 1; m >= 0; --m) {
        if (b[m] < c[m]) return -1;
        if (b[m] > c[m]) return 0;
    }
    return -1;  // every digit below ell agrees
}

// Correction term computed literally from N_j = sum_{i<=j} b_i q_i and
// C_j = sum_{i<=j} c_i q_i.
int delta_from_sums(const std::vector<Int>& N, const std::vector<Int>& C, long long ell) {
    if (ell % 2 == 0) {
        if (C[ell - 1] < N[ell - 1] && N[ell] < C[ell]) return 1;
        return 0;
    }
    if (N[ell - 1] <= C[ell - 1] && C[ell] < N[ell]) return -1;
    return 0;
}

void validate_input(const ParityInput& in) {
    size_t k1 = in.b.size();
    if (k1 == 0 || in.cprime.size() != k1 || in.cdouble.size() != k1)
        throw PreconditionViolated("parity input: digit vectors must share a length >= 1");
    try {
        ostrowski_check(in.alpha, in.b, true);
        alpha_digits_check(in.alpha, in.cprime);
        alpha_digits_check(in.alpha, in.cdouble);
    } catch (const IllegalDigits& e) {
        throw PreconditionViolated(e.what());
    }
    for (size_t i = 1; i < k1; ++i)
        if (in.b[i] >= in.alpha.digit((long long)i + 1))
            throw PreconditionViolated("parity input: b_i must stay below a_{i+1}");
    for (const std::vector<long long>* c : {&in.cprime, &in.cdouble})
        for (size_t i = 0; i < k1; ++i) {
            if ((*c)[i] % 2 != 0)
                throw PreconditionViolated("parity input: odd gate digit");
            if (i % 2 == 0 && (*c)[i] == 0)
                throw PreconditionViolated("parity input: zero gate digit at even index");
        }
}

long long min_sum(const std::vector<long long>& b, const std::vector<long long>& c) {
    long long s = 0;
    for (size_t i = 0; i < b.size(); ++i) s += std::min(b[i], c[i]);
    return s;
}

// Raw parity without input validation, shared by the census loops where
// the digits come from the encoder and the gate rules.
int parity_from_digits(const std::vector<long long>& b, const std::vector<long long>& cp,
                       const std::vector<long long>& cpp) {
    long long total = min_sum(b, cp) + min_sum(b, cpp);
    long long k = (long long)b.size() - 1;
    for (long long ell = 1; ell <= k; ++ell)
        total += delta_from_digits(b, cp, ell) + delta_from_digits(b, cpp, ell);
    return (int)(((total % 2) + 2) % 2);
}

// Lazily deepened enclosure of a gate value, for exact membership tests
// t < beta with t a linear form.
class GateComparator {
  public:
    GateComparator(const ContinuedFraction& cf, const AlphaExpansion& beta)
        : cf_(cf), beta_(beta) {
        if (!beta_.has_rule()) {
            exact_ = true;
            value_ = alpha_prefix(cf_, beta_, (long long)beta_.digits.size());
        }
    }

    bool below(const LinForm& t) const {
        if (exact_) return cf_.less(t, value_);
        long long t_max = std::min<long long>(512, cf_.depth() - 1);
        for (long long depth = 8;; depth *= 2) {
            if (depth > t_max) throw PrecisionExhausted("gate membership undecided");
            ensure(depth);
            const Level& lv = levels_[level_index(depth)];
            if (cf_.less(t, lv.lo)) return true;
            if (cf_.less(lv.hi, t)) return false;
        }
    }

  private:
    struct Level {
        LinForm lo, hi;
    };

    static size_t level_index(long long depth) {
        size_t i = 0;
        while (depth > 8) {
            depth /= 2;
            ++i;
        }
        return i;
    }

    void ensure(long long depth) const {
        while (levels_.size() <= level_index(depth)) {
            long long T = 8LL << levels_.size();
            LinForm prefix = alpha_prefix(cf_, beta_, T);
            auto tail = alpha_tail_range(cf_, T);
            levels_.push_back({prefix - tail.first, prefix + tail.second});
        }
    }

    const ContinuedFraction& cf_;
    AlphaExpansion beta_;
    bool exact_ = false;
    LinForm value_;
    mutable std::vector<Level> levels_;
};

Int uniform_int_below(std::mt19937_64& rng, const Int& n) {
    if (n <= 0) throw OutOfRange("uniform draw from an empty range");
    size_t bits = msb(n) + 1;
    size_t words = (bits + 63) / 64;
    for (;;) {
        Int x = 0;
        for (size_t w = 0; w < words; ++w) x = (x << 64) | Int(rng());
        x >>= words * 64 - bits;
        if (x < n) return x;
    }
}

// Evaluates the formula for one N; returns -1 when the representation
// falls outside b_i < a_{i+1}.
int census_parity(const ContinuedFraction& cf, const GatePair& gates, const Int& N) {
    if (N == 0) return 0;
    OstrowskiRep rep = ostrowski_encode(cf, N);
    long long top = (long long)rep.digits.size() - 1;
    for (long long i = 1; i <= top; ++i)
        if (rep.digits[i] >= cf.digit(i + 1)) return -1;
    // correction terms can reach two indices past the highest digit of N;
    // beyond that they vanish, so this truncation is exact
    long long k = top + 2;
    std::vector<long long> b = rep.digits;
    b.resize(k + 1, 0);
    std::vector<long long> cp(k + 1), cpp(k + 1);
    for (long long i = 0; i <= k; ++i) {
        cp[i] = gates.beta_prime.digit(i);
        cpp[i] = gates.beta_double.digit(i);
    }
    return parity_from_digits(b, cp, cpp);
}

// Exact certificate that the value of e1 is strictly below that of e2,
// where either expansion may be a bare linear form (empty rule, exact).
struct GateBound {
    LinForm lo, hi;
};

GateBound enclose(const ContinuedFraction& cf, const AlphaExpansion& e, long long T) {
    if (!e.has_rule()) {
        LinForm v = alpha_prefix(cf, e, (long long)e.digits.size());
        return {v, v};
    }
    LinForm prefix = alpha_prefix(cf, e, T);
    auto tail = alpha_tail_range(cf, T);
    return {prefix - tail.first, prefix + tail.second};
}

bool certify_less(const ContinuedFraction& cf, const AlphaExpansion& e1,
                  const AlphaExpansion& e2) {
    long long t_max = std::min<long long>(256, cf.depth() - 1);
    for (long long T = 4; T <= t_max; T *= 2) {
        GateBound a = enclose(cf, e1, T);
        GateBound b = enclose(cf, e2, T);
        if (cf.less(a.hi, b.lo)) return true;
    }
    return false;
}

std::string int_str(const Int& n) { return n.str(); }

}  // namespace

int parity_formula(const ParityInput& in) {
    validate_input(in);
    return parity_from_digits(in.b, in.cprime, in.cdouble);
}

int parity_formula_partial_sums(const ParityInput& in) {
    validate_input(in);
    long long k = (long long)in.b.size() - 1;
    std::vector<Int> N(k + 1), Cp(k + 1), Cpp(k + 1);
    Int n = 0, cp = 0, cpp = 0;
    for (long long j = 0; j <= k; ++j) {
        Int qj = in.alpha.q(j);
        n += in.b[j] * qj;
        cp += in.cprime[j] * qj;
        cpp += in.cdouble[j] * qj;
        N[j] = n;
        Cp[j] = cp;
        Cpp[j] = cpp;
    }
    long long total = min_sum(in.b, in.cprime) + min_sum(in.b, in.cdouble);
    for (long long ell = 1; ell <= k; ++ell)
        total += delta_from_sums(N, Cp, ell) + delta_from_sums(N, Cpp, ell);
    return (int)(((total % 2) + 2) % 2);
}

long long phi_count(const ContinuedFraction& cf, const AlphaExpansion& beta, long long N) {
    GateComparator gate(cf, beta);
    LinForm t;
    long long count = 0;
    const LinForm alpha(Rat(0), Rat(1));
    for (long long q = 0; q < N; ++q) {
        if (gate.below(t)) ++count;
        t = cf.frac_of(t + alpha);
    }
    return count;
}

std::vector<long long> phi_counts_upto(const ContinuedFraction& cf, const AlphaExpansion& beta,
                                       long long Nmax) {
    GateComparator gate(cf, beta);
    std::vector<long long> out(Nmax + 1, 0);
    LinForm t;
    const LinForm alpha(Rat(0), Rat(1));
    for (long long N = 1; N <= Nmax; ++N) {
        out[N] = out[N - 1] + (gate.below(t) ? 1 : 0);
        t = cf.frac_of(t + alpha);
    }
    return out;
}

Int count_sequences_A(const ContinuedFraction& cf, long long h, long long r, long long s) {
    if (h < 0 || r < h) throw PreconditionViolated("sequence count needs 0 <= h <= r");
    int sign = (h % 2 == 0) ? 1 : -1;
    if (s >= 1) return sign * (cf.q(h) * cf.p(r + 1) - cf.p(h) * cf.q(r + 1));
    return sign * ((cf.p(h + 1) - cf.p(h)) * cf.q(r + 1) - (cf.q(h + 1) - cf.q(h)) * cf.p(r + 1));
}

GatePair make_gates(const ContinuedFraction& cf, GateVariant variant, long long n) {
    long long scan = std::min<long long>(cf.depth(), 600);
    for (long long i = 1; i <= scan; ++i)
        if (cf.digit(i) < 6) throw DigitTooSmall("gate rules need every digit a_i >= 6");

    GatePair g;
    g.beta_double = alpha_expand_rule(
        cf, [](long long i) { return i % 2 == 0 ? 4LL : 0LL; }, 48);
    if (variant == GateVariant::Beta0) {
        g.beta_prime = alpha_expand_rule(cf, [](long long) { return 2LL; }, 48);
        g.gap_from_beta0 = Rat(0);
    } else {
        if (n < 0) throw PreconditionViolated("truncated gate needs n >= 0");
        long long cut = 2 * n + 2;
        g.beta_prime = alpha_expand_rule(
            cf, [cut](long long i) { return (i % 2 == 0 || i < cut) ? 2LL : 0LL; }, 48);
        g.beta1_n = n;
        // the two inner gates differ only at odd indices above 2n+2; the
        // geometric decay of |eta_i| (each q_{i+1} >= 6 q_i) bounds the gap
        g.gap_from_beta0 = Rat(Int(12), Int(5) * cf.q(cut + 2));
    }

    // certify 0 < beta' < beta'' < 1 - alpha
    LinForm one_minus_alpha(Rat(1), Rat(-1));
    bool low_ok = false;
    for (long long T = 8; !low_ok && T <= 256; T *= 2)
        low_ok = cf.less(LinForm(), enclose(cf, g.beta_prime, T).lo);
    if (!low_ok) throw InvalidGate("cannot certify 0 < beta'");
    if (!certify_less(cf, g.beta_prime, g.beta_double))
        throw InvalidGate("cannot certify beta' < beta''");
    GateBound high = enclose(cf, g.beta_double, 8);
    bool top_ok = cf.less(high.hi, one_minus_alpha);
    for (long long T = 16; !top_ok && T <= 256; T *= 2) {
        high = enclose(cf, g.beta_double, T);
        top_ok = cf.less(high.hi, one_minus_alpha);
    }
    if (!top_ok) throw InvalidGate("cannot certify beta'' < 1 - alpha");
    return g;
}

bool digit_condition(const ContinuedFraction& cf, double epsilon, long long depth) {
    long long scan = std::min(depth, cf.depth());
    double sum = 0;
    for (long long i = 1; i <= scan; ++i) sum += 1.0 / (double)cf.digit(i);
    return sum < epsilon / 300.0;
}

double CensusResult::confidence_radius(double z) const {
    if (exhaustive || evaluated == 0) return 0;
    double p = fraction_zero();
    return z * std::sqrt(p * (1 - p) / (double)evaluated);
}

CensusResult range_parity_census(const ContinuedFraction& cf, const GatePair& gates,
                                 const Int& lo, const Int& hi, long long sample,
                                 unsigned long long seed) {
    if (lo < 0 || hi <= lo) throw OutOfRange("census range is empty");
    CensusResult r;
    r.lo = lo;
    r.hi = hi;
    Int width = hi - lo;
    r.exhaustive = width <= 1000000;
    auto tally = [&](const Int& N) {
        int parity = census_parity(cf, gates, N);
        if (parity < 0) {
            ++r.rejected;
            return;
        }
        ++r.evaluated;
        if (parity == 0) ++r.parity_zero;
    };
    if (r.exhaustive) {
        for (Int N = lo; N < hi; ++N) tally(N);
    } else {
        std::mt19937_64 rng(seed);
        for (long long i = 0; i < sample; ++i) tally(lo + uniform_int_below(rng, width));
    }
    return r;
}

CensusResult block_parity_census(const ContinuedFraction& cf, const GatePair& gates,
                                 long long k, long long b, long long sample,
                                 unsigned long long seed) {
    if (k < 0 || b < 0) throw OutOfRange("census block needs k >= 0 and b >= 0");
    if (b > 0 && b >= cf.digit(k + 2))
        throw OutOfRange("census block translate needs b < a_{k+2}");
    Int q = cf.q(k + 1);
    return range_parity_census(cf, gates, b * q, (b + 1) * q, sample, seed);
}

Theorem34Report theorem34_experiment(const ContinuedFraction& cf, double epsilon, long long C,
                                     long long n_max, long long sample,
                                     unsigned long long seed) {
    if (epsilon <= 0 || epsilon >= 1) throw PreconditionViolated("epsilon must lie in (0,1)");
    if (C < 0 || (double)C >= 200.0 / epsilon)
        throw PreconditionViolated("window count C must stay below 200/epsilon");
    Theorem34Report rep;
    rep.epsilon = epsilon;
    rep.C = C;
    rep.n_max = n_max;
    rep.digit_sum_ok = digit_condition(cf, epsilon);

    unsigned long long s = seed;
    auto run_block = [&](const GatePair& gates, long long k, long long b, bool expect_left,
                         double bound, const std::string& label) {
        CensusResult c = block_parity_census(cf, gates, k, b, sample, s++);
        WindowCheck w;
        w.label = label;
        w.lo = c.lo;
        w.hi = c.hi;
        w.expect_left = expect_left;
        w.fraction = expect_left ? c.fraction_zero() : c.fraction_one();
        w.bound = bound;
        w.holds = w.fraction > bound;
        w.rejected = c.rejected;
        rep.checks.push_back(w);
    };

    double lb = 1.0 - epsilon;
    GatePair g0 = make_gates(cf, GateVariant::Beta0);
    for (long long n = 1; n <= n_max; ++n) {
        for (long long b = 0; b <= C; ++b) {
            bool left = (b != 1);
            run_block(g0, 2 * n, b, left, lb,
                      "all-twos gate: window scale q_" + std::to_string(2 * n + 1) +
                          " b=" + std::to_string(b) + (left ? " expect left" : " expect right"));
        }
        for (long long b = 0; b <= C; ++b) {
            bool left = (b != 2);
            run_block(g0, 2 * n - 1, b, left, lb,
                      "all-twos gate: window scale q_" + std::to_string(2 * n) +
                          " b=" + std::to_string(b) + (left ? " expect left" : " expect right"));
        }
    }

    GatePair g1 = make_gates(cf, GateVariant::Beta1, n_max);
    for (long long i = 1; i <= n_max; ++i) {
        run_block(g1, 2 * i, 0, true, lb,
                  "truncated gate: window scale q_" + std::to_string(2 * i + 1) +
                      " b=0 expect left");
        run_block(g1, 2 * i, 1, false, lb,
                  "truncated gate: window scale q_" + std::to_string(2 * i + 1) +
                      " b=1 expect right");
    }

    // past the threshold scale q_{2n+3} the cumulative left share stays
    // above 2/3 - epsilon for every horizon
    Int q_star = cf.q(2 * n_max + 3);
    std::vector<Int> horizons = {q_star, 2 * q_star, cf.q(2 * n_max + 4),
                                 2 * cf.q(2 * n_max + 4)};
    for (const Int& Q : horizons) {
        CensusResult c = range_parity_census(cf, g1, 0, Q, sample, s++);
        WindowCheck w;
        w.label = "truncated gate: cumulative left share to " + int_str(Q);
        w.lo = 0;
        w.hi = Q;
        w.expect_left = true;
        w.fraction = c.fraction_zero();
        w.bound = 2.0 / 3.0 - epsilon;
        w.holds = w.fraction > w.bound;
        w.rejected = c.rejected;
        rep.checks.push_back(w);
    }
    return rep;
}

}  // namespace polyflow
