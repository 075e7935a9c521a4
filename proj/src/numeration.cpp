#include "polyflow/numeration.hpp"

namespace polyflow {

OstrowskiRep ostrowski_encode(const ContinuedFraction& cf, const Int& N) {
    if (N < 0) throw Error("ostrowski_encode: N must be >= 0");
    OstrowskiRep rep;
    rep.value = N;
    if (N == 0) return rep;
    long long k = cf.convergent_index_below(N);
    rep.digits.assign(k + 1, 0);
    Int rem = N;
    for (long long i = k; i >= 0; --i) {
        Int b = rem / cf.q(i);
        rem -= b * cf.q(i);
        rep.digits[i] = b.convert_to<long long>();
    }
    // Greedy from the top already satisfies the digit constraints: after a
    // maximal digit b_i = a_{i+1} the remainder is below q_{i-1}, forcing
    // b_{i-1} = 0.  Verify rather than fix up.
    ostrowski_check(cf, rep.digits);
    return rep;
}

void ostrowski_check(const ContinuedFraction& cf, const std::vector<long long>& digits,
                     bool allow_trailing_zero) {
    if (digits.empty()) return;
    if (!allow_trailing_zero && digits.back() == 0)
        throw IllegalDigits("ostrowski: leading digit is zero");
    for (size_t i = 0; i < digits.size(); ++i) {
        long long b = digits[i];
        long long cap = cf.digit((long long)i + 1);
        if (b < 0) throw IllegalDigits("ostrowski: negative digit");
        if (i == 0 && b >= cap) throw IllegalDigits("ostrowski: b_0 >= a_1");
        if (b > cap) throw IllegalDigits("ostrowski: digit above a_{i+1}");
        if (b == cap && i > 0 && digits[i - 1] != 0)
            throw IllegalDigits("ostrowski: b_i = a_{i+1} needs b_{i-1} = 0");
    }
}

Int ostrowski_decode(const ContinuedFraction& cf, const OstrowskiRep& rep) {
    ostrowski_check(cf, rep.digits);
    Int n = 0;
    for (size_t i = 0; i < rep.digits.size(); ++i) n += Int(rep.digits[i]) * cf.q((long long)i);
    return n;
}

long long AlphaExpansion::digit(long long i) const {
    if (i < 0) throw Error("alpha expansion digit index < 0");
    if (i < (long long)digits.size()) return digits[i];
    if (rule) return rule(i);
    throw PrecisionExhausted("alpha expansion digit beyond stored prefix and no rule");
}

void alpha_digits_check(const ContinuedFraction& cf, const std::vector<long long>& digits) {
    for (size_t i = 0; i < digits.size(); ++i) {
        long long c = digits[i];
        long long cap = cf.digit((long long)i + 1);
        if (c < 0) throw IllegalDigits("alpha expansion: negative digit");
        if (i == 0 && c >= cap) throw IllegalDigits("alpha expansion: c_0 >= a_1");
        if (c > cap) throw IllegalDigits("alpha expansion: digit above a_{i+1}");
        if (c == cap && i > 0 && digits[i - 1] != 0)
            throw IllegalDigits("alpha expansion: c_i = a_{i+1} needs c_{i-1} = 0");
    }
}

LinForm alpha_prefix(const ContinuedFraction& cf, const AlphaExpansion& e, long long T) {
    LinForm s;
    for (long long i = 0; i < T; ++i) {
        long long c = e.digit(i);
        if (c != 0) s += cf.eta(i) * Rat(c);
    }
    return s;
}

std::pair<LinForm, LinForm> alpha_tail_range(const ContinuedFraction& cf, long long T) {
    // Telescoping sum_{j >= i, j = i mod 2} a_{j+1} |eta_j| = |eta_{i-1}|
    // gives the extreme legal tails.
    if (T == 0) return {LinForm(Rat(0), Rat(1)), LinForm(Rat(1), Rat(-1))};  // (-alpha, 1-alpha)
    LinForm from_even = cf.abs_eta(T - 1);
    LinForm from_odd = cf.abs_eta(T);
    if (T % 2 == 0) return {from_odd, from_even};  // [-|eta_T|, |eta_{T-1}|]
    return {from_even, from_odd};                  // [-|eta_{T-1}|, |eta_T|]
}

RealInterval alpha_value(const ContinuedFraction& cf, const AlphaExpansion& e, long long T,
                         const Rat& width_goal) {
    LinForm pre = alpha_prefix(cf, e, T);
    Rat g = width_goal / 4;
    if (T == (long long)e.digits.size() && !e.has_rule()) {
        RealInterval pa = cf.approx(pre, g);
        return RealInterval(pa.lo + e.tail_bound.lo, pa.hi + e.tail_bound.hi);
    }
    auto [A, B] = alpha_tail_range(cf, T);
    Rat lo = cf.approx(pre - A, g).lo;
    Rat hi = cf.approx(pre + B, g).hi;
    return RealInterval(lo, hi);
}

namespace {

// Smallest integer c with f - c*g <= 0, for exactly representable f and
// provably positive g.
Int exact_ceil_ratio(const ContinuedFraction& cf, const LinForm& f, const LinForm& g) {
    RealInterval ga = cf.approx(g, Rat(1, Int(1) << 20));
    while (ga.lo <= 0) ga = cf.approx(g, ga.width() / 1024);
    RealInterval fa = cf.approx(f, ga.lo / 4);
    Int c = ceil_rat(fa.hi / ga.lo);
    while (cf.sign(f - g * Rat(c)) > 0) ++c;
    while (cf.sign(f - g * Rat(c - 1)) <= 0) --c;
    return c;
}

}  // namespace

AlphaExpansion alpha_expand(const ContinuedFraction& cf, const RealInterval& beta, long long K) {
    // beta must lie in (-alpha, 1-alpha).
    LinForm lo_lf(beta.lo, 0), hi_lf(beta.hi, 0);
    LinForm neg_alpha(Rat(0), Rat(-1)), upper(Rat(1), Rat(-1));
    if (cf.sign(hi_lf - neg_alpha) <= 0 || cf.sign(lo_lf - upper) >= 0)
        throw OutOfRange("alpha_expand: beta outside (-alpha, 1-alpha)");
    if (cf.sign(lo_lf - neg_alpha) <= 0 || cf.sign(hi_lf - upper) >= 0)
        throw PrecisionExhausted("alpha_expand: beta interval straddles the range boundary");

    AlphaExpansion e;
    LinForm sub;  // sum of chosen c_i eta_i
    for (long long t = 0; t <= K; ++t) {
        // Greedy: the remainder rho = beta - sub must stay inside the legal
        // tail range at every step; the minimal digit keeping the next
        // remainder in range is
        //   t even: c = max(0, ceil((rho - |eta_{t+1}|) / |eta_t|))
        //   t odd:  c = max(0, ceil((-rho - |eta_{t+1}|) / |eta_t|))
        LinForm den = cf.abs_eta(t);
        LinForm shift = cf.abs_eta(t + 1);
        Int c_a, c_b;
        if (t % 2 == 0) {
            c_a = exact_ceil_ratio(cf, LinForm(beta.lo, 0) - sub - shift, den);
            c_b = exact_ceil_ratio(cf, LinForm(beta.hi, 0) - sub - shift, den);
        } else {
            c_a = exact_ceil_ratio(cf, sub - LinForm(beta.hi, 0) - shift, den);
            c_b = exact_ceil_ratio(cf, sub - LinForm(beta.lo, 0) - shift, den);
        }
        if (c_a < 0) c_a = 0;
        if (c_b < 0) c_b = 0;
        if (c_a != c_b)
            throw PrecisionExhausted("alpha_expand: digit " + std::to_string(t) +
                                     " ambiguous for the given interval width");
        long long c = c_a.convert_to<long long>();
        e.digits.push_back(c);
        if (c != 0) sub += cf.eta(t) * Rat(c);
    }
    alpha_digits_check(cf, e.digits);
    RealInterval sa = cf.approx(sub, Rat(1, Int(1) << 64));
    e.tail_bound = RealInterval(beta.lo - sa.hi, beta.hi - sa.lo);
    return e;
}

AlphaExpansion alpha_expand_rule(const ContinuedFraction& cf,
                                 std::function<long long(long long)> rule, long long K) {
    AlphaExpansion e;
    e.rule = std::move(rule);
    for (long long i = 0; i <= K; ++i) e.digits.push_back(e.rule(i));
    alpha_digits_check(cf, e.digits);
    auto [A, B] = alpha_tail_range(cf, K + 1);
    Rat g(1, Int(1) << 40);
    e.tail_bound = RealInterval(cf.approx(-A, g).lo, cf.approx(B, g).hi);
    return e;
}

bool beta_in_upper_range(const ContinuedFraction& cf, const AlphaExpansion& e,
                         long long scan_depth) {
    (void)cf;
    long long limit = e.has_rule() ? scan_depth : (long long)e.digits.size();
    for (long long i = 0; i < limit; ++i)
        if (e.digit(i) != 0) return i % 2 == 0;
    throw PrecisionExhausted("beta_in_upper_range: no nonzero digit found");
}

}  // namespace polyflow
