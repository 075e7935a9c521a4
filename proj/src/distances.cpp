#include "polyflow/distances.hpp"

namespace polyflow {

namespace {

Int q_ext(const ContinuedFraction& cf, long long k) { return k < 0 ? Int(0) : cf.q(k); }

LinForm abs_eta_ext(const ContinuedFraction& cf, long long k) {
    return k < 0 ? LinForm(Rat(1), Rat(0)) : cf.abs_eta(k);  // |eta_{-1}| = 1
}

}  // namespace

ThreeDistanceReport three_distance(const ContinuedFraction& cf, const Int& N) {
    if (N < 1) throw Error("three_distance: N must be >= 1");
    long long k = 0;
    while (cf.q(k + 1) + cf.q(k) <= N) ++k;
    Int qk = cf.q(k), qk_1 = q_ext(cf, k - 1);
    Int mu = (N - qk_1) / qk;
    Int r = N - mu * qk - qk_1;

    ThreeDistanceReport rep;
    rep.k = k;
    rep.mu = mu;
    rep.r = r;
    Rat g(1, Int(1) << 40);
    auto add_gap = [&](const LinForm& len, const Int& mult) {
        if (mult == 0) return;
        rep.gaps.push_back({len, cf.approx(len, g), mult});
    };
    LinForm ek = cf.abs_eta(k);
    LinForm ek_1 = abs_eta_ext(cf, k - 1);
    add_gap(ek, N + 1 - qk);
    add_gap(ek_1 - ek * Rat(mu), r + 1);
    add_gap(ek_1 - ek * Rat(mu - 1), qk - r - 1);
    return rep;
}

Int partition_successor(const ContinuedFraction& cf, long long k, const Int& q, long long lo,
                        bool& long_gap) {
    Int Q = cf.q(k + 1);
    int sigma = k % 2 == 0 ? 1 : -1;
    Int s = q + sigma * cf.q(k);
    long_gap = false;
    if (s < lo || s > lo + Q - 1) {
        s -= sigma * Q;
        long_gap = true;
    }
    return s;
}

Int partition_predecessor(const ContinuedFraction& cf, long long k, const Int& q, long long lo,
                          bool& long_gap) {
    Int Q = cf.q(k + 1);
    int sigma = k % 2 == 0 ? 1 : -1;
    Int s = q - sigma * cf.q(k);
    long_gap = false;
    if (s < lo || s > lo + Q - 1) {
        s += sigma * Q;
        long_gap = true;
    }
    return s;
}

TwoDistancePartition two_distance_partition(const ContinuedFraction& cf, long long k) {
    if (k < 1) throw Error("two_distance_partition: k must be >= 1");
    Int Q = cf.q(k + 1);
    if (Q > 2000000) throw Error("two_distance_partition: q_{k+1} too large to enumerate");
    TwoDistancePartition part;
    part.k = k;
    part.count = Q;
    part.short_gap = cf.abs_eta(k);
    part.long_gap = cf.abs_eta(k) + cf.abs_eta(k + 1);
    Int q = 0;
    long long n = Q.convert_to<long long>();
    for (long long i = 0; i < n; ++i) {
        part.order.push_back(q);
        bool lg;
        q = partition_successor(cf, k, q, -1, lg);
        part.gap_class.push_back(lg ? 1 : 0);
    }
    return part;
}

BadlyApproximableReport badly_approximable_check(const ContinuedFraction& cf, long long A,
                                                 long long n_max) {
    if (cf.digit_bound() > A) throw DigitBoundViolated("some digit exceeds A");
    BadlyApproximableReport rep;
    rep.all_pass = true;
    LinForm best;
    for (long long n = 1; n <= n_max; ++n) {
        LinForm nrm = cf.norm_of(LinForm(Rat(0), Rat(n)));
        LinForm val = nrm * Rat(n);
        // n ||n alpha|| (A+2) > 1
        if (cf.sign(val * Rat(A + 2) - LinForm(Rat(1), Rat(0))) <= 0) rep.all_pass = false;
        if (n == 1 || cf.sign(val - best) < 0) {
            best = val;
            rep.witness_n = n;
        }
    }
    rep.min_value = cf.approx(best, Rat(1, Int(1) << 40));
    return rep;
}

namespace {

// Enclosure of {r*b} at refinement depth T, together with an enclosure of
// r*b - floor(r*b) decided at this depth (throws on failure so the caller
// can deepen).
RealInterval frac_times(const ContinuedFraction& cf, const Rat& r, const AlphaExpansion& b,
                        long long T) {
    RealInterval v = alpha_value(cf, b, T, Rat(1, Int(1) << (20 + 2 * T))) * r;
    Int fl = floor_rat(v.lo);
    if (floor_rat(v.hi) != fl) throw PrecisionExhausted("frac_times: floor ambiguous");
    return RealInterval(v.lo - fl, v.hi - fl);
}

// Signed circle distance x - {m alpha} reduced to (-1/2, 1/2), as an
// enclosure with determined sign.
RealInterval signed_circle_diff(const ContinuedFraction& cf, const RealInterval& x,
                                const LinForm& point, long long T) {
    RealInterval pa = cf.approx(point, Rat(1, Int(1) << (20 + 2 * T)));
    RealInterval raw(x.lo - pa.hi, x.hi - pa.lo);
    // shift into (-1/2, 1/2]
    Rat half(1, 2);
    Int r_lo = floor_rat(raw.lo + half);
    Int r_hi = floor_rat(raw.hi + half);
    if (r_lo != r_hi) throw PrecisionExhausted("signed_circle_diff: rounding ambiguous");
    RealInterval d(raw.lo - r_lo, raw.hi - r_lo);
    if (d.lo <= 0 && d.hi >= 0) throw PrecisionExhausted("signed_circle_diff: sign ambiguous");
    return d;
}

}  // namespace

std::vector<SeparationReport> separation_scan(const ContinuedFraction& cf,
                                              const std::vector<Rat>& division_numbers,
                                              const AlphaExpansion& b, long long k_min,
                                              long long k_max, long long hypothesis_bound) {
    if (division_numbers.empty()) throw Error("separation_scan: no division numbers");
    long long A = cf.digit_bound();
    Int U = 1, V = 1;
    for (const Rat& r : division_numbers) {
        Int u = numerator(r) < 0 ? Int(-numerator(r)) : numerator(r);
        if (u > U) U = u;
        if (denominator(r) > V) V = denominator(r);
    }
    Rat delta(Int(1), Int(100) * Int(A + 2) * Int(A + 2) * U * U * U * U * V * V * V * V * V);

    auto with_refinement = [&](auto&& fn) {
        for (long long T = k_max + 8;; T *= 2) {
            try {
                return fn(T);
            } catch (const PrecisionExhausted&) {
                if (T > 16 * (k_max + 8) + 4096) throw;
            }
        }
    };

    // Hypothesis (5.1): {r b} != {m alpha} for m != 0 (certified up to the
    // tested bound).
    for (const Rat& r : division_numbers) {
        for (long long m = -hypothesis_bound; m <= hypothesis_bound; ++m) {
            if (m == 0) continue;
            try {
                with_refinement([&](long long T) {
                    RealInterval x = frac_times(cf, r, b, T);
                    return signed_circle_diff(cf, x, cf.frac_of(LinForm(Rat(0), Rat(m))), T);
                });
            } catch (const PrecisionExhausted&) {
                throw HypothesisViolated("cannot certify {r b} != {m alpha} for m = " +
                                         std::to_string(m));
            }
        }
    }

    std::vector<SeparationReport> out;
    for (long long k = k_min; k <= k_max; ++k) {
        SeparationReport rep;
        rep.k = k;
        rep.q_k1 = cf.q(k + 1);
        rep.delta = delta;
        for (const Rat& r : division_numbers) {
            // alpha-expansion digits t_0..t_k of {r b} locate one neighbor
            // at index m = sum t_j q_j among the points {q alpha},
            // 0 <= q < q_{k+1}; the other neighbor is one partition step
            // away on the side the truncation tail points to.
            auto [m_idx, d_sign] = with_refinement([&](long long T) {
                RealInterval x = frac_times(cf, r, b, T);
                // bring into the expandable range (-alpha, 1-alpha)
                RealInterval beta = x;
                LinForm upper(Rat(1), Rat(-1));
                RealInterval ua = cf.approx(upper, Rat(1, Int(1) << (20 + 2 * T)));
                if (beta.lo >= ua.hi) {
                    beta = RealInterval(x.lo - 1, x.hi - 1);
                } else if (!(beta.hi <= ua.lo)) {
                    throw PrecisionExhausted("separation_scan: comparison with 1-alpha");
                }
                AlphaExpansion ex = alpha_expand(cf, beta, k);
                Int m = 0;
                for (long long j = 0; j <= k; ++j) m += Int(ex.digits[j]) * cf.q(j);
                RealInterval d = signed_circle_diff(cf, x, cf.frac_of(LinForm(Rat(0), Rat(m))), T);
                return std::make_pair(m, d.lo > 0 ? 1 : -1);
            });
            bool lg;
            Int below, above;
            if (d_sign > 0) {
                below = m_idx;
                above = partition_successor(cf, k, m_idx, 0, lg);
            } else {
                above = m_idx;
                below = partition_predecessor(cf, k, m_idx, 0, lg);
            }
            // Index shift: neighbors of {r b - alpha} in A_k(alpha) carry
            // indices one less than the neighbors of {r b} in the rotated
            // point set.
            rep.h.push_back({below - 1, above - 1});
        }
        Rat dq = delta * Rat(rep.q_k1);
        Rat dq_hi = Rat(rep.q_k1) - dq;
        rep.separated_from_edges = true;
        for (auto& pair : rep.h)
            for (const Int& h : pair)
                if (!(Rat(h) > dq && Rat(h) < dq_hi)) rep.separated_from_edges = false;
        rep.pairwise_separated = true;
        std::vector<Int> all;
        for (auto& pair : rep.h) {
            all.push_back(pair[0]);
            all.push_back(pair[1]);
        }
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = i + 1; j < all.size(); ++j) {
                Int diff = all[i] - all[j];
                if (diff < 0) diff = -diff;
                if (!(Rat(diff) > dq)) rep.pairwise_separated = false;
            }
        rep.in_K0 = rep.separated_from_edges && rep.pairwise_separated;
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace polyflow
