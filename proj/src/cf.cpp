#include "polyflow/cf.hpp"

#include <cstdlib>
#include <sstream>

namespace polyflow {

std::string LinForm::to_string() const {
    std::ostringstream os;
    os << u.str();
    if (v != 0) {
        os << (v > 0 ? " + " : " - ");
        Rat av = v > 0 ? v : Rat(-v);
        if (av != 1) os << av.str() << "*";
        os << "alpha";
    }
    return os.str();
}

ContinuedFraction ContinuedFraction::from_digits(std::vector<long long> digits, long long a0) {
    for (long long d : digits)
        if (d < 1) throw IllegalDigits("continued fraction digit < 1");
    if (digits.empty()) throw IllegalDigits("empty continued fraction");
    ContinuedFraction cf;
    cf.kind_ = Kind::Finite;
    cf.pre_ = std::move(digits);
    cf.a0_ = a0;
    return cf;
}

ContinuedFraction ContinuedFraction::periodic(std::vector<long long> pre,
                                              std::vector<long long> period, long long a0) {
    for (long long d : pre)
        if (d < 1) throw IllegalDigits("continued fraction digit < 1");
    for (long long d : period)
        if (d < 1) throw IllegalDigits("continued fraction digit < 1");
    if (period.empty()) throw IllegalDigits("empty period");
    ContinuedFraction cf;
    cf.kind_ = Kind::Periodic;
    cf.pre_ = std::move(pre);
    cf.period_ = std::move(period);
    cf.a0_ = a0;
    return cf;
}

ContinuedFraction ContinuedFraction::constant(long long a, long long a0) {
    if (a < 1) throw IllegalDigits("continued fraction digit < 1");
    ContinuedFraction cf;
    cf.kind_ = Kind::Constant;
    cf.const_digit_ = a;
    cf.a0_ = a0;
    return cf;
}

namespace {

std::vector<long long> parse_digit_list(const std::string& s) {
    std::vector<long long> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        while (pos < tok.size() && isspace((unsigned char)tok[pos])) ++pos;
        if (pos != tok.size()) throw Error("bad digit token: " + tok);
        out.push_back(v);
    }
    return out;
}

}  // namespace

ContinuedFraction ContinuedFraction::parse(const std::string& spec_in) {
    std::string s;
    for (char c : spec_in)
        if (!isspace((unsigned char)c)) s += c;
    if (s.empty()) throw Error("empty cf spec");

    long long a0 = 0;
    size_t plus = s.rfind('+');
    size_t body_end = s.rfind(']');
    if (body_end == std::string::npos) body_end = s.rfind(':');
    if (plus != std::string::npos && (body_end == std::string::npos || plus > body_end)) {
        a0 = std::stoll(s.substr(plus + 1));
        s = s.substr(0, plus);
    }

    if (s.rfind("const:", 0) == 0) return constant(std::stoll(s.substr(6)), a0);

    if (s.front() == '[' && s.back() == ']') {
        std::string inner = s.substr(1, s.size() - 2);
        size_t semi = inner.find(';');
        std::string pre_str = semi == std::string::npos ? inner : inner.substr(0, semi);
        std::string per_str = semi == std::string::npos ? "" : inner.substr(semi + 1);
        if (per_str.empty() && !pre_str.empty() && pre_str.front() == '(') {
            per_str = pre_str;
            pre_str = "";
        }
        if (!per_str.empty()) {
            if (per_str.front() != '(' || per_str.back() != ')')
                throw Error("bad period spec: " + per_str);
            auto pre = pre_str.empty() ? std::vector<long long>{} : parse_digit_list(pre_str);
            auto per = parse_digit_list(per_str.substr(1, per_str.size() - 2));
            return periodic(std::move(pre), std::move(per), a0);
        }
        return from_digits(parse_digit_list(pre_str), a0);
    }
    throw Error("unrecognized cf spec: " + spec_in);
}

std::string ContinuedFraction::to_string() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Constant:
            os << "const:" << const_digit_;
            break;
        case Kind::Finite: {
            os << "[";
            for (size_t i = 0; i < pre_.size(); ++i) os << (i ? "," : "") << pre_[i];
            os << "]";
            break;
        }
        case Kind::Periodic: {
            os << "[";
            for (size_t i = 0; i < pre_.size(); ++i) os << (i ? "," : "") << pre_[i];
            if (!pre_.empty()) os << ";";
            os << "(";
            for (size_t i = 0; i < period_.size(); ++i) os << (i ? "," : "") << period_[i];
            os << ")]";
            break;
        }
    }
    if (a0_ != 0) os << "+" << a0_;
    return os.str();
}

long long ContinuedFraction::depth() const {
    return kind_ == Kind::Finite ? (long long)pre_.size() : kDepthCap;
}

long long ContinuedFraction::digit(long long i) const {
    if (i < 1) throw Error("digit index must be >= 1");
    switch (kind_) {
        case Kind::Finite:
            if (i > (long long)pre_.size()) throw DepthExhausted("cf digit stream exhausted");
            return pre_[i - 1];
        case Kind::Periodic:
            if (i > kDepthCap) throw DepthExhausted("cf depth cap reached");
            if (i <= (long long)pre_.size()) return pre_[i - 1];
            return period_[(i - 1 - pre_.size()) % period_.size()];
        case Kind::Constant:
            if (i > kDepthCap) throw DepthExhausted("cf depth cap reached");
            return const_digit_;
    }
    throw Error("unreachable");
}

long long ContinuedFraction::digit_bound() const {
    long long m = 0;
    if (kind_ == Kind::Constant) return const_digit_;
    for (long long d : pre_) m = std::max(m, d);
    for (long long d : period_) m = std::max(m, d);
    return m;
}

void ContinuedFraction::ensure(long long k) const {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto& p = memo_->p;
    auto& q = memo_->q;
    if ((long long)p.size() > k) return;
    if (p.empty()) {
        p = {0, 1};
        q = {1, Int(digit(1))};
    }
    while ((long long)p.size() <= k) {
        long long i = (long long)p.size();  // computing index i; needs a_i
        Int a(digit(i));
        p.push_back(a * p[i - 1] + p[i - 2]);
        q.push_back(a * q[i - 1] + q[i - 2]);
    }
}

Int ContinuedFraction::p(long long k) const {
    ensure(k);
    std::lock_guard<std::mutex> lock(memo_->mu);
    return memo_->p[k];
}

Int ContinuedFraction::q(long long k) const {
    ensure(k);
    std::lock_guard<std::mutex> lock(memo_->mu);
    return memo_->q[k];
}

RealInterval ContinuedFraction::bracket(long long k) const {
    Int pk = p(k), qk = q(k), pk1 = p(k + 1), qk1 = q(k + 1);
    Rat a(pk, qk), b(pk1, qk1);
    return k % 2 == 0 ? RealInterval(a, b) : RealInterval(b, a);
}

LinForm ContinuedFraction::eta(long long k) const { return LinForm(Rat(-p(k)), Rat(q(k))); }

LinForm ContinuedFraction::abs_eta(long long k) const {
    LinForm e = eta(k);
    return k % 2 == 0 ? e : -e;
}

int ContinuedFraction::sign(const LinForm& f) const {
    if (f.v == 0) return sgn(f.u);
    long long maxk = depth() - 1;
    long long k = memo_->sign_hint.load(std::memory_order_relaxed);
    if (k > maxk) k = maxk;
    if (k < 2) k = 2;
    long long start = k;
    for (;;) {
        RealInterval br = bracket(k);
        // {alpha} lies strictly inside br, so the value of f lies strictly
        // inside the induced interval.
        Rat at_lo = f.u + f.v * br.lo;
        Rat at_hi = f.u + f.v * br.hi;
        if (at_lo > at_hi) std::swap(at_lo, at_hi);
        if (at_lo >= 0) { memo_->sign_hint.store(k, std::memory_order_relaxed); return 1; }
        if (at_hi <= 0) { memo_->sign_hint.store(k, std::memory_order_relaxed); return -1; }
        if (k == maxk) throw DepthExhausted("cannot sign linear form at available cf depth");
        if (k - start > 100000) throw PrecisionExhausted("sign refinement did not converge");
        k = std::min(k + 4, maxk);
    }
}

Int ContinuedFraction::floor_of(const LinForm& f) const {
    if (f.v == 0) return floor_rat(f.u);
    long long maxk = depth() - 1;
    for (long long k = 2;; k += 4) {
        if (k > maxk) k = maxk;
        RealInterval br = bracket(k);
        Rat at_lo = f.u + f.v * br.lo;
        Rat at_hi = f.u + f.v * br.hi;
        if (at_lo > at_hi) std::swap(at_lo, at_hi);
        Int fl = floor_rat(at_lo);
        Int fh = floor_rat(at_hi);
        if (fh > fl && at_hi == fh) --fh;  // value < at_hi strictly
        if (fl == fh) return fl;
        if (k == maxk) throw DepthExhausted("cannot take floor at available cf depth");
    }
}

LinForm ContinuedFraction::frac_of(const LinForm& f) const {
    Int fl = floor_of(f);
    return LinForm(f.u - Rat(fl), f.v);
}

LinForm ContinuedFraction::norm_of(const LinForm& f) const {
    LinForm g = frac_of(f);
    // ||f|| = min(g, 1-g)
    if (sign(LinForm(g.u * 2 - 1, g.v * 2)) <= 0) return g;
    return LinForm(Rat(1) - g.u, -g.v);
}

RealInterval ContinuedFraction::approx(const LinForm& f, const Rat& width_goal) const {
    if (f.v == 0) return RealInterval::point(f.u);
    long long maxk = depth() - 1;
    for (long long k = 2;; k += 4) {
        if (k > maxk) k = maxk;
        RealInterval br = bracket(k);
        Rat at_lo = f.u + f.v * br.lo;
        Rat at_hi = f.u + f.v * br.hi;
        if (at_lo > at_hi) std::swap(at_lo, at_hi);
        if (at_hi - at_lo <= width_goal) return RealInterval(at_lo, at_hi);
        if (k == maxk) throw DepthExhausted("cannot reach requested width at available cf depth");
    }
}

long long ContinuedFraction::convergent_index_below(const Int& N) const {
    if (N < 1) throw Error("convergent_index_below needs N >= 1");
    long long k = 0;
    while (k + 1 <= depth() && q(k + 1) <= N) ++k;
    return k;
}

ConvergentReport convergents(const ContinuedFraction& cf, long long k, int guard) {
    if (k < 0) throw Error("convergents: k must be >= 0");
    ConvergentReport r;
    r.p = cf.p(k);
    r.q = cf.q(k);
    // |eta_k| > 1/(q_{k+1}+q_k); aim the width below that times 2^-guard.
    Rat goal(1, (cf.q(k + 1) + cf.q(k)) << guard);
    r.eta = cf.approx(cf.eta(k), goal);
    return r;
}

RealInterval fractional_part(const ContinuedFraction& cf, const Int& q, const Rat& width_goal) {
    if (q < 0) throw Error("fractional_part: q must be >= 0");
    if (q == 0) return RealInterval::point(Rat(0));
    return cf.approx(cf.frac_of(LinForm(Rat(0), Rat(q))), width_goal);
}

ContinuedFraction one_minus(const ContinuedFraction& cf, long long depth) {
    std::vector<long long> out;
    long long avail = cf.depth();
    if (cf.digit(1) >= 2) {
        out.push_back(1);
        out.push_back(cf.digit(1) - 1);
        for (long long i = 2; i <= avail && (long long)out.size() < depth; ++i)
            out.push_back(cf.digit(i));
    } else {
        if (avail < 2) throw DepthExhausted("one_minus: need at least 2 digits");
        out.push_back(cf.digit(2) + 1);
        for (long long i = 3; i <= avail && (long long)out.size() < depth; ++i)
            out.push_back(cf.digit(i));
    }
    return ContinuedFraction::from_digits(std::move(out));
}

}  // namespace polyflow
