#pragma once

#include <stdexcept>
#include <string>
#include <boost/multiprecision/cpp_int.hpp>

namespace polyflow {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// A closed rational interval [lo, hi].  Evaluation routines only ever round
// outward, so an interval produced for a real quantity always contains it.
struct RealInterval {
    Rat lo;
    Rat hi;

    RealInterval() : lo(0), hi(0) {}
    RealInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("RealInterval: lo > hi");
    }
    static RealInterval point(const Rat& x) { return RealInterval(x, x); }

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    bool contains(const RealInterval& o) const { return lo <= o.lo && o.hi <= hi; }

    RealInterval operator+(const RealInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RealInterval operator-(const RealInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    RealInterval operator*(const Rat& c) const {
        return c >= 0 ? RealInterval(lo * c, hi * c) : RealInterval(hi * c, lo * c);
    }
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Interval comparison could not be decided within the configured depth cap.
struct PrecisionExhausted : Error { using Error::Error; };
// The continued fraction digit stream cannot supply the requested index.
struct DepthExhausted : Error { using Error::Error; };
// Digit vector violates the numeration-system constraints.
struct IllegalDigits : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct InvalidGate : Error { using Error::Error; };
struct DivisibilityViolated : Error { using Error::Error; };
struct NotInvariant : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct DigitTooSmall : Error { using Error::Error; };
struct DigitBoundViolated : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };

// A geodesic / orbit hit a cone point; there is no unique continuation.
struct SingularHit : Error {
    long long step;
    explicit SingularHit(const std::string& what, long long step_ = -1)
        : Error(what), step(step_) {}
};

inline int sgn(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

Int floor_rat(const Rat& x);
Int ceil_rat(const Rat& x);

inline Int floor_rat(const Rat& x) {
    Int q = numerator(x) / denominator(x);
    if (q * denominator(x) > numerator(x)) --q;
    return q;
}
inline Int ceil_rat(const Rat& x) { return -floor_rat(-x); }

}  // namespace polyflow
