#include "polyflow/iet.hpp"

#include <algorithm>

namespace polyflow {

namespace {

const LinForm kAlpha(Rat(0), Rat(1));

// strict order on linear forms with a cheap equality shortcut
bool lt(const ContinuedFraction& cf, const LinForm& a, const LinForm& b) {
    return a != b && cf.less(a, b);
}

}  // namespace

IntervalExchange::IntervalExchange(ContinuedFraction cf, int s, std::vector<Piece> pieces)
    : cf_(std::move(cf)), s_(s), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw Error("interval exchange: no pieces");
    LinForm cur(Rat(0), Rat(0));
    for (const Piece& p : pieces_) {
        if (p.lo != cur) throw Error("interval exchange: pieces do not partition [0,s)");
        if (cf_.sign(p.hi - p.lo) <= 0) throw Error("interval exchange: empty piece");
        cur = p.hi;
    }
    if (cur != LinForm(Rat(s_), Rat(0)))
        throw Error("interval exchange: pieces do not cover [0,s)");

    by_image_.resize(pieces_.size());
    for (size_t i = 0; i < by_image_.size(); ++i) by_image_[i] = (int)i;
    std::sort(by_image_.begin(), by_image_.end(), [&](int a, int b) {
        return lt(cf_, pieces_[a].lo + pieces_[a].shift, pieces_[b].lo + pieces_[b].shift);
    });
    // the images must partition [0,s) as well
    cur = LinForm(Rat(0), Rat(0));
    for (int i : by_image_) {
        if (pieces_[i].lo + pieces_[i].shift != cur)
            throw Error("interval exchange: images do not partition [0,s)");
        cur = pieces_[i].hi + pieces_[i].shift;
    }

    LinForm at_zero = pieces_.front().lo + pieces_.front().shift;
    LinForm at_wrap = pieces_.back().hi + pieces_.back().shift;
    zero_continuous_ =
        at_wrap == at_zero || at_wrap - at_zero == LinForm(Rat(s_), Rat(0));

    for (const Piece& p : pieces_) {
        LinForm m = cf_.frac_of(p.lo);
        bool seen = false;
        for (const LinForm& q : singularities_)
            if (q == m) seen = true;
        if (!seen) singularities_.push_back(m);
    }
    std::sort(singularities_.begin(), singularities_.end(),
              [&](const LinForm& a, const LinForm& b) { return lt(cf_, a, b); });
}

int IntervalExchange::piece_index(const LinForm& x) const {
    if (cf_.sign(x) < 0 || cf_.sign(LinForm(Rat(s_), Rat(0)) - x) <= 0)
        throw OutOfRange("interval exchange: point outside [0,s)");
    size_t lo = 0, hi = pieces_.size();
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (x == pieces_[mid].lo || cf_.less(pieces_[mid].lo, x))
            lo = mid;
        else
            hi = mid;
    }
    return (int)lo;
}

LinForm IntervalExchange::apply(const LinForm& x) const {
    int i = piece_index(x);
    if (x == pieces_[i].lo && !(i == 0 && zero_continuous_))
        throw SingularHit("forward orbit hits a singularity", 0);
    return x + pieces_[i].shift;
}

LinForm IntervalExchange::apply_inverse(const LinForm& x) const {
    if (cf_.sign(x) < 0 || cf_.sign(LinForm(Rat(s_), Rat(0)) - x) <= 0)
        throw OutOfRange("interval exchange: point outside [0,s)");
    size_t lo = 0, hi = by_image_.size();
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        LinForm start = pieces_[by_image_[mid]].lo + pieces_[by_image_[mid]].shift;
        if (x == start || cf_.less(start, x))
            lo = mid;
        else
            hi = mid;
    }
    const Piece& p = pieces_[by_image_[lo]];
    if (x == p.lo + p.shift && !(lo == 0 && zero_continuous_))
        throw SingularHit("backward orbit hits a singularity", 0);
    return x - p.shift;
}

IntervalExchange build_iet(const PolysquareSurface& surface) {
    const ContinuedFraction& cf = surface.cf;
    int s = surface.size();
    std::vector<Piece> pieces;

    for (int j = 0; j < s; ++j) {
        int street = surface.street_of[j];
        const std::vector<int>& run = surface.streets[street];
        long long H = (long long)run.size();
        long long L = surface.level_of[j];

        // candidate breakpoints on the local edge [0,1)
        std::vector<LinForm> cuts;
        cuts.push_back(LinForm(Rat(0), Rat(0)));
        cuts.push_back(LinForm(Rat(1), Rat(-1)));  // street level changes at 1 - alpha
        for (int sq : run)
            for (const RoutingSegment& seg : surface.routing[sq])
                cuts.push_back(cf.frac_of(seg.lo - kAlpha));
        std::sort(cuts.begin(), cuts.end(),
                  [&](const LinForm& a, const LinForm& b) { return lt(cf, a, b); });
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        cuts.push_back(LinForm(Rat(1), Rat(0)));

        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            LinForm mid = (cuts[i] + cuts[i + 1]) * Rat(1, 2);
            // follow the flow from the midpoint to the next left edge
            LinForm w = mid + kAlpha;
            Int fw = cf.floor_of(w);  // 0 or 1: crossings of the street level
            LinForm z = w - LinForm(Rat(fw), Rat(0));
            long long exit_level = (L + fw.convert_to<long long>()) % H;
            int sigma = run[exit_level];
            const std::vector<RoutingSegment>& segs = surface.routing[sigma];
            size_t si = 0;
            while (si + 1 < segs.size() && !cf.less(z, segs[si + 1].lo)) ++si;
            const RoutingSegment& seg = segs[si];
            LinForm shift = LinForm(Rat(seg.target - j - fw), Rat(1)) + seg.offset;
            Piece p{cuts[i] + LinForm(Rat(j), Rat(0)), cuts[i + 1] + LinForm(Rat(j), Rat(0)),
                    shift};
            if (!pieces.empty() && pieces.back().shift == p.shift &&
                pieces.back().hi == p.lo &&
                cf.floor_of(pieces.back().lo + pieces.back().shift) ==
                    cf.floor_of(p.lo + p.shift))
                pieces.back().hi = p.hi;
            else
                pieces.push_back(p);
        }
    }
    return IntervalExchange(cf, s, std::move(pieces));
}

OrbitResult orbit(const IntervalExchange& T, const LinForm& x0, long long n) {
    OrbitResult out;
    LinForm x = x0;
    out.points.push_back(x);
    out.squares.push_back((int)T.alpha().floor_of(x).convert_to<long long>());
    for (long long i = 0; i < n; ++i) {
        try {
            x = T.apply(x);
        } catch (const SingularHit&) {
            out.hit_singularity = true;
            return out;
        }
        out.points.push_back(x);
        out.squares.push_back((int)T.alpha().floor_of(x).convert_to<long long>());
        ++out.steps;
    }
    return out;
}

}  // namespace polyflow
