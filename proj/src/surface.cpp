#include "polyflow/surface.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace polyflow {

namespace {

// Recursive-descent parser for linear expressions over {1, alpha, b}.
class ExprParser {
  public:
    ExprParser(const std::string& text, const LinForm& b) : s_(text), b_(b) {}

    LinForm parse() {
        LinForm v = expr();
        skip();
        if (i_ != s_.size()) throw Error("expression: trailing input in '" + s_ + "'");
        return v;
    }

  private:
    void skip() {
        while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }

    LinForm expr() {
        LinForm acc = eat('-') ? -term() : term();
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    LinForm term() {
        LinForm acc = factor();
        for (;;) {
            if (eat('*')) {
                LinForm f = factor();
                if (f.is_rational())
                    acc = acc * f.u;
                else if (acc.is_rational())
                    acc = f * acc.u;
                else
                    throw Error("expression: nonlinear product in '" + s_ + "'");
            } else if (eat('/')) {
                LinForm f = factor();
                if (!f.is_rational() || f.u == 0)
                    throw Error("expression: bad divisor in '" + s_ + "'");
                acc = acc * (Rat(1) / f.u);
            } else {
                return acc;
            }
        }
    }

    LinForm factor() {
        char c = peek();
        if (std::isdigit((unsigned char)c)) return LinForm::constant(number());
        if (std::isalpha((unsigned char)c)) {
            std::string name;
            while (i_ < s_.size() && std::isalpha((unsigned char)s_[i_])) name += s_[i_++];
            if (name == "alpha") return LinForm::alpha();
            if (name == "b") return b_;
            throw Error("expression: unknown symbol '" + name + "'");
        }
        if (eat('(')) {
            LinForm v = expr();
            if (!eat(')')) throw Error("expression: missing ')' in '" + s_ + "'");
            return v;
        }
        throw Error("expression: unexpected character in '" + s_ + "'");
    }

    Rat number() {
        Int num = 0;
        while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_]))
            num = num * 10 + (s_[i_++] - '0');
        if (i_ < s_.size() && s_[i_] == '.') {
            ++i_;
            Int den = 1;
            while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) {
                num = num * 10 + (s_[i_++] - '0');
                den *= 10;
            }
            return Rat(num, den);
        }
        return Rat(num);
    }

    const std::string& s_;
    size_t i_ = 0;
    LinForm b_;
};

const LinForm kZero(Rat(0), Rat(0));
const LinForm kOne(Rat(1), Rat(0));

void require_gate_in(const ContinuedFraction& cf, const LinForm& b, const LinForm& hi,
                     const std::string& what) {
    if (cf.sign(b) <= 0 || cf.sign(hi - b) <= 0)
        throw InvalidGate(what + ": gate size out of range");
}

}  // namespace

LinForm parse_linear_expr(const std::string& text, const LinForm& b) {
    return ExprParser(text, b).parse();
}

void PolysquareSurface::finalize() {
    int s = size();
    if (s == 0) throw Error("surface: no squares");
    if ((int)routing.size() != s) throw Error("surface: routing table size mismatch");
    std::map<std::pair<long long, long long>, int> at;
    for (int j = 0; j < s; ++j) {
        if (!at.emplace(std::make_pair(squares[j].col, squares[j].row), j).second)
            throw Error("surface: duplicate square cell");
    }
    street_of.assign(s, -1);
    level_of.assign(s, 0);
    streets.clear();
    for (int j = 0; j < s; ++j) {
        if (street_of[j] >= 0) continue;
        int bottom = j;
        for (;;) {
            auto it = at.find({squares[bottom].col, squares[bottom].row - 1});
            if (it == at.end()) break;
            bottom = it->second;
        }
        std::vector<int> run;
        int cur = bottom;
        for (;;) {
            street_of[cur] = (int)streets.size();
            level_of[cur] = (int)run.size();
            run.push_back(cur);
            auto it = at.find({squares[cur].col, squares[cur].row + 1});
            if (it == at.end()) break;
            cur = it->second;
        }
        streets.push_back(std::move(run));
    }
}

PolysquareSurface make_torus(const ContinuedFraction& cf, long long w, long long h) {
    if (w < 1 || h < 1) throw Error("make_torus: empty grid");
    PolysquareSurface s(cf);
    for (long long r = 0; r < h; ++r)
        for (long long c = 0; c < w; ++c) s.squares.push_back({c, r});
    s.routing.resize(w * h);
    for (long long r = 0; r < h; ++r)
        for (long long c = 0; c < w; ++c) {
            int target = (int)(r * w + (c + 1) % w);
            s.routing[r * w + c] = {{kZero, kOne, target, kZero}};
        }
    s.finalize();
    return s;
}

PolysquareSurface make_n_square_b(const ContinuedFraction& cf, long long n, const LinForm& b) {
    if (n < 2) throw Error("make_n_square_b: need at least 2 squares");
    require_gate_in(cf, b, kOne, "make_n_square_b");
    PolysquareSurface s(cf);
    s.gate = b;
    for (long long j = 0; j < n; ++j) s.squares.push_back({j, 0});
    s.routing.resize(n);
    for (long long j = 0; j < n; ++j) {
        int next = (int)((j + 1) % n);
        s.routing[j] = {{kZero, b, next, kZero}, {b, kOne, (int)j, kZero}};
        s.divisions.push_back({next, {Rat(1)}});
    }
    s.finalize();
    return s;
}

PolysquareSurface make_L_b(const ContinuedFraction& cf, const LinForm& b) {
    // orderings of the division points require 0 < b < 1-b (and a fortiori
    // b < 1-b/2)
    require_gate_in(cf, b, kOne - b, "make_L_b");
    PolysquareSurface s(cf);
    s.gate = b;
    s.squares = {{0, 0}, {1, 0}, {2, 0}, {0, 1}};
    LinForm half = b * Rat(1, 2);
    s.routing = {
        // bottom left: right edge carries the divisions of square 1's left
        // edge, {b, 1 - b/2}; the barrier wraps within the street
        {{kZero, b, 1, kZero}, {b, kOne - half, 0, kZero}, {kOne - half, kOne, 1, kZero}},
        // bottom middle: divisions {b, 1 - b} of square 2's left edge
        {{kZero, b, 2, kZero}, {b, kOne - b, 1, kZero}, {kOne - b, kOne, 2, kZero}},
        // bottom right: outer edge, wrapping the row through the bottom
        // gate and feeding the upper gates of squares 1 and 0
        {{kZero, b, 0, kZero},
         {b, kOne - b, 2, kZero},
         {kOne - b, kOne - half, 1, kZero},
         {kOne - half, kOne, 0, kZero}},
        // top square: outer edge identified with its own left edge
        {{kZero, kOne, 3, kZero}},
    };
    s.divisions = {{1, {Rat(1), Rat(-1, 2)}}, {2, {Rat(1), Rat(-1)}}};
    s.finalize();
    return s;
}

PolysquareSurface unfold_billiard(const ContinuedFraction& cf, const BilliardRegion& region) {
    long long W = region.width, H = region.height;
    if (W < 1 || H < 1) throw PreconditionViolated("unfold_billiard: empty region");
    for (const WallSpec& w : region.walls) {
        if (w.x < 1 || w.x > W - 1)
            throw PreconditionViolated("unfold_billiard: wall not on an internal grid line");
        if (cf.sign(w.lo) < 0 || cf.sign(LinForm(Rat(H), Rat(0)) - w.hi) < 0 ||
            cf.sign(w.hi - w.lo) <= 0)
            throw PreconditionViolated("unfold_billiard: wall outside the region");
    }

    // mirrored wall segments per grid line of the doubled torus
    std::map<long long, std::vector<std::pair<LinForm, LinForm>>> walls;
    LinForm full(Rat(2 * H), Rat(0));
    for (const WallSpec& w : region.walls) {
        for (long long x : {w.x, 2 * W - w.x}) {
            walls[x].push_back({w.lo, w.hi});
            walls[x].push_back({full - w.hi, full - w.lo});
        }
    }
    for (auto& [x, segs] : walls) {
        std::sort(segs.begin(), segs.end(),
                  [&](const auto& a, const auto& b2) { return cf.less(a.first, b2.first); });
        std::vector<std::pair<LinForm, LinForm>> merged;
        for (const auto& seg : segs) {
            if (!merged.empty() && !cf.less(merged.back().second, seg.first)) {
                if (cf.less(merged.back().second, seg.second)) merged.back().second = seg.second;
            } else {
                merged.push_back(seg);
            }
        }
        segs = std::move(merged);
    }

    PolysquareSurface s(cf);
    for (long long r = 0; r < 2 * H; ++r)
        for (long long c = 0; c < 2 * W; ++c) s.squares.push_back({c, r});
    s.routing.resize(4 * W * H);
    for (long long r = 0; r < 2 * H; ++r) {
        LinForm row_lo(Rat(r), Rat(0)), row_hi(Rat(r + 1), Rat(0));
        for (long long c = 0; c < 2 * W; ++c) {
            long long line = c + 1;  // line 2W wraps to the left edge of column 0
            int pass = (int)(r * 2 * W + (c + 1) % (2 * W));
            int mirror = (int)(r * 2 * W + (2 * W - line) % (2 * W));
            std::vector<RoutingSegment> segs;
            LinForm cur = kZero;
            auto it = walls.find(line);
            if (it != walls.end()) {
                for (const auto& [lo, hi] : it->second) {
                    if (!cf.less(lo, row_hi) || !cf.less(row_lo, hi)) continue;
                    LinForm a = cf.less(row_lo, lo) ? lo - row_lo : kZero;
                    LinForm b2 = cf.less(hi, row_hi) ? hi - row_lo : kOne;
                    if (cur != a) segs.push_back({cur, a, pass, kZero});
                    segs.push_back({a, b2, mirror, kZero});
                    cur = b2;
                }
            }
            if (cur != kOne) segs.push_back({cur, kOne, pass, kZero});
            s.routing[r * 2 * W + c] = std::move(segs);
        }
    }
    s.finalize();
    return s;
}

std::vector<std::string> validate(const PolysquareSurface& surface) {
    std::vector<std::string> bad;
    const ContinuedFraction& cf = surface.cf;
    int s = surface.size();
    if (s == 0) return {"no squares"};
    if ((int)surface.routing.size() != s) return {"routing table size mismatch"};

    // edge-connectivity of the square set
    std::map<std::pair<long long, long long>, int> at;
    for (int j = 0; j < s; ++j) at[{surface.squares[j].col, surface.squares[j].row}] = j;
    std::vector<int> seen(s, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
        int j = stack.back();
        stack.pop_back();
        long long c = surface.squares[j].col, r = surface.squares[j].row;
        for (auto [dc, dr] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            auto it = at.find({c + dc, r + dr});
            if (it != at.end() && !seen[it->second]) {
                seen[it->second] = 1;
                stack.push_back(it->second);
            }
        }
    }
    for (int j = 0; j < s; ++j)
        if (!seen[j]) bad.push_back("square " + std::to_string(j) + " not edge-connected");

    // each right edge is partitioned by its routing segments
    std::vector<std::vector<std::pair<LinForm, LinForm>>> arrivals(s);
    for (int j = 0; j < s; ++j) {
        const auto& segs = surface.routing[j];
        if (segs.empty()) {
            bad.push_back("square " + std::to_string(j) + " has no routing");
            continue;
        }
        if (segs.front().lo != kZero)
            bad.push_back("square " + std::to_string(j) + " routing does not start at 0");
        if (segs.back().hi != kOne)
            bad.push_back("square " + std::to_string(j) + " routing does not end at 1");
        for (size_t i = 0; i < segs.size(); ++i) {
            if (cf.sign(segs[i].hi - segs[i].lo) <= 0)
                bad.push_back("square " + std::to_string(j) + " has an empty routing segment");
            if (i + 1 < segs.size() && segs[i].hi != segs[i + 1].lo)
                bad.push_back("square " + std::to_string(j) + " routing has a gap or overlap");
            if (segs[i].target < 0 || segs[i].target >= s) {
                bad.push_back("square " + std::to_string(j) + " routes to a missing square");
                continue;
            }
            LinForm ilo = segs[i].lo + segs[i].offset, ihi = segs[i].hi + segs[i].offset;
            if (cf.sign(ilo) < 0 || cf.sign(kOne - ihi) < 0)
                bad.push_back("square " + std::to_string(j) + " image leaves the unit edge");
            arrivals[segs[i].target].push_back({ilo, ihi});
        }
    }

    // the arrival segments partition every left edge (the identification is
    // a measure-preserving bijection of the vertical edges)
    for (int t = 0; t < s; ++t) {
        auto& seg = arrivals[t];
        std::sort(seg.begin(), seg.end(),
                  [&](const auto& a, const auto& b2) { return a.first != b2.first && cf.less(a.first, b2.first); });
        LinForm cur = kZero;
        bool ok = true;
        for (const auto& [lo, hi] : seg) {
            if (lo != cur) {
                ok = false;
                break;
            }
            cur = hi;
        }
        if (!ok || cur != kOne)
            bad.push_back("left edge of square " + std::to_string(t) +
                          " is not exactly covered by arrivals");
    }

    // declared division points must appear among the arrival breakpoints
    for (const DivisionDecl& d : surface.divisions) {
        if (d.square < 0 || d.square >= s) {
            bad.push_back("division declaration on a missing square");
            continue;
        }
        for (const Rat& r : d.multipliers) {
            LinForm point = cf.frac_of(surface.gate * r);
            bool found = false;
            for (const auto& [lo, hi] : arrivals[d.square])
                if (lo == point) found = true;
            if (!found)
                bad.push_back("declared division point on square " + std::to_string(d.square) +
                              " is not an identification breakpoint");
        }
    }
    return bad;
}

PolysquareSurface parse_surface(const std::string& text, const ContinuedFraction& cf,
                                const LinForm& b) {
    PolysquareSurface s(cf);
    s.gate = b;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw Error("surface spec line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(is, line)) {
        ++lineno;
        size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        size_t colon = line.find(':');
        if (colon == std::string::npos) fail("expected 'section: ...'");
        std::string key = line.substr(start, colon - start);
        std::string rest = line.substr(colon + 1);
        if (key == "squares") {
            std::istringstream rs(rest);
            char ch;
            long long c, r;
            while (rs >> ch) {
                if (ch != '(' || !(rs >> c >> ch >> r) || !(rs >> ch))
                    fail("bad square cell list");
                s.squares.push_back({c, r});
            }
        } else if (key == "route") {
            size_t lb = rest.find('[');
            size_t comma = rest.find(',', lb);
            size_t rb = rest.find(')', comma);
            size_t arrow = rest.find("->", rb);
            if (lb == std::string::npos || comma == std::string::npos ||
                rb == std::string::npos || arrow == std::string::npos)
                fail("bad route syntax");
            RoutingSegment seg;
            int src = std::stoi(rest.substr(0, lb));
            seg.lo = parse_linear_expr(rest.substr(lb + 1, comma - lb - 1), b);
            seg.hi = parse_linear_expr(rest.substr(comma + 1, rb - comma - 1), b);
            std::string tail = rest.substr(arrow + 2);
            size_t plus = tail.find('+');
            seg.target = std::stoi(tail.substr(0, plus));
            seg.offset = plus == std::string::npos
                             ? kZero
                             : parse_linear_expr(tail.substr(plus + 1), b);
            if (src < 0) fail("negative square index");
            if ((size_t)src >= s.routing.size()) s.routing.resize(src + 1);
            s.routing[src].push_back(seg);
        } else if (key == "divisions") {
            size_t c2 = rest.find(':');
            if (c2 == std::string::npos) fail("bad divisions syntax");
            DivisionDecl d;
            d.square = std::stoi(rest.substr(0, c2));
            std::istringstream rs(rest.substr(c2 + 1));
            std::string tok;
            while (std::getline(rs, tok, ',')) {
                LinForm v = parse_linear_expr(tok, kOne);  // rational multiplier, b irrelevant
                if (!v.is_rational()) fail("division multiplier must be rational");
                d.multipliers.push_back(v.u);
            }
            s.divisions.push_back(std::move(d));
        } else {
            fail("unknown section '" + key + "'");
        }
    }
    s.routing.resize(s.squares.size());
    for (auto& segs : s.routing)
        std::sort(segs.begin(), segs.end(), [&](const RoutingSegment& a, const RoutingSegment& x) {
            return a.lo != x.lo && cf.less(a.lo, x.lo);
        });
    s.finalize();
    return s;
}

std::string serialize_surface(const PolysquareSurface& surface) {
    std::ostringstream os;
    os << "squares:";
    for (const GridCell& c : surface.squares) os << " (" << c.col << "," << c.row << ")";
    os << "\n";
    for (int j = 0; j < surface.size(); ++j)
        for (const RoutingSegment& seg : surface.routing[j]) {
            os << "route: " << j << " [" << seg.lo.to_string() << ", " << seg.hi.to_string()
               << ") -> " << seg.target;
            if (seg.offset != kZero) os << " + " << seg.offset.to_string();
            os << "\n";
        }
    for (const DivisionDecl& d : surface.divisions) {
        os << "divisions: " << d.square << ":";
        for (size_t i = 0; i < d.multipliers.size(); ++i)
            os << (i ? ", " : " ") << d.multipliers[i].str();
        os << "\n";
    }
    return os.str();
}

}  // namespace polyflow
