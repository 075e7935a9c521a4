#pragma once

#include <string>
#include "polyflow/rational.hpp"

namespace polyflow {

// Linear form u + v*alpha with exact rational coefficients.  All derived
// reals that the surface/IET layer manipulates live in this two-dimensional
// Q-vector space; comparisons are decided exactly against the continued
// fraction of alpha.
struct LinForm {
    Rat u;  // constant part
    Rat v;  // coefficient of alpha

    LinForm() : u(0), v(0) {}
    LinForm(Rat u_, Rat v_) : u(std::move(u_)), v(std::move(v_)) {}
    static LinForm constant(const Rat& c) { return LinForm(c, 0); }
    static LinForm alpha(const Rat& c = 1) { return LinForm(0, c); }

    bool is_rational() const { return v == 0; }

    LinForm operator+(const LinForm& o) const { return {u + o.u, v + o.v}; }
    LinForm operator-(const LinForm& o) const { return {u - o.u, v - o.v}; }
    LinForm operator-() const { return {-u, -v}; }
    LinForm operator*(const Rat& c) const { return {u * c, v * c}; }
    LinForm& operator+=(const LinForm& o) { u += o.u; v += o.v; return *this; }
    LinForm& operator-=(const LinForm& o) { u -= o.u; v -= o.v; return *this; }

    // Coefficient-wise identity, which for irrational alpha coincides with
    // equality of the represented reals.
    bool operator==(const LinForm& o) const { return u == o.u && v == o.v; }
    bool operator!=(const LinForm& o) const { return !(*this == o); }

    std::string to_string() const;
};

}  // namespace polyflow
