#pragma once

// Exact rational points on E_n: y^2 = x^3 + n^2 and Ehat_n: y^2 = x^3 - 27 n^2,
// the chord-tangent group law, and the 3-isogenies
//   phi    : E_n    -> Ehat_n, (x, y) -> ((x^3 + 4n^2)/x^2, y (x^3 - 8n^2)/x^3)
//   phihat : Ehat_n -> E_n,    (x, y) -> ((x^3 - 108n^2)/(9x^2), y (x^3 + 216n^2)/(27x^3))
// Points with x = 0 lie in the kernel of either map.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "selmer3/arith.hpp"

namespace selmer3 {

enum class Side { E, Ehat };

struct CurveId {
    u64 n = 1;
    Side side = Side::E;

    /// c in y^2 = x^3 + c.
    mpz_class constant() const;
};

struct RationalPoint {
    bool infinity = true;
    mpq_class x, y;

    static RationalPoint at_infinity() { return {}; }
    static RationalPoint affine(mpq_class x, mpq_class y);

    friend bool operator==(const RationalPoint& p, const RationalPoint& q) {
        if (p.infinity || q.infinity) return p.infinity == q.infinity;
        return p.x == q.x && p.y == q.y;
    }
};

std::string to_string(const RationalPoint& p);

/// Parses "a" or "a/b" into a canonical rational; throws std::invalid_argument.
mpq_class parse_rational(const std::string& s);

bool on_curve(const RationalPoint& p, const CurveId& curve);

RationalPoint negate(const RationalPoint& p);
RationalPoint add(const RationalPoint& p, const RationalPoint& q, const CurveId& curve);
RationalPoint multiply(const RationalPoint& p, i64 k, const CurveId& curve);

/// Throws std::invalid_argument if p is not on E_n, std::logic_error if the image is not on Ehat_n.
RationalPoint phi(const RationalPoint& p, u64 n);
/// Throws std::invalid_argument if p is not on Ehat_n, std::logic_error if the image is not on E_n.
RationalPoint phihat(const RationalPoint& p, u64 n);

/// phihat(phi(P)) == [3] P.
bool verify_composition(const RationalPoint& p, u64 n);

/// Affine points with x = a/b, |a| <= height, 1 <= b <= height, in increasing
/// (b, a) order, each followed by its negative when y != 0.
std::vector<RationalPoint> search_points(const CurveId& curve, i64 height);

}  // namespace selmer3
