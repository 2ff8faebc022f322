#include "selmer3/curves.hpp"

#include <numeric>
#include <set>
#include <stdexcept>

namespace selmer3 {

mpz_class CurveId::constant() const {
    mpz_class n2 = mpz_class(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
    return side == Side::E ? n2 : mpz_class(-27) * n2;
}

RationalPoint RationalPoint::affine(mpq_class x, mpq_class y) {
    x.canonicalize();
    y.canonicalize();
    return {false, std::move(x), std::move(y)};
}

std::string to_string(const RationalPoint& p) {
    if (p.infinity) return "O";
    return "(" + p.x.get_str() + "," + p.y.get_str() + ")";
}

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational number: '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

bool on_curve(const RationalPoint& p, const CurveId& curve) {
    if (p.infinity) return true;
    return p.y * p.y == p.x * p.x * p.x + mpq_class(curve.constant());
}

RationalPoint negate(const RationalPoint& p) {
    if (p.infinity) return p;
    return RationalPoint::affine(p.x, -p.y);
}

RationalPoint add(const RationalPoint& p, const RationalPoint& q, const CurveId& curve) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    mpq_class lambda;
    if (p.x == q.x) {
        if (p.y != q.y || p.y == 0) return RationalPoint::at_infinity();
        lambda = 3 * p.x * p.x / (2 * p.y);
    } else {
        lambda = (q.y - p.y) / (q.x - p.x);
    }
    (void)curve;  // a = 0 for both families; the constant term does not enter the chord formula
    mpq_class x3 = lambda * lambda - p.x - q.x;
    mpq_class y3 = lambda * (p.x - x3) - p.y;
    return RationalPoint::affine(x3, y3);
}

RationalPoint multiply(const RationalPoint& p, i64 k, const CurveId& curve) {
    RationalPoint base = k < 0 ? negate(p) : p;
    u64 e = k < 0 ? static_cast<u64>(-static_cast<i128>(k)) : static_cast<u64>(k);
    RationalPoint acc = RationalPoint::at_infinity();
    while (e) {
        if (e & 1) acc = add(acc, base, curve);
        e >>= 1;
        if (e) base = add(base, base, curve);
    }
    return acc;
}

RationalPoint phi(const RationalPoint& p, u64 n) {
    const CurveId source{n, Side::E}, target{n, Side::Ehat};
    if (!on_curve(p, source)) throw std::invalid_argument("phi: point " + to_string(p) + " not on E_n");
    if (p.infinity || p.x == 0) return RationalPoint::at_infinity();
    const mpq_class n2 = mpq_class(source.constant());
    const mpq_class x2 = p.x * p.x, x3 = x2 * p.x;
    RationalPoint img = RationalPoint::affine((x3 + 4 * n2) / x2, p.y * (x3 - 8 * n2) / x3);
    if (!on_curve(img, target)) throw std::logic_error("phi: image not on Ehat_n");
    return img;
}

RationalPoint phihat(const RationalPoint& p, u64 n) {
    const CurveId source{n, Side::Ehat}, target{n, Side::E};
    if (!on_curve(p, source)) throw std::invalid_argument("phihat: point " + to_string(p) + " not on Ehat_n");
    if (p.infinity || p.x == 0) return RationalPoint::at_infinity();
    const mpq_class n2 = mpq_class(target.constant());
    const mpq_class x2 = p.x * p.x, x3 = x2 * p.x;
    RationalPoint img = RationalPoint::affine((x3 - 108 * n2) / (9 * x2), p.y * (x3 + 216 * n2) / (27 * x3));
    if (!on_curve(img, target)) throw std::logic_error("phihat: image not on E_n");
    return img;
}

bool verify_composition(const RationalPoint& p, u64 n) {
    const CurveId curve{n, Side::E};
    return phihat(phi(p, n), n) == multiply(p, 3, curve);
}

std::vector<RationalPoint> search_points(const CurveId& curve, i64 height) {
    std::vector<RationalPoint> out;
    const mpz_class c = curve.constant();
    for (i64 b = 1; b <= height; ++b) {
        for (i64 a = -height; a <= height; ++a) {
            if (std::gcd(a, b) != 1) continue;
            // y^2 = (a^3 + c b^3) / b^3 is a rational square iff (a^3 + c b^3) b is a square
            mpz_class num = mpz_class(static_cast<long>(a)) * a * a + c * b * b * b;
            if (num < 0) continue;
            mpz_class t = num * b;
            if (!mpz_perfect_square_p(t.get_mpz_t())) continue;
            mpz_class root = sqrt(t);
            mpq_class y(root, mpz_class(static_cast<long>(b)) * b);
            RationalPoint pt = RationalPoint::affine(mpq_class(a, b), y);
            out.push_back(pt);
            if (y != 0) out.push_back(negate(pt));
        }
    }
    return out;
}

}  // namespace selmer3
