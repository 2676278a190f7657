#pragma once

// Concrete algebraic-geometric codes at desk scale: the rational function
// field (genus 0, Reed-Solomon) and the Hermitian curve y^{q0} + y = x^{q0+1}
// over F_{q0^2} (genus q0(q0-1)/2), both with explicit monomial bases for the
// one-point Riemann-Roch spaces L(m P_inf) and evaluation maps at the affine
// rational points.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "leakage_lab/codes.hpp"
#include "leakage_lab/gf.hpp"
#include "leakage_lab/linalg.hpp"

namespace leakage_lab {

enum class CurveKind { Rational, Hermitian };

struct Curve {
    CurveKind kind = CurveKind::Rational;
    Field field;
    uint32_t q0 = 0;     // subfield size, Hermitian only
    uint32_t genus = 0;  // 0 or q0(q0-1)/2
};

inline Curve make_rational_curve(Field field) {
    Curve c;
    c.kind = CurveKind::Rational;
    c.field = std::move(field);
    return c;
}

inline Curve make_hermitian_curve(Field field) {
    if (field->w() % 2 != 0)
        throw std::invalid_argument("Hermitian curve requires q = q0^2 (even extension degree)");
    Curve c;
    c.kind = CurveKind::Hermitian;
    c.field = std::move(field);
    uint64_t q0 = 1;
    for (uint32_t i = 0; i < c.field->w() / 2; ++i) q0 *= c.field->p();
    c.q0 = static_cast<uint32_t>(q0);
    c.genus = c.q0 * (c.q0 - 1) / 2;
    return c;
}

struct Monomial {
    uint32_t i = 0;  // x exponent
    uint32_t j = 0;  // y exponent (always 0 on the rational curve)

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct RRBasis {
    Curve curve;
    uint32_t m = 0;  // pole order cap at P_inf
    std::vector<Monomial> monomials;

    size_t size() const { return monomials.size(); }
};

// monomial basis of L(m P_inf); pole orders: x has q0, y has q0+1 (Hermitian),
// x has 1 (rational)
inline RRBasis rr_basis(const Curve& curve, uint32_t m) {
    RRBasis b;
    b.curve = curve;
    b.m = m;
    if (curve.kind == CurveKind::Rational) {
        for (uint32_t i = 0; i <= m; ++i) b.monomials.push_back({i, 0});
    } else {
        const uint32_t q0 = curve.q0;
        for (uint32_t i = 0; i * q0 <= m; ++i)
            for (uint32_t j = 0; j < q0 && i * q0 + j * (q0 + 1) <= m; ++j)
                b.monomials.push_back({i, j});
    }
    return b;
}

struct Point {
    uint64_t x = 0;
    uint64_t y = 0;  // unused on the rational curve

    friend bool operator==(const Point&, const Point&) = default;
};

struct PointSet {
    Curve curve;
    std::vector<Point> points;

    size_t size() const { return points.size(); }
};

// all affine rational points in canonical (lexicographic by encoding) order;
// the Hermitian curve has exactly q0^3 of them
inline PointSet enumerate_points(const Curve& curve) {
    PointSet ps;
    ps.curve = curve;
    const FieldParams& f = *curve.field;
    if (curve.kind == CurveKind::Rational) {
        for (uint64_t x = 0; x < f.q(); ++x) ps.points.push_back({x, 0});
        return ps;
    }
    const uint32_t q0 = curve.q0;
    for (uint64_t x = 0; x < f.q(); ++x) {
        const uint64_t rhs = f.pow(x, q0 + 1);
        for (uint64_t y = 0; y < f.q(); ++y)
            if (f.add(f.pow(y, q0), y) == rhs) ps.points.push_back({x, y});
    }
    return ps;
}

inline uint64_t evaluate_monomial(const Curve& curve, const Monomial& mono, const Point& pt) {
    const FieldParams& f = *curve.field;
    uint64_t v = f.pow(pt.x, mono.i);
    if (mono.j != 0) v = f.mul(v, f.pow(pt.y, mono.j));
    return v;
}

inline uint64_t evaluate(const RRBasis& basis, std::span<const uint64_t> f_coeffs,
                         const Point& pt) {
    if (f_coeffs.size() != basis.monomials.size())
        throw std::invalid_argument("coefficient vector length mismatch");
    const FieldParams& f = *basis.curve.field;
    uint64_t acc = 0;
    for (size_t i = 0; i < f_coeffs.size(); ++i)
        if (f_coeffs[i] != 0)
            acc = f.add(acc, f.mul(f_coeffs[i], evaluate_monomial(basis.curve, basis.monomials[i], pt)));
    return acc;
}

// rows = basis monomials, columns = evaluation points
inline Matrix evaluation_matrix(const RRBasis& basis, std::span<const Point> pts) {
    Matrix m(basis.curve.field, basis.monomials.size(), pts.size());
    for (size_t r = 0; r < basis.monomials.size(); ++r)
        for (size_t c = 0; c < pts.size(); ++c)
            m.at(r, c) = evaluate_monomial(basis.curve, basis.monomials[r], pts[c]);
    return m;
}

// C(m P_inf, points): an [n, m - g + 1, d >= n - m] code for 2g-1 <= m < n
inline LinearCode ag_code(const Curve& curve, uint32_t m, const PointSet& pts) {
    const size_t n = pts.points.size();
    if ((curve.genus >= 1 && m + 1 < 2 * curve.genus) || m >= n)
        throw std::invalid_argument("ag_code: m out of range (need 2g-1 <= m < n)");
    const RRBasis basis = rr_basis(curve, m);
    Matrix e = evaluation_matrix(basis, pts.points);
    std::vector<std::vector<uint64_t>> rows(e.rows);
    for (size_t r = 0; r < e.rows; ++r) rows[r].assign(e.row(r).begin(), e.row(r).end());
    return from_generator(curve.field, rows);
}

// rank of the evaluation map L(m P_inf) -> F_q^l restricted to the given
// points; equals l whenever m >= 2g + l - 1
inline size_t eval_map_rank(const Curve& curve, uint32_t m, std::span<const Point> pts) {
    const RRBasis basis = rr_basis(curve, m);
    return rank_of(evaluation_matrix(basis, pts));
}

}  // namespace leakage_lab
