#pragma once

// Ramp secret sharing schemes: the AG-code scheme AGSh (sample f in L(m P_inf)
// conditioned on f(P0) = s, share i = f(P_i)), its concatenated variant EAGSh
// (shares expanded through Pi_{u,v}), Shamir (genus-0 special case, secret at
// the field point 0) and additive sharing. All schemes reduce to one
// evaluation model: a basis-evaluation matrix for the share coordinates plus
// an evaluation functional for the secret, so sharing, reconstruction and the
// exact conditional-distribution oracles run through a single linear-algebra
// path.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "leakage_lab/budget.hpp"
#include "leakage_lab/codes.hpp"
#include "leakage_lab/funcfield.hpp"
#include "leakage_lab/gf.hpp"
#include "leakage_lab/linalg.hpp"
#include "leakage_lab/rng.hpp"

namespace leakage_lab {

enum class SchemeKind { AGSh, EAGSh, Additive, Shamir };

struct RampScheme {
    SchemeKind kind = SchemeKind::Additive;
    Field field;        // secret lives here
    Field share_field;  // == field except for EAGSh (F_{p^u})
    uint32_t n = 0;     // shares handed out (N = v * n_base for EAGSh)
    uint32_t t = 0;     // privacy threshold
    uint32_t r = 0;     // reconstruction threshold
    uint32_t genus = 0;
    uint32_t m = 0;  // pole order; m = t + 2g for AGSh, m = t for Shamir

    // evaluation model over the secret field
    Matrix eval_shares;             // dimL x n_base
    std::vector<uint64_t> eval_p0;  // dimL
    uint32_t n_base = 0;

    Curve curve;  // AGSh / Shamir only
    Point p0;
    std::vector<Point> share_points;

    // EAGSh only
    uint32_t u = 0, v = 1;
    PiMap pi;

    size_t dim_l() const { return eval_shares.rows; }
};

struct ShareVector {
    uint64_t secret = 0;
    std::vector<uint64_t> shares;
};

struct ReconstructResult {
    bool determined = false;
    uint64_t secret = 0;  // valid when determined
};

inline RampScheme make_agsh(const Curve& curve, uint32_t m) {
    const uint32_t g = curve.genus;
    if (m <= 2 * g) throw std::invalid_argument("AGSh requires t = m - 2g >= 1");
    RampScheme s;
    s.kind = SchemeKind::AGSh;
    s.field = curve.field;
    s.share_field = curve.field;
    s.curve = curve;
    s.genus = g;
    s.m = m;
    s.t = m - 2 * g;
    s.r = 2 * g + s.t + 1;
    PointSet pts = enumerate_points(curve);
    if (pts.size() < 2) throw std::invalid_argument("curve has too few rational points");
    s.p0 = pts.points.front();
    s.share_points.assign(pts.points.begin() + 1, pts.points.end());
    s.n = static_cast<uint32_t>(s.share_points.size());
    s.n_base = s.n;
    if (s.r > s.n) throw std::invalid_argument("AGSh requires r = 2g + t + 1 <= n");
    const RRBasis basis = rr_basis(curve, m);
    s.eval_shares = evaluation_matrix(basis, s.share_points);
    s.eval_p0.resize(basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
        s.eval_p0[i] = evaluate_monomial(curve, basis.monomials[i], s.p0);
    return s;
}

// classical Shamir: polynomials of degree <= t, secret at 0, shares at the
// n canonically smallest nonzero field points
inline RampScheme make_shamir(Field field, uint32_t n, uint32_t t) {
    if (t < 1 || t >= n) throw std::invalid_argument("Shamir requires 1 <= t < n");
    if (n > field->q() - 1) throw std::invalid_argument("Shamir requires n <= q - 1");
    RampScheme s;
    s.kind = SchemeKind::Shamir;
    s.field = field;
    s.share_field = field;
    s.curve = make_rational_curve(field);
    s.genus = 0;
    s.m = t;
    s.t = t;
    s.r = t + 1;
    s.n = n;
    s.n_base = n;
    s.p0 = Point{0, 0};
    for (uint32_t i = 1; i <= n; ++i) s.share_points.push_back(Point{i, 0});
    const RRBasis basis = rr_basis(s.curve, t);
    s.eval_shares = evaluation_matrix(basis, s.share_points);
    s.eval_p0.resize(basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
        s.eval_p0[i] = evaluate_monomial(s.curve, basis.monomials[i], s.p0);
    return s;
}

inline RampScheme make_additive(Field field, uint32_t n) {
    if (n < 2) throw std::invalid_argument("additive sharing requires n >= 2");
    RampScheme s;
    s.kind = SchemeKind::Additive;
    s.field = field;
    s.share_field = field;
    s.n = n;
    s.n_base = n;
    s.t = n - 1;
    s.r = n;
    s.eval_shares = Matrix::identity(field, n);
    s.eval_p0.assign(n, 1);  // secret = sum of shares
    return s;
}

inline RampScheme make_eagsh(const RampScheme& base, uint32_t u, uint32_t v) {
    if (base.kind != SchemeKind::AGSh && base.kind != SchemeKind::Shamir)
        throw std::invalid_argument("EAGSh requires an AG-code or Shamir base scheme");
    if (u * v != base.field->w()) throw std::invalid_argument("EAGSh requires w = u*v");
    RampScheme s = base;
    s.kind = SchemeKind::EAGSh;
    s.u = u;
    s.v = v;
    s.pi = PiMap(base.field, u, v);
    s.share_field = s.pi.to();
    s.n = v * base.n;
    s.t = base.t;
    s.r = (v - 1) * base.n + base.m + 1;
    return s;
}

namespace detail {

// visit base + sum_i e_i * rows_i for every (e_0..e_{dim-1}) in F_q^dim,
// in encoding order of the coefficient tuple
template <typename Fn>
void enumerate_affine(const FieldParams& f, std::span<const uint64_t> base, const Matrix& rows,
                      Fn&& fn) {
    const uint64_t q = f.q();
    const size_t dim = rows.rows;
    const size_t len = base.size();
    std::vector<uint64_t> digits(dim, 0);
    std::vector<uint64_t> word(base.begin(), base.end());
    // per-row step deltas, as in the codeword odometer
    std::vector<std::vector<uint64_t>> diff(dim);
    for (size_t i = 0; i < dim; ++i) {
        diff[i].resize(q * len);
        for (uint64_t e = 0; e < q; ++e) {
            const uint64_t delta = f.sub((e + 1) % q, e);
            for (size_t j = 0; j < len; ++j) diff[i][e * len + j] = f.mul(delta, rows.at(i, j));
        }
    }
    uint64_t total = 1;
    for (size_t i = 0; i < dim; ++i) total *= q;
    for (uint64_t cnt = 0; cnt < total; ++cnt) {
        fn(std::span<const uint64_t>(word));
        for (size_t i = 0; i < dim; ++i) {
            const uint64_t e = digits[i];
            const uint64_t* d = diff[i].data() + e * len;
            for (size_t j = 0; j < len; ++j) word[j] = f.add(word[j], d[j]);
            if (e + 1 < q) {
                digits[i] = e + 1;
                break;
            }
            digits[i] = 0;
        }
    }
}

// constraint system for { f : f(P0) = s, f(P_i) = x_i for i in theta }
struct ConditionalSystem {
    AffineSolution sol;
    std::vector<size_t> live;  // base share indices not in theta
};

inline ConditionalSystem conditional_system(const RampScheme& scheme, uint64_t secret,
                                            std::span<const size_t> theta,
                                            std::span<const uint64_t> x_theta) {
    if (theta.size() != x_theta.size())
        throw std::invalid_argument("theta and revealed values length mismatch");
    if (theta.size() > scheme.t)
        throw std::invalid_argument("no privacy margin: |theta| exceeds t");
    if (secret >= scheme.field->q()) throw std::invalid_argument("invalid secret");
    std::vector<bool> used(scheme.n_base, false);
    for (size_t i : theta) {
        if (i >= scheme.n_base) throw std::invalid_argument("theta index out of range");
        if (used[i]) throw std::invalid_argument("theta indices must be distinct");
        used[i] = true;
    }
    const size_t dim = scheme.dim_l();
    Matrix constraints(scheme.field, 1 + theta.size(), dim);
    std::vector<uint64_t> rhs(1 + theta.size());
    for (size_t c = 0; c < dim; ++c) constraints.at(0, c) = scheme.eval_p0[c];
    rhs[0] = secret;
    for (size_t i = 0; i < theta.size(); ++i) {
        for (size_t c = 0; c < dim; ++c) constraints.at(1 + i, c) = scheme.eval_shares.at(c, theta[i]);
        rhs[1 + i] = x_theta[i];
    }
    ConditionalSystem sys;
    sys.sol = solve(constraints, rhs);
    if (!sys.sol.consistent) throw std::invalid_argument("invalid share set");
    for (size_t i = 0; i < scheme.n_base; ++i)
        if (!used[i]) sys.live.push_back(i);
    return sys;
}

inline std::vector<uint64_t> eval_at_columns(const RampScheme& scheme,
                                             std::span<const uint64_t> coeffs,
                                             std::span<const size_t> cols) {
    const FieldParams& f = *scheme.field;
    std::vector<uint64_t> out(cols.size(), 0);
    for (size_t c = 0; c < coeffs.size(); ++c) {
        if (coeffs[c] == 0) continue;
        for (size_t j = 0; j < cols.size(); ++j)
            out[j] = f.add(out[j], f.mul(coeffs[c], scheme.eval_shares.at(c, cols[j])));
    }
    return out;
}

}  // namespace detail

// sample f uniformly from { f in L(D) : f(P0) = s }; deterministic per seed
inline ShareVector share(const RampScheme& scheme, uint64_t secret, uint64_t seed) {
    if (secret >= scheme.field->q()) throw std::invalid_argument("invalid secret");
    const FieldParams& f = *scheme.field;
    Matrix p0row(scheme.field, 1, scheme.dim_l());
    for (size_t c = 0; c < scheme.dim_l(); ++c) p0row.at(0, c) = scheme.eval_p0[c];
    const uint64_t rhs[1] = {secret};
    auto sol = solve(p0row, rhs);
    if (!sol.consistent) throw std::logic_error("secret functional is zero");
    Rng rng(seed);
    std::vector<uint64_t> coeffs = sol.particular;
    for (size_t i = 0; i < sol.null_basis.rows; ++i) {
        const uint64_t e = rng.uniform(f.q());
        if (e == 0) continue;
        for (size_t c = 0; c < coeffs.size(); ++c)
            coeffs[c] = f.add(coeffs[c], f.mul(e, sol.null_basis.at(i, c)));
    }
    std::vector<size_t> all(scheme.n_base);
    std::iota(all.begin(), all.end(), size_t{0});
    std::vector<uint64_t> base_shares = detail::eval_at_columns(scheme, coeffs, all);
    ShareVector sv;
    sv.secret = secret;
    if (scheme.kind == SchemeKind::EAGSh)
        sv.shares = scheme.pi.apply_vector(base_shares);
    else
        sv.shares = std::move(base_shares);
    return sv;
}

namespace detail {

// w x w matrix over F_p of multiplication by e in F_{p^w}
inline Matrix mult_matrix(const Field& fq, const Field& fp, uint64_t e) {
    const uint32_t w = fq->w();
    Matrix m(fp, w, w);
    for (uint32_t b = 0; b < w; ++b) {
        uint64_t basis_b = 1;
        for (uint32_t i = 0; i < b; ++i) basis_b *= fq->p();  // element t^b
        const auto col = fq->coeffs(fq->mul(e, basis_b));
        for (uint32_t r = 0; r < w; ++r) m.at(r, b) = col[r];
    }
    return m;
}

inline ReconstructResult reconstruct_eagsh(const RampScheme& scheme,
                                           std::span<const size_t> indices,
                                           std::span<const uint64_t> values) {
    const Field fp = scheme.pi.prime_field();
    const uint32_t w = scheme.field->w();
    const uint32_t u = scheme.u, v = scheme.v;
    const size_t dim = scheme.dim_l();
    const size_t unknowns = dim * w;  // F_p digits of the basis coefficients

    // cache multiplication matrices for the evaluation entries
    const Matrix& pinv = scheme.pi.tower_inverse();
    Matrix sys(fp, indices.size() * u, unknowns);
    std::vector<uint64_t> rhs(indices.size() * u);
    for (size_t s = 0; s < indices.size(); ++s) {
        const size_t base_i = indices[s] / v;
        const uint32_t slot = static_cast<uint32_t>(indices[s] % v);
        if (base_i >= scheme.n_base) throw std::invalid_argument("share index out of range");
        for (size_t c = 0; c < dim; ++c) {
            const Matrix mc = mult_matrix(scheme.field, fp, scheme.eval_shares.at(c, base_i));
            const Matrix rows = mat_mul(pinv, mc);  // tower coords of f(P_i)
            for (uint32_t a = 0; a < u; ++a)
                for (uint32_t b = 0; b < w; ++b)
                    sys.at(s * u + a, c * w + b) = rows.at(slot * u + a, b);
        }
        uint64_t y = values[s];
        if (y >= scheme.share_field->q()) throw std::invalid_argument("share value out of range");
        for (uint32_t a = 0; a < u; ++a) {
            rhs[s * u + a] = y % scheme.field->p();
            y /= scheme.field->p();
        }
    }
    auto sol = solve(sys, rhs);
    if (!sol.consistent) throw std::invalid_argument("invalid share set");

    // secret digit b = row b of sum_c M_{eval_p0[c]} applied to digit block c
    Matrix secret_map(fp, w, unknowns);
    for (size_t c = 0; c < dim; ++c) {
        const Matrix mc = mult_matrix(scheme.field, fp, scheme.eval_p0[c]);
        for (uint32_t a = 0; a < w; ++a)
            for (uint32_t b = 0; b < w; ++b) secret_map.at(a, c * w + b) = mc.at(a, b);
    }
    for (size_t i = 0; i < sol.null_basis.rows; ++i) {
        const auto img = mat_vec(secret_map, sol.null_basis.row(i));
        for (uint64_t x : img)
            if (x != 0) return {false, 0};
    }
    const auto digits = mat_vec(secret_map, sol.particular);
    std::vector<uint32_t> cv(digits.begin(), digits.end());
    return {true, scheme.field->from_coeffs(cv)};
}

}  // namespace detail

// Solve for the coset of f pinned by the given shares. Returns the secret if
// it is constant on the solution space, "underdetermined" otherwise;
// inconsistent shares (no f matches) throw "invalid share set".
inline ReconstructResult reconstruct(const RampScheme& scheme, std::span<const size_t> indices,
                                     std::span<const uint64_t> values) {
    if (indices.size() != values.size())
        throw std::invalid_argument("indices and shares length mismatch");
    std::vector<bool> seen(scheme.n, false);
    for (size_t i : indices) {
        if (i >= scheme.n) throw std::invalid_argument("share index out of range");
        if (seen[i]) throw std::invalid_argument("share indices must be distinct");
        seen[i] = true;
    }
    if (scheme.kind == SchemeKind::EAGSh) return detail::reconstruct_eagsh(scheme, indices, values);

    const FieldParams& f = *scheme.field;
    Matrix sys(scheme.field, indices.size(), scheme.dim_l());
    for (size_t r = 0; r < indices.size(); ++r) {
        if (values[r] >= f.q()) throw std::invalid_argument("share value out of range");
        for (size_t c = 0; c < scheme.dim_l(); ++c)
            sys.at(r, c) = scheme.eval_shares.at(c, indices[r]);
    }
    auto sol = solve(sys, values);
    if (!sol.consistent) throw std::invalid_argument("invalid share set");
    for (size_t i = 0; i < sol.null_basis.rows; ++i) {
        uint64_t dot = 0;
        for (size_t c = 0; c < scheme.dim_l(); ++c)
            dot = f.add(dot, f.mul(scheme.eval_p0[c], sol.null_basis.at(i, c)));
        if (dot != 0) return {false, 0};
    }
    uint64_t secret = 0;
    for (size_t c = 0; c < scheme.dim_l(); ++c)
        secret = f.add(secret, f.mul(scheme.eval_p0[c], sol.particular[c]));
    return {true, secret};
}

// Exact multiset of the remaining shares given that the secret is `secret`
// and the shares at `theta` (base-share indices) are pinned to x_theta.
// Enumerates the q^{dimL - |theta| - 1} functions satisfying the constraints;
// for EAGSh the returned vectors are the live sub-shares over F_{p^u}.
inline std::vector<std::vector<uint64_t>> conditional_share_distribution(
    const RampScheme& scheme, uint64_t secret, std::span<const size_t> theta,
    std::span<const uint64_t> x_theta, uint64_t budget = Budgets::global().codewords) {
    auto sys = detail::conditional_system(scheme, secret, theta, x_theta);
    const uint64_t count = saturating_pow(scheme.field->q(), sys.sol.null_basis.rows);
    if (count > budget)
        throw BudgetError("conditional distribution enumeration too large: " +
                              std::to_string(count) + " exceeds " + std::to_string(budget),
                          "codewords");
    // evaluate the affine family on the live coordinates
    std::vector<uint64_t> base_vec =
        detail::eval_at_columns(scheme, sys.sol.particular, sys.live);
    Matrix rows(scheme.field, sys.sol.null_basis.rows, sys.live.size());
    for (size_t i = 0; i < rows.rows; ++i) {
        const auto ev = detail::eval_at_columns(scheme, sys.sol.null_basis.row(i), sys.live);
        for (size_t j = 0; j < ev.size(); ++j) rows.at(i, j) = ev[j];
    }
    std::vector<std::vector<uint64_t>> out;
    out.reserve(static_cast<size_t>(count));
    detail::enumerate_affine(*scheme.field, base_vec, rows, [&](std::span<const uint64_t> w) {
        if (scheme.kind == SchemeKind::EAGSh)
            out.push_back(scheme.pi.apply_vector(w));
        else
            out.emplace_back(w.begin(), w.end());
    });
    return out;
}

// The conditional distribution as a code coset (Lemma form): C' is the
// evaluation image of the kernel subspace at the live points, b a particular
// solution; the conditional distribution equals {(y|0) + b : y <- C'}.
inline AffineCodeSlice build_conditional_code(const RampScheme& scheme, uint64_t secret,
                                              std::span<const size_t> theta,
                                              std::span<const uint64_t> x_theta) {
    auto sys = detail::conditional_system(scheme, secret, theta, x_theta);
    std::vector<size_t> all(scheme.n_base);
    std::iota(all.begin(), all.end(), size_t{0});
    const std::vector<uint64_t> b_base = detail::eval_at_columns(scheme, sys.sol.particular, all);

    std::vector<std::vector<uint64_t>> base_rows(sys.sol.null_basis.rows);
    for (size_t i = 0; i < base_rows.size(); ++i)
        base_rows[i] = detail::eval_at_columns(scheme, sys.sol.null_basis.row(i), sys.live);

    AffineCodeSlice slice;
    if (scheme.kind != SchemeKind::EAGSh) {
        if (base_rows.empty()) base_rows.push_back(std::vector<uint64_t>(sys.live.size(), 0));
        slice.code = from_generator(scheme.field, base_rows);
        slice.shift = b_base;
        slice.live = sys.live;
        return slice;
    }

    const FieldParams& f = *scheme.field;
    const uint64_t t_gen = f.w() == 1 ? 0 : f.from_coeffs([&] {
        std::vector<uint32_t> cv(f.w(), 0);
        cv[1] = 1;
        return cv;
    }());
    std::vector<std::vector<uint64_t>> rows;
    for (const auto& br : base_rows)
        for (uint32_t j = 0; j < scheme.v; ++j) {
            const uint64_t scale = f.pow(t_gen, j);
            std::vector<uint64_t> scaled(br.size());
            for (size_t c = 0; c < br.size(); ++c) scaled[c] = f.mul(scale, br[c]);
            rows.push_back(scheme.pi.apply_vector(scaled));
        }
    if (rows.empty()) rows.push_back(std::vector<uint64_t>(sys.live.size() * scheme.v, 0));
    slice.code = from_generator(scheme.share_field, rows);
    slice.shift = scheme.pi.apply_vector(b_base);
    for (size_t base_i : sys.live)
        for (uint32_t j = 0; j < scheme.v; ++j) slice.live.push_back(base_i * scheme.v + j);
    return slice;
}

}  // namespace leakage_lab
