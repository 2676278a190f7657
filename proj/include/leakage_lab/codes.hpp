#pragma once

// Linear codes over F_q: generator/parity-check pairs, duals, brute-force
// minimum distance, codeword streams, coordinate projection (puncturing),
// and the symbol-expansion map Pi_{u,v} used for code concatenation.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "leakage_lab/budget.hpp"
#include "leakage_lab/gf.hpp"
#include "leakage_lab/linalg.hpp"

namespace leakage_lab {

struct LinearCode {
    Field field;
    size_t n = 0;
    size_t k = 0;
    Matrix generator;  // k x n, row-reduced
    Matrix parity;     // (n-k) x n, row-reduced; generator . parity^T = 0
};

// q^k, saturating at UINT64_MAX
inline uint64_t saturating_pow(uint64_t base, uint64_t exp) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
        r *= base;
    }
    return r;
}

inline uint64_t codeword_count(const LinearCode& c) { return saturating_pow(c.field->q(), c.k); }

inline LinearCode from_generator(Field field, const std::vector<std::vector<uint64_t>>& rows) {
    Matrix g = Matrix::from_rows(field, rows);
    const size_t n = g.cols;
    const size_t k = rref_in_place(g);  // drops dependent rows
    LinearCode code;
    code.field = std::move(field);
    code.n = n;
    code.k = k;
    code.parity = null_space(g);
    rref_in_place(code.parity);
    code.generator = std::move(g);
    return code;
}

inline LinearCode dual(const LinearCode& c) {
    LinearCode d;
    d.field = c.field;
    d.n = c.n;
    d.k = c.n - c.k;
    d.generator = c.parity;
    d.parity = c.generator;
    return d;
}

// Streams every codeword exactly once in message-encoding order, as
// fn(message_index, word). Incremental odometer: stepping message digit i
// from e to e+1 adds (dec(e+1) - dec(e)) * row_i, so each step is O(n).
template <typename Fn>
void for_each_codeword_range(const LinearCode& c, uint64_t begin, uint64_t end, Fn&& fn) {
    const FieldParams& f = *c.field;
    const uint64_t q = f.q();
    if (c.k == 0) {
        std::vector<uint64_t> zero(c.n, 0);
        if (begin == 0 && end > 0) fn(uint64_t{0}, std::span<const uint64_t>(zero));
        return;
    }
    // diff[i][e] = (element(e+1 mod q) - element(e)) * row_i
    std::vector<std::vector<uint64_t>> diff(c.k);
    for (size_t i = 0; i < c.k; ++i) {
        diff[i].resize(q * c.n);
        for (uint64_t e = 0; e < q; ++e) {
            const uint64_t delta = f.sub((e + 1) % q, e);
            for (size_t j = 0; j < c.n; ++j)
                diff[i][e * c.n + j] = f.mul(delta, c.generator.at(i, j));
        }
    }
    std::vector<uint64_t> msg(c.k, 0);
    std::vector<uint64_t> word(c.n, 0);
    {
        uint64_t idx = begin;
        for (size_t i = 0; i < c.k; ++i) {
            msg[i] = idx % q;
            idx /= q;
        }
        for (size_t i = 0; i < c.k; ++i)
            if (msg[i] != 0)
                for (size_t j = 0; j < c.n; ++j)
                    word[j] = f.add(word[j], f.mul(msg[i], c.generator.at(i, j)));
    }
    for (uint64_t m = begin; m < end; ++m) {
        fn(m, std::span<const uint64_t>(word));
        // advance the odometer
        for (size_t i = 0; i < c.k; ++i) {
            const uint64_t e = msg[i];
            const uint64_t* d = diff[i].data() + e * c.n;
            for (size_t j = 0; j < c.n; ++j) word[j] = f.add(word[j], d[j]);
            if (e + 1 < q) {
                msg[i] = e + 1;
                break;
            }
            msg[i] = 0;  // carry
        }
    }
}

template <typename Fn>
void for_each_codeword(const LinearCode& c, Fn&& fn,
                       uint64_t budget = Budgets::global().codewords) {
    const uint64_t total = codeword_count(c);
    if (total > budget)
        throw BudgetError("codeword enumeration too large: q^k = " + std::to_string(total) +
                              " exceeds " + std::to_string(budget),
                          "codewords");
    for_each_codeword_range(c, 0, total, std::forward<Fn>(fn));
}

inline std::vector<std::vector<uint64_t>> codewords(
    const LinearCode& c, uint64_t budget = Budgets::global().codewords) {
    std::vector<std::vector<uint64_t>> out;
    out.reserve(static_cast<size_t>(codeword_count(c)));
    for_each_codeword(
        c, [&](uint64_t, std::span<const uint64_t> w) { out.emplace_back(w.begin(), w.end()); },
        budget);
    return out;
}

// minimum Hamming weight over nonzero codewords; n+1 sentinel for the zero code
inline size_t min_distance(const LinearCode& c, uint64_t budget = Budgets::global().codewords) {
    if (c.k == 0) return c.n + 1;
    const uint64_t total = codeword_count(c);
    if (total > budget)
        throw BudgetError("distance enumeration too large: q^k = " + std::to_string(total) +
                              " exceeds " + std::to_string(budget),
                          "codewords");
    size_t best = c.n + 1;
    for_each_codeword_range(c, 0, total, [&](uint64_t m, std::span<const uint64_t> w) {
        if (m == 0) return;
        size_t wt = 0;
        for (uint64_t x : w) wt += (x != 0);
        if (wt < best) best = wt;
    });
    return best;
}

struct DistanceBound {
    size_t value = 0;  // certified d >= value
    bool exact = false;
};

// certified lower bound on the distance via column independence of the
// parity-check matrix: if every (d-1)-subset of H's columns is independent,
// the distance is at least d; exact when the scan ran to a dependent set
inline DistanceBound parity_distance_bound(const LinearCode& c,
                                           uint64_t budget = Budgets::global().subsets) {
    if (c.k == 0) return {c.n + 1, true};
    const Matrix& h = c.parity;
    if (h.rows == 0) return {1, true};  // full space: any single column dependent (= zero)
    uint64_t checked = 0;
    for (size_t s = 1; s <= c.n; ++s) {
        // test all s-subsets of columns for independence
        std::vector<size_t> idx(s);
        for (size_t i = 0; i < s; ++i) idx[i] = i;
        bool dependent_found = false;
        while (true) {
            if (++checked > budget) return {s, false};
            Matrix sub(c.field, h.rows, s);
            for (size_t r = 0; r < h.rows; ++r)
                for (size_t j = 0; j < s; ++j) sub.at(r, j) = h.at(r, idx[j]);
            if (rank_of(std::move(sub)) < s) {
                dependent_found = true;
                break;
            }
            // next combination
            size_t i = s;
            while (i > 0 && idx[i - 1] == c.n - s + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (dependent_found) return {s, true};
    }
    return {c.n + 1, true};  // no dependent set at all: dual is the zero code
}

// projection of C onto the listed coordinates, re-reduced
inline LinearCode puncture(const LinearCode& c, std::span<const size_t> live) {
    if (live.empty()) throw std::invalid_argument("puncture: empty index set");
    for (size_t idx : live)
        if (idx >= c.n) throw std::invalid_argument("puncture: index out of range");
    std::vector<std::vector<uint64_t>> rows(c.k, std::vector<uint64_t>(live.size()));
    for (size_t r = 0; r < c.k; ++r)
        for (size_t j = 0; j < live.size(); ++j) rows[r][j] = c.generator.at(r, live[j]);
    if (c.k == 0) rows.push_back(std::vector<uint64_t>(live.size(), 0));
    return from_generator(c.field, rows);
}

// Fixed F_{p^u}-linear bijection F_{p^w} -> F_{p^u}^v (w = u*v): coefficients
// with respect to the basis {sigma^i t^j}, where t is the canonical generator
// of F_{p^w} and sigma is the smallest root of F_{p^u}'s modulus in F_{p^w}.
class PiMap {
  public:
    PiMap() = default;

    PiMap(Field from, uint32_t u, uint32_t v) : from_(std::move(from)), u_(u), v_(v) {
        const uint32_t w = from_->w();
        if (u * v != w) throw std::invalid_argument("Pi map requires w = u*v");
        const uint32_t p = from_->p();
        to_ = FieldParams::make(p, u);
        fp_ = FieldParams::make(p, 1);

        uint64_t sigma = 0;
        bool found = false;
        for (uint64_t x = 0; x < from_->q(); ++x) {
            uint64_t acc = 0;  // evaluate the subfield modulus at x
            for (size_t i = to_->modulus().size(); i-- > 0;)
                acc = from_->add(from_->mul(acc, x), to_->modulus()[i]);
            if (acc == 0) {
                sigma = x;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("no subfield modulus root found");
        sigma_ = sigma;

        // column j*u+i holds the F_p-coordinates of t^j sigma^i
        const uint64_t t = w == 1 ? 0 : from_->from_coeffs([&] {
            std::vector<uint32_t> cv(w, 0);
            cv[1] = 1;
            return cv;
        }());
        Matrix basis(fp_, w, w);
        for (uint32_t j = 0; j < v; ++j)
            for (uint32_t i = 0; i < u; ++i) {
                const uint64_t e = from_->mul(from_->pow(t, j), from_->pow(sigma, i));
                const auto coeffs = from_->coeffs(e);
                for (uint32_t r = 0; r < w; ++r) basis.at(r, j * u_ + i) = coeffs[r];
            }
        basis_ = basis;
        // invert by solving against the identity
        inverse_ = Matrix(fp_, w, w);
        Matrix id = Matrix::identity(fp_, w);
        for (uint32_t col = 0; col < w; ++col) {
            auto sol = solve(basis, id.row(col));
            if (!sol.consistent || sol.null_basis.rows != 0)
                throw std::logic_error("Pi basis is singular");
            for (uint32_t r = 0; r < w; ++r) inverse_.at(r, col) = sol.particular[r];
        }
    }

    const Field& from() const { return from_; }
    const Field& to() const { return to_; }
    const Field& prime_field() const { return fp_; }
    uint32_t u() const { return u_; }
    uint32_t v() const { return v_; }
    uint64_t sigma() const { return sigma_; }
    // F_p change-of-basis matrices between power-basis coefficients of
    // F_{p^w} and tower coordinates
    const Matrix& tower_basis() const { return basis_; }
    const Matrix& tower_inverse() const { return inverse_; }

    // expand one F_{p^w} symbol into v F_{p^u} symbols
    void apply(uint64_t x, std::span<uint64_t> out) const {
        const auto cx = from_->coeffs(x);
        std::vector<uint64_t> cvec(cx.begin(), cx.end());
        const auto c = mat_vec(inverse_, cvec);
        for (uint32_t j = 0; j < v_; ++j) {
            uint64_t enc = 0;
            for (uint32_t i = u_; i-- > 0;) enc = enc * from_->p() + c[j * u_ + i];
            out[j] = enc;
        }
    }

    std::vector<uint64_t> apply(uint64_t x) const {
        std::vector<uint64_t> out(v_);
        apply(x, out);
        return out;
    }

    std::vector<uint64_t> apply_vector(std::span<const uint64_t> xs) const {
        std::vector<uint64_t> out(xs.size() * v_);
        for (size_t i = 0; i < xs.size(); ++i) apply(xs[i], std::span(out).subspan(i * v_, v_));
        return out;
    }

    uint64_t inverse(std::span<const uint64_t> symbols) const {
        if (symbols.size() != v_) throw std::invalid_argument("Pi inverse arity mismatch");
        std::vector<uint64_t> c(from_->w());
        for (uint32_t j = 0; j < v_; ++j) {
            uint64_t e = symbols[j];
            for (uint32_t i = 0; i < u_; ++i) {
                c[j * u_ + i] = e % from_->p();
                e /= from_->p();
            }
        }
        const auto coeffs = mat_vec(basis_, c);
        std::vector<uint32_t> cv(coeffs.begin(), coeffs.end());
        return from_->from_coeffs(cv);
    }

    // contribution of sub-symbol slot j with value y to the reassembled
    // F_{p^w} element: emb_j(y) = sum_i coeff_i(y) sigma^i t^j
    uint64_t embed_slot(uint32_t j, uint64_t y) const {
        std::vector<uint64_t> symbols(v_, 0);
        symbols[j] = y;
        return inverse(symbols);
    }

  private:
    Field from_, to_, fp_;
    uint32_t u_ = 0, v_ = 0;
    uint64_t sigma_ = 0;
    Matrix basis_, inverse_;  // over F_p
};

// image of C under Pi_{u,v} applied symbol-wise: a [v n, v k] code over F_{p^u}
inline LinearCode concatenate(const LinearCode& c, uint32_t u, uint32_t v) {
    PiMap pi(c.field, u, v);
    const FieldParams& f = *c.field;
    const uint64_t t = f.w() == 1 ? 0 : f.from_coeffs([&] {
        std::vector<uint32_t> cv(f.w(), 0);
        cv[1] = 1;
        return cv;
    }());
    std::vector<std::vector<uint64_t>> rows;
    rows.reserve(c.k * v);
    for (size_t r = 0; r < c.k; ++r)
        for (uint32_t j = 0; j < v; ++j) {
            const uint64_t scale = f.pow(t, j);
            std::vector<uint64_t> scaled(c.n);
            for (size_t col = 0; col < c.n; ++col) scaled[col] = f.mul(scale, c.generator.at(r, col));
            rows.push_back(pi.apply_vector(scaled));
        }
    if (rows.empty()) rows.push_back(std::vector<uint64_t>(c.n * v, 0));
    return from_generator(pi.to(), rows);
}

// an affine coset of a code living on a subset of ambient coordinates:
// full vectors are (y on live coords | 0 elsewhere) + shift
struct AffineCodeSlice {
    LinearCode code;              // over the live coordinates
    std::vector<uint64_t> shift;  // ambient length
    std::vector<size_t> live;     // ascending ambient indices, |live| = code.n
};

}  // namespace leakage_lab
