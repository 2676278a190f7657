#pragma once

// Arithmetic in F_p and F_{p^w}: the extension field substrate used by every
// other module. Elements travel as canonical integer encodings
// enc(x) = sum_i coeffs[i] * p^i, which is a bijection F_q <-> [0, q).
// The trace map, the coordinate projection phi_p and the additive characters
// chi_alpha(x) = omega_p^{Tr(alpha x)} live here as well.

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace leakage_lab {

class FieldParams;
using Field = std::shared_ptr<const FieldParams>;

namespace detail {

// dense polynomials over F_p, coefficients low-to-high, trailing zeros trimmed
using PolyFp = std::vector<uint32_t>;

inline void poly_trim(PolyFp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyFp poly_rem(PolyFp a, const PolyFp& f, uint32_t p) {
    // f monic
    while (a.size() >= f.size() && !a.empty()) {
        const uint64_t lead = a.back();
        const size_t shift = a.size() - f.size();
        if (lead != 0) {
            for (size_t i = 0; i < f.size(); ++i) {
                uint64_t v = a[shift + i] + static_cast<uint64_t>(p) * p - lead * f[i] % p;
                a[shift + i] = static_cast<uint32_t>(v % p);
            }
        }
        a.pop_back();
        poly_trim(a);
    }
    return a;
}

inline PolyFp poly_mul_mod(const PolyFp& a, const PolyFp& b, const PolyFp& f, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    PolyFp c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = static_cast<uint32_t>((c[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p);
    }
    poly_trim(c);
    return poly_rem(std::move(c), f, p);
}

// x^e mod f
inline PolyFp poly_pow_x(uint64_t e, const PolyFp& f, uint32_t p) {
    PolyFp result{1};
    PolyFp base = poly_rem({0, 1}, f, p);
    while (e > 0) {
        if (e & 1) result = poly_mul_mod(result, base, f, p);
        base = poly_mul_mod(base, base, f, p);
        e >>= 1;
    }
    return result;
}

inline uint32_t inv_mod_p(uint32_t a, uint32_t p) {
    // Fermat; p prime
    uint64_t r = 1, b = a % p, e = p - 2;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<uint32_t>(r);
}

inline PolyFp poly_gcd(PolyFp a, PolyFp b, uint32_t p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // make b monic before taking the remainder
        PolyFp bm = b;
        const uint32_t lead_inv = inv_mod_p(bm.back(), p);
        for (auto& c : bm) c = static_cast<uint32_t>(static_cast<uint64_t>(c) * lead_inv % p);
        PolyFp r = poly_rem(std::move(a), bm, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; static_cast<uint64_t>(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// no root-free factorization: gcd(f, x^{p^i} - x) = 1 for all i <= w/2
inline bool is_irreducible(const PolyFp& f, uint32_t p, uint32_t w) {
    for (uint32_t i = 1; i <= w / 2; ++i) {
        uint64_t e = 1;
        for (uint32_t j = 0; j < i; ++j) e *= p;
        PolyFp xe = poly_pow_x(e, f, p);
        if (xe.size() < 2) xe.resize(2, 0);
        xe[1] = (xe[1] + p - 1) % p;
        poly_trim(xe);
        PolyFp g = poly_gcd(f, xe, p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace detail

class FieldParams {
  public:
    // modulus defaults to the lexicographically smallest monic irreducible
    // polynomial of degree w over F_p, so fields are reproducible across runs
    static Field make(uint32_t p, uint32_t w);
    static Field make(uint32_t p, uint32_t w, std::vector<uint32_t> modulus);

    uint32_t p() const { return p_; }
    uint32_t w() const { return w_; }
    uint64_t q() const { return q_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    bool same(const FieldParams& o) const {
        return this == &o || (p_ == o.p_ && w_ == o.w_ && modulus_ == o.modulus_);
    }

    std::string spec_string() const { return std::to_string(p_) + "^" + std::to_string(w_); }

    // --- arithmetic on canonical encodings ---

    uint64_t add(uint64_t a, uint64_t b) const {
        if (add_table_) return add_table_[a * q_ + b];
        return add_slow(a, b);
    }

    uint64_t neg(uint64_t a) const {
        if (w_ == 1) return a == 0 ? 0 : q_ - a;
        auto d = digits(a);
        for (uint32_t i = 0; i < w_; ++i) d[i] = d[i] == 0 ? 0 : p_ - d[i];
        return compose(d);
    }

    uint64_t sub(uint64_t a, uint64_t b) const { return add(a, neg(b)); }

    uint64_t mul(uint64_t a, uint64_t b) const {
        if (mul_table_) return mul_table_[a * q_ + b];
        return mul_slow(a, b);
    }

    uint64_t pow(uint64_t a, uint64_t e) const {
        uint64_t r = 1, base = a;
        while (e > 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    uint64_t inv(uint64_t a) const {
        if (a == 0) throw std::domain_error("division by zero");
        if (inv_table_) return inv_table_[a];
        return inv_slow(a);
    }

    uint64_t div(uint64_t a, uint64_t b) const { return mul(a, inv(b)); }

    // Tr(x) = sum_{i<w} x^{p^i}, lands in the prime subfield
    uint32_t trace(uint64_t a) const {
        if (trace_table_) return trace_table_[a];
        return trace_slow(a);
    }

    // first basis coordinate of x with respect to the basis {1, t, ..., t^{w-1}}
    uint32_t phi_p(uint64_t a) const { return static_cast<uint32_t>(a % p_); }

    std::complex<double> omega(uint32_t residue) const { return omega_[residue % p_]; }

    // chi_alpha(x) = omega_p^{Tr(alpha x)}
    std::complex<double> character(uint64_t alpha, uint64_t x) const {
        return omega_[trace(mul(alpha, x))];
    }

    std::vector<uint32_t> coeffs(uint64_t a) const {
        std::vector<uint32_t> c(w_);
        for (uint32_t i = 0; i < w_; ++i) {
            c[i] = static_cast<uint32_t>(a % p_);
            a /= p_;
        }
        return c;
    }

    uint64_t from_coeffs(const std::vector<uint32_t>& c) const {
        if (c.size() != w_) throw std::invalid_argument("coefficient vector length mismatch");
        uint64_t enc = 0;
        for (uint32_t i = w_; i-- > 0;) {
            if (c[i] >= p_) throw std::invalid_argument("coefficient out of range");
            enc = enc * p_ + c[i];
        }
        return enc;
    }

  private:
    FieldParams(uint32_t p, uint32_t w, std::vector<uint32_t> modulus);

    std::array<uint32_t, 8> digits(uint64_t a) const {
        std::array<uint32_t, 8> d{};
        for (uint32_t i = 0; i < w_; ++i) {
            d[i] = static_cast<uint32_t>(a % p_);
            a /= p_;
        }
        return d;
    }

    uint64_t compose(const std::array<uint32_t, 8>& d) const {
        uint64_t enc = 0;
        for (uint32_t i = w_; i-- > 0;) enc = enc * p_ + d[i];
        return enc;
    }

    uint64_t add_slow(uint64_t a, uint64_t b) const {
        auto da = digits(a), db = digits(b);
        for (uint32_t i = 0; i < w_; ++i) {
            da[i] += db[i];
            if (da[i] >= p_) da[i] -= p_;
        }
        return compose(da);
    }

    uint64_t mul_slow(uint64_t a, uint64_t b) const;
    uint64_t inv_slow(uint64_t a) const;
    uint32_t trace_slow(uint64_t a) const;

    uint32_t p_;
    uint32_t w_;
    uint64_t q_;
    std::vector<uint32_t> modulus_;  // length w+1, monic
    std::vector<std::complex<double>> omega_;
    // small-field lookup tables; the polynomial path behaves identically
    std::unique_ptr<uint32_t[]> add_table_;
    std::unique_ptr<uint32_t[]> mul_table_;
    std::unique_ptr<uint32_t[]> inv_table_;
    std::unique_ptr<uint32_t[]> trace_table_;

    static constexpr uint64_t kTableLimit = 512;
};

inline FieldParams::FieldParams(uint32_t p, uint32_t w, std::vector<uint32_t> modulus)
    : p_(p), w_(w), modulus_(std::move(modulus)) {
    if (!detail::is_prime_u32(p)) throw std::invalid_argument("p is not prime");
    if (p > (1u << 16)) throw std::invalid_argument("p exceeds 2^16");
    if (w < 1 || w > 4) throw std::invalid_argument("extension degree w must be in [1,4]");
    q_ = 1;
    for (uint32_t i = 0; i < w; ++i) {
        q_ *= p;
        if (q_ > (1ull << 24)) throw std::invalid_argument("field too large (q > 2^24)");
    }
    if (modulus_.size() != w + 1 || modulus_.back() != 1)
        throw std::invalid_argument("modulus must be monic of degree w");
    for (uint32_t c : modulus_)
        if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
    if (!detail::is_irreducible(modulus_, p, w))
        throw std::invalid_argument("modulus is not irreducible");

    omega_.resize(p_);
    for (uint32_t j = 0; j < p_; ++j) {
        const double angle = 2.0 * std::numbers::pi * j / p_;
        omega_[j] = {std::cos(angle), std::sin(angle)};
    }

    if (q_ <= kTableLimit) {
        add_table_ = std::make_unique<uint32_t[]>(q_ * q_);
        mul_table_ = std::make_unique<uint32_t[]>(q_ * q_);
        inv_table_ = std::make_unique<uint32_t[]>(q_);
        trace_table_ = std::make_unique<uint32_t[]>(q_);
        for (uint64_t a = 0; a < q_; ++a)
            for (uint64_t b = 0; b < q_; ++b) {
                add_table_[a * q_ + b] = static_cast<uint32_t>(add_slow(a, b));
                mul_table_[a * q_ + b] = static_cast<uint32_t>(mul_slow(a, b));
            }
        inv_table_[0] = 0;
        for (uint64_t a = 1; a < q_; ++a) inv_table_[a] = static_cast<uint32_t>(inv_slow(a));
        for (uint64_t a = 0; a < q_; ++a) trace_table_[a] = trace_slow(a);
    }
}

inline uint64_t FieldParams::mul_slow(uint64_t a, uint64_t b) const {
    if (w_ == 1) return a * b % p_;
    const auto da = digits(a), db = digits(b);
    std::array<uint64_t, 16> c{};
    for (uint32_t i = 0; i < w_; ++i) {
        if (da[i] == 0) continue;
        for (uint32_t j = 0; j < w_; ++j) c[i + j] += static_cast<uint64_t>(da[i]) * db[j];
    }
    // reduce degree 2w-2 .. w down using t^w = -(modulus without lead)
    for (uint32_t d = 2 * w_ - 2; d >= w_ && d < 16; --d) {
        const uint64_t coef = c[d] % p_;
        if (coef != 0) {
            for (uint32_t i = 0; i < w_; ++i)
                c[d - w_ + i] += coef * ((p_ - modulus_[i]) % p_);
        }
        c[d] = 0;
        if (d == w_) break;
    }
    std::array<uint32_t, 8> r{};
    for (uint32_t i = 0; i < w_; ++i) r[i] = static_cast<uint32_t>(c[i] % p_);
    return compose(r);
}

inline uint64_t FieldParams::inv_slow(uint64_t a) const {
    if (w_ == 1) return detail::inv_mod_p(static_cast<uint32_t>(a), p_);
    // extended Euclid over F_p[x]
    detail::PolyFp r0 = modulus_;
    detail::PolyFp r1;
    {
        const auto d = digits(a);
        for (uint32_t i = 0; i < w_; ++i) r1.push_back(d[i]);
        detail::poly_trim(r1);
    }
    detail::PolyFp s0{}, s1{1};  // s tracks the coefficient of a
    while (!r1.empty()) {
        // divide r0 by r1
        detail::PolyFp quotient;
        detail::PolyFp rem = r0;
        const uint32_t lead_inv = detail::inv_mod_p(r1.back(), p_);
        if (rem.size() >= r1.size()) quotient.resize(rem.size() - r1.size() + 1, 0);
        while (rem.size() >= r1.size() && !rem.empty()) {
            const uint64_t qc = static_cast<uint64_t>(rem.back()) * lead_inv % p_;
            const size_t shift = rem.size() - r1.size();
            quotient[shift] = static_cast<uint32_t>(qc);
            if (qc != 0) {
                for (size_t i = 0; i < r1.size(); ++i) {
                    uint64_t v =
                        rem[shift + i] + static_cast<uint64_t>(p_) * p_ - qc * r1[i] % p_;
                    rem[shift + i] = static_cast<uint32_t>(v % p_);
                }
            }
            rem.pop_back();
            detail::poly_trim(rem);
        }
        // s2 = s0 - quotient * s1  (no modulus reduction; degrees stay < w+1)
        detail::PolyFp qs(quotient.size() + (s1.empty() ? 1 : s1.size()), 0);
        for (size_t i = 0; i < quotient.size(); ++i)
            for (size_t j = 0; j < s1.size(); ++j)
                qs[i + j] = static_cast<uint32_t>(
                    (qs[i + j] + static_cast<uint64_t>(quotient[i]) * s1[j]) % p_);
        detail::PolyFp s2(std::max(s0.size(), qs.size()), 0);
        for (size_t i = 0; i < s2.size(); ++i) {
            uint64_t v = (i < s0.size() ? s0[i] : 0) + p_ - (i < qs.size() ? qs[i] % p_ : 0);
            s2[i] = static_cast<uint32_t>(v % p_);
        }
        detail::poly_trim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r0 = gcd (a nonzero constant since modulus irreducible); normalize
    const uint32_t scale = detail::inv_mod_p(r0[0], p_);
    std::array<uint32_t, 8> out{};
    for (size_t i = 0; i < s0.size() && i < w_; ++i)
        out[i] = static_cast<uint32_t>(static_cast<uint64_t>(s0[i]) * scale % p_);
    return compose(out);
}

inline uint32_t FieldParams::trace_slow(uint64_t a) const {
    uint64_t acc = 0;
    uint64_t term = a;
    uint64_t pe = 1;
    for (uint32_t i = 0; i < w_; ++i) {
        if (i > 0) {
            pe *= p_;
            term = pow(a, pe);
        }
        acc = add(acc, term);
    }
    // the trace lands in F_p, whose elements encode as [0, p)
    return static_cast<uint32_t>(acc);
}

inline Field FieldParams::make(uint32_t p, uint32_t w, std::vector<uint32_t> modulus) {
    return Field(new FieldParams(p, w, std::move(modulus)));
}

inline Field FieldParams::make(uint32_t p, uint32_t w) {
    if (!detail::is_prime_u32(p)) throw std::invalid_argument("p is not prime");
    if (w < 1 || w > 4) throw std::invalid_argument("extension degree w must be in [1,4]");
    // scan monic degree-w polynomials in encoding order of the low coefficients
    uint64_t count = 1;
    for (uint32_t i = 0; i < w; ++i) count *= p;
    for (uint64_t enc = 0; enc < count; ++enc) {
        std::vector<uint32_t> mod(w + 1, 0);
        uint64_t e = enc;
        for (uint32_t i = 0; i < w; ++i) {
            mod[i] = static_cast<uint32_t>(e % p);
            e /= p;
        }
        mod[w] = 1;
        if (detail::is_irreducible(mod, p, w)) return make(p, w, std::move(mod));
    }
    throw std::logic_error("no irreducible polynomial found");
}

// value type for user-facing arithmetic; hot paths use encodings directly
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(const Field& f, uint64_t enc) : f_(f.get()), enc_(enc) {
        if (enc >= f_->q()) throw std::invalid_argument("encoding out of range");
    }
    FieldElement(const FieldParams* f, uint64_t enc) : f_(f), enc_(enc) {}

    uint64_t enc() const { return enc_; }
    const FieldParams& field() const { return *f_; }
    std::vector<uint32_t> coeffs() const { return f_->coeffs(enc_); }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        a.check(b);
        return {a.f_, a.f_->add(a.enc_, b.enc_)};
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        a.check(b);
        return {a.f_, a.f_->sub(a.enc_, b.enc_)};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        a.check(b);
        return {a.f_, a.f_->mul(a.enc_, b.enc_)};
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        a.check(b);
        return {a.f_, a.f_->div(a.enc_, b.enc_)};
    }
    FieldElement operator-() const { return {f_, f_->neg(enc_)}; }
    FieldElement inverse() const { return {f_, f_->inv(enc_)}; }
    FieldElement pow(uint64_t e) const { return {f_, f_->pow(enc_, e)}; }
    uint32_t trace() const { return f_->trace(enc_); }
    uint32_t phi_p() const { return f_->phi_p(enc_); }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.f_->same(*b.f_) && a.enc_ == b.enc_;
    }

  private:
    void check(const FieldElement& o) const {
        if (!f_->same(*o.f_)) throw std::invalid_argument("field mismatch");
    }

    const FieldParams* f_ = nullptr;
    uint64_t enc_ = 0;
};

// all q elements, once each, in canonical-encoding order
inline std::vector<uint64_t> enumerate_field(const FieldParams& f) {
    std::vector<uint64_t> out(f.q());
    for (uint64_t i = 0; i < f.q(); ++i) out[i] = i;
    return out;
}

inline std::vector<uint64_t> enumerate_field(const Field& f) { return enumerate_field(*f); }

// "p^w" (e.g. "3^2"); a bare prime means w = 1
inline Field parse_field_spec(const std::string& s) {
    const auto caret = s.find('^');
    try {
        if (caret == std::string::npos) return FieldParams::make(std::stoul(s), 1);
        const uint32_t p = std::stoul(s.substr(0, caret));
        const uint32_t w = std::stoul(s.substr(caret + 1));
        return FieldParams::make(p, w);
    } catch (const std::logic_error& e) {
        throw std::invalid_argument("invalid field spec '" + s + "': " + e.what());
    }
}

}  // namespace leakage_lab
