#pragma once

// Fourier analysis over F_{p^w}: coefficients f^(alpha) = E_x[f(x) chi_alpha(x)],
// the Poisson summation identity over a linear code and its dual, root-of-unity
// subset sums omega_p^S with the extremal-set construction and a brute-force
// maximum oracle, and the bound constants c_mu, c'_mu, zeta, xi.
//
// Every lemma verified by the test suite is exposed here as a first-class
// check returning both sides, so inequalities are asserted with explicit
// tolerances instead of being buried in test code. Convention: a LemmaCheck
// passes iff lhs <= rhs + tol; for equality-style checks lhs is the absolute
// deviation and rhs the tolerance.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "leakage_lab/budget.hpp"
#include "leakage_lab/codes.hpp"
#include "leakage_lab/gf.hpp"

namespace leakage_lab {

inline constexpr double kTolerance = 1e-9;

// compensated (Kahan) accumulation; partial sums here can reach ~1e6 unit
// terms and the 1e-9 tolerances need the tighter error bound
class KahanSum {
  public:
    void add(std::complex<double> v) {
        add_part(re_, ce_, v.real());
        add_part(im_, ci_, v.imag());
    }
    std::complex<double> value() const { return {re_, im_}; }

  private:
    static void add_part(double& sum, double& comp, double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double re_ = 0, ce_ = 0, im_ = 0, ci_ = 0;
};

// f^(alpha) = (1/q) sum_x f(x) chi_alpha(x)
inline std::complex<double> fourier_coeff(const FieldParams& f,
                                          std::span<const std::complex<double>> table,
                                          uint64_t alpha) {
    if (table.size() != f.q()) throw std::invalid_argument("function table must cover F_q");
    KahanSum acc;
    for (uint64_t x = 0; x < f.q(); ++x) acc.add(table[x] * f.character(alpha, x));
    return acc.value() / static_cast<double>(f.q());
}

inline std::vector<std::complex<double>> fourier_table(
    const FieldParams& f, std::span<const std::complex<double>> table) {
    std::vector<std::complex<double>> out(f.q());
    for (uint64_t a = 0; a < f.q(); ++a) out[a] = fourier_coeff(f, table, a);
    return out;
}

// Fourier coefficients of the indicator of A: 1^_A(alpha) = (1/q) sum_{x in A} chi_alpha(x)
inline std::vector<std::complex<double>> indicator_fourier(const FieldParams& f,
                                                           std::span<const uint64_t> set) {
    std::vector<std::complex<double>> out(f.q());
    for (uint64_t a = 0; a < f.q(); ++a) {
        KahanSum acc;
        for (uint64_t x : set) acc.add(f.character(a, x));
        out[a] = acc.value() / static_cast<double>(f.q());
    }
    return out;
}

// E_{x<-C}[ prod_i f_i(x_i) ] by direct codeword enumeration
inline std::complex<double> poisson_lhs(const LinearCode& c,
                                        std::span<const std::vector<std::complex<double>>> fs,
                                        uint64_t budget = Budgets::global().codewords) {
    if (fs.size() != c.n) throw std::invalid_argument("one function table per coordinate required");
    for (const auto& t : fs)
        if (t.size() != c.field->q()) throw std::invalid_argument("function table must cover F_q");
    KahanSum acc;
    for_each_codeword(
        c,
        [&](uint64_t, std::span<const uint64_t> w) {
            std::complex<double> prod = 1.0;
            for (size_t i = 0; i < w.size(); ++i) prod *= fs[i][w[i]];
            acc.add(prod);
        },
        budget);
    return acc.value() / static_cast<double>(codeword_count(c));
}

// sum_{alpha in C_perp} prod_j f_j^(alpha_j): the dual side of Poisson summation
inline std::complex<double> poisson_rhs(const LinearCode& c,
                                        std::span<const std::vector<std::complex<double>>> fs,
                                        uint64_t budget = Budgets::global().codewords) {
    if (fs.size() != c.n) throw std::invalid_argument("one function table per coordinate required");
    std::vector<std::vector<std::complex<double>>> fhat(c.n);
    for (size_t i = 0; i < c.n; ++i) fhat[i] = fourier_table(*c.field, fs[i]);
    KahanSum acc;
    for_each_codeword(
        dual(c),
        [&](uint64_t, std::span<const uint64_t> alpha) {
            std::complex<double> prod = 1.0;
            for (size_t j = 0; j < alpha.size(); ++j) prod *= fhat[j][alpha[j]];
            acc.add(prod);
        },
        budget);
    return acc.value();
}

// omega_p^S = sum_{i in S} omega_p^{Tr(i)}
inline std::complex<double> omega_sum(const FieldParams& f, std::span<const uint64_t> set) {
    KahanSum acc;
    for (uint64_t x : set) {
        if (x >= f.q()) throw std::invalid_argument("set element out of field range");
        acc.add(f.omega(f.trace(x)));
    }
    return acc.value();
}

struct RootSumProblem {
    Field field;
    std::vector<uint64_t> subset;  // S*
    uint64_t s = 0;                // |S*|
    uint64_t s1 = 0, s2 = 0;       // s = s1 p^{w-1} + s2
};

// S* = T_0 u ... u T_{s1-1} u (first s2 canonical elements of T_{s1});
// the trace-level sets T_i = {x : Tr(x) = i} each have p^{w-1} elements
inline RootSumProblem extremal_set(const Field& field, uint64_t s) {
    const FieldParams& f = *field;
    if (s > f.q() - 1) throw std::invalid_argument("s out of range (need s <= q - 1)");
    const uint64_t level = f.q() / f.p();  // p^{w-1}
    RootSumProblem prob;
    prob.field = field;
    prob.s = s;
    prob.s1 = s / level;
    prob.s2 = s % level;
    uint64_t partial_taken = 0;
    for (uint64_t x = 0; x < f.q(); ++x) {
        const uint32_t tr = f.trace(x);
        if (tr < prob.s1)
            prob.subset.push_back(x);
        else if (tr == prob.s1 && partial_taken < prob.s2) {
            prob.subset.push_back(x);
            ++partial_taken;
        }
    }
    return prob;
}

// |s2 sum_{i<=s1} omega^i + (p^{w-1} - s2) sum_{i<s1} omega^i|
inline double extremal_modulus(const FieldParams& f, uint64_t s) {
    const uint64_t level = f.q() / f.p();
    const uint64_t s1 = s / level, s2 = s % level;
    std::complex<double> inner = 0.0, outer = 0.0;
    for (uint64_t i = 0; i < s1; ++i) outer += f.omega(static_cast<uint32_t>(i % f.p()));
    inner = outer;
    if (s1 < f.p()) inner += f.omega(static_cast<uint32_t>(s1));
    return std::abs(static_cast<double>(s2) * inner +
                    static_cast<double>(level - s2) * outer);
}

// closed form p^{w-1} sin(pi s / p^w) / sin(pi / p)
inline double rootsum_closed_form(const FieldParams& f, uint64_t s) {
    const double level = static_cast<double>(f.q()) / f.p();
    return level * std::sin(std::numbers::pi * static_cast<double>(s) / static_cast<double>(f.q())) /
           std::sin(std::numbers::pi / f.p());
}

inline uint64_t binomial_saturating(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    uint64_t r = 1;
    for (uint64_t i = 1; i <= k; ++i) {
        if (r > UINT64_MAX / (n - k + i)) return UINT64_MAX;
        r = r * (n - k + i) / i;
    }
    return r;
}

// exhaustive max_{|S| = s} |omega_p^S| over all subsets, lexicographic order
inline double root_sum_max_oracle(const FieldParams& f, uint64_t s,
                                  uint64_t budget = Budgets::global().subsets) {
    if (s > f.q() - 1) throw std::invalid_argument("s out of range (need s <= q - 1)");
    if (s == 0) return 0.0;
    const uint64_t total = binomial_saturating(f.q(), s);
    if (total > budget)
        throw BudgetError("subset enumeration too large: C(q,s) = " + std::to_string(total) +
                              " exceeds " + std::to_string(budget),
                          "subsets");
    std::vector<std::complex<double>> contrib(f.q());
    for (uint64_t x = 0; x < f.q(); ++x) contrib[x] = f.omega(f.trace(x));
    std::vector<uint64_t> idx(s);
    for (uint64_t i = 0; i < s; ++i) idx[i] = i;
    double best = 0.0;
    while (true) {
        std::complex<double> sum = 0.0;
        for (uint64_t i : idx) sum += contrib[i];
        best = std::max(best, std::abs(sum));
        // next lexicographic combination
        uint64_t i = s;
        while (i > 0 && idx[i - 1] == f.q() - s + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (uint64_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

// --- bound constants ---

// c_mu = 2^mu sin(pi/2^mu) / (p sin(pi/p)); < 1 exactly when 2^mu < p
inline double c_mu_general(double p, uint32_t mu) {
    if (mu == 0) throw std::invalid_argument("mu must be positive");
    const double lambda = std::ldexp(1.0, static_cast<int>(mu));  // 2^mu
    return lambda * std::sin(std::numbers::pi / lambda) /
           (p * std::sin(std::numbers::pi / p));
}

inline double c_mu(uint32_t p, uint32_t mu) { return c_mu_general(p, mu); }

// c'_mu = 2^mu sin(pi/2^mu + pi/2^{4mu}) / (p sin(pi/p))
inline double c_mu_prime_general(double p, uint32_t mu) {
    if (mu == 0) throw std::invalid_argument("mu must be positive");
    const double lambda = std::ldexp(1.0, static_cast<int>(mu));
    const double lambda4 = std::ldexp(1.0, static_cast<int>(4 * mu));
    return lambda * std::sin(std::numbers::pi / lambda + std::numbers::pi / lambda4) /
           (p * std::sin(std::numbers::pi / p));
}

inline double c_mu_prime(uint32_t p, uint32_t mu) { return c_mu_prime_general(p, mu); }

// zeta_{p^w}(x) = p^w sin(pi x / p^w) / (p sin(pi/p))
inline double zeta(const FieldParams& f, double x) {
    if (x < 0 || x > static_cast<double>(f.q()))
        throw std::invalid_argument("zeta argument out of [0, p^w]");
    return static_cast<double>(f.q()) * std::sin(std::numbers::pi * x / static_cast<double>(f.q())) /
           (f.p() * std::sin(std::numbers::pi / f.p()));
}

// xi(x) = max(zeta(x)/p^w, 2^{-(4mu+1)})
inline double xi(const FieldParams& f, uint32_t mu, double x) {
    if (mu == 0) throw std::invalid_argument("mu must be positive");
    return std::max(zeta(f, x) / static_cast<double>(f.q()),
                    std::ldexp(1.0, -static_cast<int>(4 * mu + 1)));
}

// sum_i |1^_{A_i}(alpha)| over a partition of F_q
inline double partition_coeff_sum(const FieldParams& f,
                                  const std::vector<std::vector<uint64_t>>& parts,
                                  uint64_t alpha) {
    std::vector<uint32_t> seen(f.q(), 0);
    for (const auto& part : parts)
        for (uint64_t x : part) {
            if (x >= f.q()) throw std::invalid_argument("not a partition: element out of range");
            ++seen[x];
        }
    for (uint64_t x = 0; x < f.q(); ++x)
        if (seen[x] != 1) throw std::invalid_argument("not a partition of F_q");
    double total = 0.0;
    for (const auto& part : parts) {
        KahanSum acc;
        for (uint64_t x : part) acc.add(f.character(alpha, x));
        total += std::abs(acc.value()) / static_cast<double>(f.q());
    }
    return total;
}

// --- first-class lemma checks ---

struct LemmaCheck {
    double lhs = 0;
    double rhs = 0;
    double margin = 0;  // rhs - lhs (or the most binding slack for composites)
    bool pass = false;
};

inline LemmaCheck make_check(double lhs, double rhs, double tol = kTolerance) {
    return {lhs, rhs, rhs - lhs, lhs <= rhs + tol};
}

// Poisson summation: |primal - dual| must vanish
inline LemmaCheck check_poisson(const LinearCode& c,
                                std::span<const std::vector<std::complex<double>>> fs,
                                uint64_t budget = Budgets::global().codewords) {
    const auto lhs = poisson_lhs(c, fs, budget);
    const auto rhs = poisson_rhs(c, fs, budget);
    return make_check(std::abs(lhs - rhs), kTolerance, 0.0);
}

// extremal root-of-unity sum: brute-force max equals |omega^{S*}| and obeys
// the closed-form sine bound
inline LemmaCheck check_rootsum(const Field& field, uint64_t s,
                                uint64_t budget = Budgets::global().subsets) {
    const FieldParams& f = *field;
    const double oracle = root_sum_max_oracle(f, s, budget);
    const double star = std::abs(omega_sum(f, extremal_set(field, s).subset));
    const double formula = extremal_modulus(f, s);
    const double bound = rootsum_closed_form(f, s);
    LemmaCheck c;
    c.lhs = oracle;
    c.rhs = bound;
    const double eq_slack = kTolerance - std::max(std::abs(oracle - star), std::abs(star - formula));
    c.margin = std::min(bound - oracle, eq_slack);
    c.pass = c.margin >= -kTolerance;
    return c;
}

namespace detail {

inline uint32_t mu_of_alphabet(size_t alphabet) {
    uint32_t mu = 0;
    while ((size_t{1} << mu) < alphabet) ++mu;
    if ((size_t{1} << mu) != alphabet)
        throw std::invalid_argument("leakage alphabet must be a power of two");
    return mu;
}

inline std::vector<std::vector<uint64_t>> classes_of_table(const FieldParams& f,
                                                           std::span<const uint8_t> table,
                                                           size_t alphabet) {
    if (table.size() != f.q()) throw std::invalid_argument("leakage table must cover F_q");
    std::vector<std::vector<uint64_t>> classes(alphabet);
    for (uint64_t x = 0; x < f.q(); ++x) {
        if (table[x] >= alphabet) throw std::invalid_argument("leakage output out of range");
        classes[table[x]].push_back(x);
    }
    return classes;
}

}  // namespace detail

// Lemma: sum_i |1^_{A_i}(alpha)| <= c_mu for alpha != 0, and = 1 at alpha = 0
inline LemmaCheck check_cmpe(const Field& field, const std::vector<std::vector<uint64_t>>& parts) {
    const FieldParams& f = *field;
    const uint32_t mu = detail::mu_of_alphabet(parts.size());
    const double c = c_mu(f.p(), mu);
    double worst = 0.0;
    for (uint64_t a = 1; a < f.q(); ++a) worst = std::max(worst, partition_coeff_sum(f, parts, a));
    const double at_zero = partition_coeff_sum(f, parts, 0);
    LemmaCheck chk;
    chk.lhs = worst;
    chk.rhs = c;
    chk.margin = std::min(c - worst, kTolerance - std::abs(at_zero - 1.0));
    chk.pass = chk.margin >= -kTolerance;
    return chk;
}

// Lemma: sum_i max_{alpha != 0} |1^_{A_i}(alpha)| <= c_mu
inline LemmaCheck check_maxcmpe(const Field& field,
                                const std::vector<std::vector<uint64_t>>& parts) {
    const FieldParams& f = *field;
    const uint32_t mu = detail::mu_of_alphabet(parts.size());
    double total = 0.0;
    for (const auto& part : parts) {
        const auto fhat = indicator_fourier(f, part);
        double best = 0.0;
        for (uint64_t a = 1; a < f.q(); ++a) best = std::max(best, std::abs(fhat[a]));
        total += best;
    }
    return make_check(total, c_mu(f.p(), mu));
}

// xi property 1: |1^_A(alpha)| <= xi(|A|) off zero and <= 2^{4mu+1} xi(|A|) at zero.
// lhs is the worst violation (should be <= 0), rhs = 0.
inline LemmaCheck check_newxi1(const Field& field, uint32_t mu, std::span<const uint64_t> set) {
    const FieldParams& f = *field;
    const auto fhat = indicator_fourier(f, set);
    const double bound_nz = xi(f, mu, static_cast<double>(set.size()));
    const double bound_z = std::ldexp(1.0, static_cast<int>(4 * mu + 1)) * bound_nz;
    double violation = std::abs(fhat[0]) - bound_z;
    for (uint64_t a = 1; a < f.q(); ++a)
        violation = std::max(violation, std::abs(fhat[a]) - bound_nz);
    return make_check(violation, 0.0);
}

// xi property 2: sum_i xi(|A_i|) <= c'_mu for any partition
inline LemmaCheck check_newxi2(const Field& field, uint32_t mu,
                               const std::vector<std::vector<uint64_t>>& parts) {
    const FieldParams& f = *field;
    double total = 0.0;
    size_t covered = 0;
    for (const auto& part : parts) {
        total += xi(f, mu, static_cast<double>(part.size()));
        covered += part.size();
    }
    if (covered != f.q()) throw std::invalid_argument("not a partition of F_q");
    return make_check(total, c_mu_prime(f.p(), mu));
}

// sum over outputs of the l2 norms of the indicator Fourier tables: <= 2^{mu/2}
inline LemmaCheck check_norm2(const Field& field, std::span<const uint8_t> table,
                              size_t alphabet) {
    const FieldParams& f = *field;
    const uint32_t mu = detail::mu_of_alphabet(alphabet);
    const auto classes = detail::classes_of_table(f, table, alphabet);
    double total = 0.0;
    for (const auto& cls : classes) {
        const auto fhat = indicator_fourier(f, cls);
        double sq = 0.0;
        for (const auto& v : fhat) sq += std::norm(v);
        total += std::sqrt(sq);
    }
    return make_check(total, std::pow(2.0, mu * 0.5));
}

// sum_l max_{alpha in D \ 0} prod_j |1^_{l_j}(alpha_j)| <= 2^{(4mu+1)(kappa-d)} (c'_mu)^kappa
inline LemmaCheck check_cmgen(const LinearCode& d_code,
                              const std::vector<std::vector<uint8_t>>& tables, size_t alphabet,
                              uint64_t budget = Budgets::global().codewords) {
    if (d_code.k == 0) throw std::invalid_argument("cmgen requires a nonzero code");
    if (tables.size() != d_code.n)
        throw std::invalid_argument("one leakage table per coordinate required");
    const FieldParams& f = *d_code.field;
    const uint32_t mu = detail::mu_of_alphabet(alphabet);
    const size_t kappa = d_code.n;
    const size_t dist = min_distance(d_code, budget);

    // per-coordinate, per-output Fourier magnitude tables
    std::vector<std::vector<std::vector<double>>> mag(kappa);
    for (size_t j = 0; j < kappa; ++j) {
        const auto classes = detail::classes_of_table(f, tables[j], alphabet);
        mag[j].resize(alphabet);
        for (size_t l = 0; l < alphabet; ++l) {
            const auto fhat = indicator_fourier(f, classes[l]);
            mag[j][l].resize(f.q());
            for (uint64_t a = 0; a < f.q(); ++a) mag[j][l][a] = std::abs(fhat[a]);
        }
    }
    const auto words = codewords(d_code, budget);
    uint64_t transcripts = 1;
    for (size_t j = 0; j < kappa; ++j) transcripts *= alphabet;
    double total = 0.0;
    std::vector<size_t> ell(kappa, 0);
    for (uint64_t tcount = 0; tcount < transcripts; ++tcount) {
        double best = 0.0;
        for (size_t widx = 1; widx < words.size(); ++widx) {  // skip the zero word
            double prod = 1.0;
            for (size_t j = 0; j < kappa; ++j) prod *= mag[j][ell[j]][words[widx][j]];
            best = std::max(best, prod);
        }
        total += best;
        for (size_t j = 0; j < kappa; ++j) {
            if (++ell[j] < alphabet) break;
            ell[j] = 0;
        }
    }
    const double rhs = std::pow(2.0, static_cast<double>(4 * mu + 1) *
                                         (static_cast<double>(kappa) - static_cast<double>(dist))) *
                       std::pow(c_mu_prime(f.p(), mu), static_cast<double>(kappa));
    return make_check(total, rhs);
}

}  // namespace leakage_lab
