#pragma once

// JSON serialization for reports and parsing of the config descriptors the
// CLI accepts (fields, codes, schemes, leakage families). All emitted
// documents carry a schema version field "v": 1 and use insertion-ordered
// keys so identical inputs produce byte-identical files.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "leakage_lab/codes.hpp"
#include "leakage_lab/fourier.hpp"
#include "leakage_lab/funcfield.hpp"
#include "leakage_lab/leakage.hpp"
#include "leakage_lab/sss.hpp"

namespace leakage_lab {

using ordered_json = nlohmann::ordered_json;

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw std::invalid_argument("unknown config key: " + it.key());
    }
}

// field spec "p^w" with optional explicit "modulus": [c0, c1, ...]
inline Field field_from_config(const nlohmann::json& j) {
    if (j.is_string()) return parse_field_spec(j.get<std::string>());
    reject_unknown_keys(j, {"spec", "modulus"});
    const std::string spec = j.at("spec").get<std::string>();
    const Field base = parse_field_spec(spec);
    if (!j.contains("modulus")) return base;
    return FieldParams::make(base->p(), base->w(), j.at("modulus").get<std::vector<uint32_t>>());
}

inline Curve curve_from_config(const std::string& kind, const Field& field) {
    if (kind == "hermitian") return make_hermitian_curve(field);
    if (kind == "rational") return make_rational_curve(field);
    throw std::invalid_argument("unknown curve kind: " + kind);
}

// {"kind":"generator","rows":[[...]]} | {"kind":"rs","n":..,"k":..}
// | {"kind":"hermitian","m":..} | {"kind":"additive-zero-sum","n":..}
inline LinearCode code_from_config(const nlohmann::json& j, const Field& field) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "generator") {
        reject_unknown_keys(j, {"kind", "field", "rows"});
        return from_generator(field, j.at("rows").get<std::vector<std::vector<uint64_t>>>());
    }
    if (kind == "rs") {
        reject_unknown_keys(j, {"kind", "field", "n", "k"});
        const size_t n = j.at("n").get<size_t>();
        const size_t k = j.at("k").get<size_t>();
        if (k < 1 || k > n) throw std::invalid_argument("rs code requires 1 <= k <= n");
        const Curve curve = make_rational_curve(field);
        PointSet pts = enumerate_points(curve);
        if (n > pts.size()) throw std::invalid_argument("rs code length exceeds q");
        pts.points.resize(n);
        return ag_code(curve, static_cast<uint32_t>(k - 1), pts);
    }
    if (kind == "hermitian") {
        reject_unknown_keys(j, {"kind", "field", "m"});
        const Curve curve = make_hermitian_curve(field);
        return ag_code(curve, j.at("m").get<uint32_t>(), enumerate_points(curve));
    }
    if (kind == "additive-zero-sum") {
        reject_unknown_keys(j, {"kind", "field", "n"});
        const size_t n = j.at("n").get<size_t>();
        Matrix ones(field, 1, n);
        for (size_t i = 0; i < n; ++i) ones.at(0, i) = 1;
        Matrix gen = null_space(ones);
        std::vector<std::vector<uint64_t>> rows(gen.rows);
        for (size_t r = 0; r < gen.rows; ++r) rows[r].assign(gen.row(r).begin(), gen.row(r).end());
        return from_generator(field, rows);
    }
    throw std::invalid_argument("unknown code kind: " + kind);
}

struct SchemeConfig {
    std::string scheme;  // agsh | eagsh | shamir | additive
    std::string curve = "hermitian";
    std::string field_spec;
    std::vector<uint32_t> modulus;  // optional override, low-to-high coefficients
    uint32_t m = 0;
    uint32_t n = 0, t = 0;
    uint32_t u = 1, v = 2;
};

inline RampScheme scheme_from_config(const SchemeConfig& cfg) {
    const Field parsed = parse_field_spec(cfg.field_spec);
    const Field field = cfg.modulus.empty()
                            ? parsed
                            : FieldParams::make(parsed->p(), parsed->w(), cfg.modulus);
    if (cfg.scheme == "agsh") return make_agsh(curve_from_config(cfg.curve, field), cfg.m);
    if (cfg.scheme == "shamir") return make_shamir(field, cfg.n, cfg.t);
    if (cfg.scheme == "additive") return make_additive(field, cfg.n);
    if (cfg.scheme == "eagsh") {
        RampScheme base = cfg.curve == "rational" && cfg.m == 0
                              ? make_shamir(field, cfg.n, cfg.t)
                              : make_agsh(curve_from_config(cfg.curve, field), cfg.m);
        return make_eagsh(base, cfg.u, cfg.v);
    }
    throw std::invalid_argument("unknown scheme: " + cfg.scheme);
}

// leakage: a generator spec string, or {"kind":"table","alphabet":..,"tables":[[..]]}
inline LeakageFamily leakage_from_config(const nlohmann::json& j, const Field& field, size_t n) {
    if (j.is_string()) return make_leakage(field, n, j.get<std::string>());
    reject_unknown_keys(j, {"kind", "alphabet", "p_ary", "tables"});
    if (j.at("kind").get<std::string>() != "table")
        throw std::invalid_argument("unknown leakage kind");
    auto tables = j.at("tables").get<std::vector<std::vector<uint8_t>>>();
    if (tables.size() != n) throw std::invalid_argument("leakage family arity mismatch");
    return make_from_tables(field, std::move(tables), j.at("alphabet").get<size_t>(),
                            j.value("p_ary", false));
}

inline ordered_json to_json(const LemmaCheck& c) {
    return ordered_json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"margin", c.margin}, {"pass", c.pass}};
}

inline ordered_json to_json(const BoundReport& r) {
    ordered_json j;
    j["v"] = 1;
    j["scheme"] = r.scheme;
    j["p"] = r.p;
    j["w"] = r.w;
    j["q"] = r.q;
    j["n"] = r.n;
    j["t"] = r.t;
    j["r"] = r.r;
    j["theta"] = r.theta;
    j["mu"] = r.mu;
    j["genus"] = r.genus;
    j["m"] = r.m;
    j["conditional_code"] = ordered_json{{"n", r.cond_n},
                                         {"k", r.cond_k},
                                         {"dual_distance_lower_bound", r.cond_dual_dist_lb}};
    j["eps_thm1"] = r.eps_thm1;
    j["eps_thm2"] = r.eps_thm2;
    j["thm2_meaningful"] = r.thm2_meaningful;
    j["eps_llr1"] = r.eps_llr1;
    j["eps_llr2"] = r.eps_llr2;
    j["eps_llr_min"] = r.eps_llr_min;
    j["vacuous"] = r.vacuous;
    if (r.eps1) {
        j["g_used"] = r.g_used;
        j["eps1"] = *r.eps1;
        j["eps2"] = *r.eps2;
        j["log2_eps1"] = *r.log2_eps1;
        j["log2_eps2"] = *r.log2_eps2;
        j["eps_mt_min"] = std::min(*r.eps1, *r.eps2);
    }
    if (r.eps3) {
        j["g_used"] = r.g_used;
        j["eps3"] = *r.eps3;
        j["eps4"] = *r.eps4;
        j["log2_eps3"] = *r.log2_eps3;
        j["log2_eps4"] = *r.log2_eps4;
        j["eps_mt_min"] = std::min(*r.eps3, *r.eps4);
    }
    if (r.sd_exact) j["sd_exact"] = *r.sd_exact;
    if (r.sd_dual) j["sd_dual_form"] = *r.sd_dual;
    return j;
}

inline ordered_json to_json(const AttackReport& r) {
    ordered_json j;
    j["v"] = 1;
    j["s0"] = r.s0;
    j["s1"] = r.s1;
    j["trials_per_secret"] = r.trials;
    j["relation_holds"] = r.relation_holds;
    j["relation_total"] = 2 * r.trials;
    j["sd_empirical"] = r.sd_empirical;
    j["separated"] = r.separated;
    j["no_separation"] = r.no_separation;
    j["weights"] = r.weights;
    return j;
}

inline std::string regime_csv_header() {
    return "q,mu,N,T,theta,g1,g2,R1,R2,"
           "log2_eps1,log2_eps2,log2_eps3,log2_eps4,eps1,eps2,eps3,eps4,"
           "hyp_1vs2,holds_1vs2,hyp_3vs4,holds_3vs4,hyp_1vs3,holds_1vs3,"
           "hyp_mt1better_rho,hyp_mt1better_recip,holds_mt1better,"
           "threshold_1vs2,threshold_3vs4";
}

inline std::string regime_csv_row(const RegimePoint& pt, std::optional<double> thr12,
                                  std::optional<double> thr34) {
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    std::string row = num(pt.q) + "," + std::to_string(pt.mu) + "," + num(pt.n) + "," + num(pt.t) +
                      "," + num(pt.theta) + "," + num(pt.g1) + "," + num(pt.g2) + "," + num(pt.r1) +
                      "," + num(pt.r2) + "," + num(pt.log2_eps1) + "," + num(pt.log2_eps2) + "," +
                      num(pt.log2_eps3) + "," + num(pt.log2_eps4) + "," + num(pt.eps1) + "," +
                      num(pt.eps2) + "," + num(pt.eps3) + "," + num(pt.eps4);
    for (bool b : {pt.hyp_1vs2, pt.holds_1vs2, pt.hyp_3vs4, pt.holds_3vs4, pt.hyp_1vs3,
                   pt.holds_1vs3, pt.hyp_mt1better_rho, pt.hyp_mt1better_recip,
                   pt.holds_mt1better})
        row += b ? ",1" : ",0";
    row += "," + (thr12 ? num(*thr12) : std::string("na"));
    row += "," + (thr34 ? num(*thr34) : std::string("na"));
    return row;
}

}  // namespace leakage_lab
