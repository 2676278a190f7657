// leakage-lab: construct ramp secret sharing schemes from AG/MDS codes over
// F_{p^w}, compute exact local-leakage statistical distances, evaluate the
// analytic resilience bounds, run the phi_p trace attack, and verify the
// Fourier lemmas against brute-force oracles.
//
// Subcommands: analyze | sd | attack | compare | verify-lemma | share | reconstruct
// All randomized paths take --seed; identical config + seed reproduces
// byte-identical reports (timing fields are opt-in via --timings).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "leakage_lab/budget.hpp"
#include "leakage_lab/fourier.hpp"
#include "leakage_lab/json_io.hpp"
#include "leakage_lab/leakage.hpp"
#include "leakage_lab/rng.hpp"
#include "leakage_lab/sss.hpp"

namespace ll = leakage_lab;
using ll::ordered_json;

namespace {

struct CommonOpts {
    uint64_t seed = 0;
    std::optional<uint64_t> budget;
    unsigned threads = 1;
    std::string out;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--seed", c.seed, "deterministic seed");
    cmd->add_option("--budget", c.budget, "enumeration budget override");
    cmd->add_option("--threads", c.threads, "worker cap for enumerations");
    cmd->add_option("--out", c.out, "write the report here instead of stdout");
    cmd->add_flag("--timings", c.timings, "include timing fields in the report");
}

void apply_budget(const CommonOpts& c) {
    if (const char* env = std::getenv("LEAKAGE_LAB_BUDGET")) {
        ll::Budgets::global().codewords = std::strtoull(env, nullptr, 10);
        ll::Budgets::global().subsets = ll::Budgets::global().codewords * 10;
    }
    if (c.budget) {
        ll::Budgets::global().codewords = *c.budget;
        ll::Budgets::global().subsets = *c.budget * 10;
    }
}

void emit(const CommonOpts& c, const ordered_json& j) {
    if (c.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream os(c.out);
        if (!os) throw std::runtime_error("cannot open output file: " + c.out);
        os << j.dump(2) << "\n";
    }
}

void emit_text(const CommonOpts& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(c.out);
        if (!os) throw std::runtime_error("cannot open output file: " + c.out);
        os << text;
    }
}

struct SchemeOpts {
    ll::SchemeConfig cfg;
    std::string config_file;
};

void add_scheme_flags(CLI::App* cmd, SchemeOpts& s) {
    cmd->add_option("--config", s.config_file, "JSON config file (flags override)");
    cmd->add_option("--scheme", s.cfg.scheme, "agsh | eagsh | shamir | additive");
    cmd->add_option("--curve", s.cfg.curve, "hermitian | rational");
    cmd->add_option("--field", s.cfg.field_spec, "field spec p^w, e.g. 3^2");
    cmd->add_option("--modulus", s.cfg.modulus,
                    "field modulus coefficients c0,c1,... (low to high)")
        ->delimiter(',');
    cmd->add_option("--m", s.cfg.m, "pole order at P_inf");
    cmd->add_option("--n", s.cfg.n, "player count (shamir/additive)");
    cmd->add_option("--t", s.cfg.t, "privacy threshold (shamir)");
    cmd->add_option("--u", s.cfg.u, "EAGSh subfield degree");
    cmd->add_option("--v", s.cfg.v, "EAGSh expansion factor");
}

// nested scheme object inside a {"v":1, ...} config envelope
void load_scheme_config(const nlohmann::json& j, ll::SchemeConfig& cfg) {
    ll::reject_unknown_keys(j, {"scheme", "curve", "field", "modulus", "m", "n", "t", "u", "v"});
    if (j.contains("scheme")) cfg.scheme = j.at("scheme").get<std::string>();
    if (j.contains("curve")) cfg.curve = j.at("curve").get<std::string>();
    if (j.contains("field")) cfg.field_spec = j.at("field").get<std::string>();
    if (j.contains("modulus")) cfg.modulus = j.at("modulus").get<std::vector<uint32_t>>();
    if (j.contains("m")) cfg.m = j.at("m").get<uint32_t>();
    if (j.contains("n")) cfg.n = j.at("n").get<uint32_t>();
    if (j.contains("t")) cfg.t = j.at("t").get<uint32_t>();
    if (j.contains("u")) cfg.u = j.at("u").get<uint32_t>();
    if (j.contains("v")) cfg.v = j.at("v").get<uint32_t>();
}

nlohmann::json read_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read config file: " + path);
    nlohmann::json j;
    is >> j;
    if (!j.contains("v") || j.at("v").get<int>() != 1)
        throw std::invalid_argument("config must carry schema version \"v\": 1");
    return j;
}

std::vector<size_t> parse_index_list(const std::string& s) {
    std::vector<size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoull(tok));
    }
    return out;
}

std::vector<uint64_t> parse_value_list(const std::string& s) {
    std::vector<uint64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoull(tok));
    }
    return out;
}

// random partition of F_q into `parts` classes (classes may be empty)
std::vector<std::vector<uint64_t>> random_partition(const ll::Field& field, size_t parts,
                                                    ll::Rng& rng) {
    std::vector<std::vector<uint64_t>> out(parts);
    for (uint64_t x = 0; x < field->q(); ++x) out[rng.uniform(parts)].push_back(x);
    return out;
}

std::vector<uint8_t> random_table(const ll::Field& field, size_t alphabet, ll::Rng& rng) {
    std::vector<uint8_t> t(field->q());
    for (auto& v : t) v = static_cast<uint8_t>(rng.uniform(alphabet));
    return t;
}

ll::LinearCode random_code(const ll::Field& field, size_t n, size_t k, ll::Rng& rng) {
    std::vector<std::vector<uint64_t>> rows(k, std::vector<uint64_t>(n));
    for (auto& row : rows)
        for (auto& v : row) v = rng.uniform(field->q());
    return ll::from_generator(field, rows);
}

ll::LemmaCheck run_lemma(const std::string& lemma, const ll::Field& field, uint32_t trials,
                         uint64_t seed, uint32_t mu, size_t n_cap, size_t k_cap) {
    ll::Rng rng(seed);
    ll::LemmaCheck worst;
    worst.margin = 1e300;
    worst.pass = true;
    auto fold = [&](const ll::LemmaCheck& c) {
        if (c.margin < worst.margin) worst = c;
        worst.pass = worst.pass && c.pass;
    };
    const size_t alphabet = size_t{1} << mu;
    if (lemma == "poisson") {
        for (uint32_t t = 0; t < trials; ++t) {
            const size_t n = 2 + rng.uniform(std::max<size_t>(1, n_cap - 1));
            const size_t k = 1 + rng.uniform(std::min<size_t>(k_cap, n));
            const auto code = random_code(field, n, k, rng);
            std::vector<std::vector<std::complex<double>>> fs(n);
            for (auto& tab : fs) {
                tab.resize(field->q());
                for (auto& v : tab)
                    v = {2.0 * rng.uniform_real() - 1.0, 2.0 * rng.uniform_real() - 1.0};
            }
            fold(ll::check_poisson(code, fs));
        }
    } else if (lemma == "rootsum") {
        for (uint64_t s = 1; s <= field->q() - 1; ++s) fold(ll::check_rootsum(field, s));
    } else if (lemma == "cmpe") {
        for (uint32_t t = 0; t < trials; ++t)
            fold(ll::check_cmpe(field, random_partition(field, alphabet, rng)));
    } else if (lemma == "maxcmpe") {
        for (uint32_t t = 0; t < trials; ++t)
            fold(ll::check_maxcmpe(field, random_partition(field, alphabet, rng)));
    } else if (lemma == "newxi") {
        for (uint32_t t = 0; t < trials; ++t) {
            std::vector<uint64_t> set;
            for (uint64_t x = 0; x < field->q(); ++x)
                if (rng.uniform(2)) set.push_back(x);
            fold(ll::check_newxi1(field, mu, set));
            fold(ll::check_newxi2(field, mu, random_partition(field, alphabet, rng)));
        }
    } else if (lemma == "norm2") {
        for (uint32_t t = 0; t < trials; ++t)
            fold(ll::check_norm2(field, random_table(field, alphabet, rng), alphabet));
    } else if (lemma == "cmgen") {
        for (uint32_t t = 0; t < trials; ++t) {
            const size_t kappa = 2 + rng.uniform(std::max<size_t>(1, std::min<size_t>(n_cap, 4) - 1));
            const size_t k = 1 + rng.uniform(std::min<size_t>(k_cap, kappa));
            const auto code = random_code(field, kappa, k, rng);
            if (code.k == 0) continue;
            std::vector<std::vector<uint8_t>> tables(kappa);
            for (auto& tab : tables) tab = random_table(field, alphabet, rng);
            fold(ll::check_cmgen(code, tables, alphabet));
        }
    } else {
        throw std::invalid_argument("unknown lemma: " + lemma +
                                    " (expected poisson|rootsum|cmpe|maxcmpe|newxi|cmgen|norm2)");
    }
    return worst;
}

int do_main(int argc, char** argv) {
    CLI::App app{"leakage-lab: local leakage resilience of ramp secret sharing from AG codes"};
    app.require_subcommand(1);

    // --- analyze ---
    auto* analyze = app.add_subcommand("analyze", "bound report for a scheme + adversary");
    SchemeOpts an_scheme;
    CommonOpts an_common;
    uint32_t an_theta = 0, an_mu = 1;
    std::string an_theta_set, an_leakage;
    std::optional<double> an_g;
    bool an_with_sd = false;
    add_scheme_flags(analyze, an_scheme);
    add_common(analyze, an_common);
    analyze->add_option("--theta", an_theta, "fully corrupted players");
    analyze->add_option("--Theta", an_theta_set, "explicit corruption set, e.g. 0,3,5");
    analyze->add_option("--mu", an_mu, "leakage bits per remaining share");
    analyze->add_option("--g", an_g, "genus term override for the eps1..eps4 family calculators");
    analyze->add_flag("--with-sd", an_with_sd, "also compute the exact SD of the conditional slice");
    analyze->add_option("--leakage", an_leakage, "leakage family for --with-sd");

    // --- sd ---
    auto* sd = app.add_subcommand("sd", "exact / dual-form SD of a code under a leakage family");
    CommonOpts sd_common;
    std::string sd_field, sd_code, sd_code_file, sd_leakage = "lowbits:1";
    bool sd_dual = false;
    add_common(sd, sd_common);
    sd->add_option("--field", sd_field, "field spec p^w");
    sd->add_option("--code", sd_code, "code descriptor JSON");
    sd->add_option("--code-file", sd_code_file, "code descriptor JSON file");
    sd->add_option("--leakage", sd_leakage, "family spec or table JSON");
    sd->add_flag("--dual", sd_dual, "also evaluate the dual-sum form");

    // --- attack ---
    auto* attack = app.add_subcommand("attack", "phi_p trace-projection attack report");
    SchemeOpts atk_scheme;
    CommonOpts atk_common;
    uint32_t atk_trials = 1000;
    uint64_t atk_s0 = 0, atk_s1 = 1;
    add_scheme_flags(attack, atk_scheme);
    add_common(attack, atk_common);
    attack->add_option("--trials", atk_trials, "seeded trials per secret");
    attack->add_option("--s0", atk_s0, "first secret");
    attack->add_option("--s1", atk_s1, "second secret");

    // --- compare ---
    auto* compare = app.add_subcommand("compare", "eps_1..eps_4 regime comparison grid (CSV)");
    CommonOpts cmp_common;
    double cmp_q = 25, cmp_t = 10, cmp_theta = 8;
    uint32_t cmp_mu = 2;
    std::string cmp_n = "40:400:20";
    double cmp_n0 = 4, cmp_nmax = 100000;
    add_common(compare, cmp_common);
    compare->add_option("--q", cmp_q, "field size q (prime square for eps1/eps2, prime for eps3/eps4)");
    compare->add_option("--mu", cmp_mu, "leakage bits");
    compare->add_option("--N", cmp_n, "N grid start:stop:step (or a single value)");
    compare->add_option("--T", cmp_t, "privacy T");
    compare->add_option("--theta", cmp_theta, "corruptions theta");
    compare->add_option("--n0", cmp_n0, "threshold sweep start");
    compare->add_option("--nmax", cmp_nmax, "threshold sweep cap");

    // --- verify-lemma ---
    auto* verify = app.add_subcommand("verify-lemma", "check a lemma against brute force");
    CommonOpts vf_common;
    std::string vf_lemma, vf_field = "3^2";
    uint32_t vf_trials = 50, vf_mu = 2;
    size_t vf_n = 5, vf_k = 3;
    add_common(verify, vf_common);
    verify->add_option("--lemma", vf_lemma, "poisson|rootsum|cmpe|maxcmpe|newxi|cmgen|norm2")
        ->required();
    verify->add_option("--field", vf_field, "field spec p^w");
    verify->add_option("--trials", vf_trials, "random instances");
    verify->add_option("--mu", vf_mu, "leakage bits (the xi partition bounds need mu >= 2)");
    verify->add_option("--n", vf_n, "max code length for random instances");
    verify->add_option("--k", vf_k, "max code dimension for random instances");

    // --- share ---
    auto* share_cmd = app.add_subcommand("share", "produce a seeded share vector");
    SchemeOpts sh_scheme;
    CommonOpts sh_common;
    uint64_t sh_secret = 0;
    add_scheme_flags(share_cmd, sh_scheme);
    add_common(share_cmd, sh_common);
    share_cmd->add_option("--secret", sh_secret, "secret (canonical encoding)");

    // --- reconstruct ---
    auto* rec_cmd = app.add_subcommand("reconstruct", "recover a secret from shares");
    SchemeOpts rc_scheme;
    CommonOpts rc_common;
    std::string rc_indices, rc_shares;
    add_scheme_flags(rec_cmd, rc_scheme);
    add_common(rec_cmd, rc_common);
    rec_cmd->add_option("--indices", rc_indices, "comma-separated share indices (0-based)");
    rec_cmd->add_option("--shares", rc_shares, "comma-separated share encodings");

    CLI11_PARSE(app, argc, argv);

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t_start)
            .count();
    };

    auto resolve_scheme = [&](SchemeOpts& so, CLI::App* cmd, uint32_t* theta, uint32_t* mu,
                              uint64_t* seed) -> ll::RampScheme {
        if (!so.config_file.empty()) {
            const auto j = read_config_file(so.config_file);
            ll::reject_unknown_keys(j, {"v", "scheme", "theta", "mu", "seed"});
            ll::SchemeConfig file_cfg;
            load_scheme_config(j.at("scheme"), file_cfg);
            // flags that were explicitly provided win over the file
            if (cmd->count("--scheme") == 0) so.cfg.scheme = file_cfg.scheme;
            if (cmd->count("--curve") == 0) so.cfg.curve = file_cfg.curve;
            if (cmd->count("--field") == 0) so.cfg.field_spec = file_cfg.field_spec;
            if (cmd->count("--m") == 0) so.cfg.m = file_cfg.m;
            if (cmd->count("--n") == 0) so.cfg.n = file_cfg.n;
            if (cmd->count("--t") == 0) so.cfg.t = file_cfg.t;
            if (cmd->count("--u") == 0) so.cfg.u = file_cfg.u;
            if (cmd->count("--v") == 0) so.cfg.v = file_cfg.v;
            if (theta && j.contains("theta") && cmd->count("--theta") == 0)
                *theta = j.at("theta").get<uint32_t>();
            if (mu && j.contains("mu") && cmd->count("--mu") == 0) *mu = j.at("mu").get<uint32_t>();
            if (seed && j.contains("seed") && cmd->count("--seed") == 0)
                *seed = j.at("seed").get<uint64_t>();
        }
        return ll::scheme_from_config(so.cfg);
    };

    if (*analyze) {
        apply_budget(an_common);
        ll::RampScheme scheme =
            resolve_scheme(an_scheme, analyze, &an_theta, &an_mu, &an_common.seed);
        ll::AdversaryModel adv;
        adv.theta = an_theta;
        adv.mu = an_mu;
        if (!an_theta_set.empty()) adv.explicit_theta = parse_index_list(an_theta_set);
        ll::ReportOptions opt;
        opt.g_override = an_g;
        opt.with_sd = an_with_sd;
        opt.seed = an_common.seed;
        opt.budget = ll::Budgets::global().codewords;
        opt.threads = an_common.threads;
        ll::LeakageFamily fam;
        if (an_with_sd && !an_leakage.empty()) {
            const size_t per_player = scheme.kind == ll::SchemeKind::EAGSh ? scheme.v : 1;
            const size_t slice_n = scheme.n - adv.theta * per_player;
            fam = ll::make_leakage(scheme.share_field, slice_n, an_leakage);
            opt.leakage = &fam;
        }
        ll::BoundReport rep = ll::ll_resilience_report(scheme, adv, opt);
        ordered_json j = ll::to_json(rep);
        if (an_common.timings) j["timings"] = ordered_json{{"total_ms", elapsed_ms()}};
        emit(an_common, j);
        return 0;
    }

    if (*sd) {
        apply_budget(sd_common);
        std::string desc = sd_code;
        if (!sd_code_file.empty()) {
            std::ifstream is(sd_code_file);
            if (!is) throw std::invalid_argument("cannot read code file: " + sd_code_file);
            std::stringstream ss;
            ss << is.rdbuf();
            desc = ss.str();
        }
        if (desc.empty()) throw std::invalid_argument("sd requires --code or --code-file");
        const auto cj = nlohmann::json::parse(desc);
        ll::Field field = cj.contains("field") ? ll::field_from_config(cj.at("field"))
                                               : ll::parse_field_spec(sd_field);
        const ll::LinearCode code = ll::code_from_config(cj, field);
        ll::LeakageFamily fam;
        if (!sd_leakage.empty() && sd_leakage.front() == '{')
            fam = ll::leakage_from_config(nlohmann::json::parse(sd_leakage), field, code.n);
        else
            fam = ll::make_leakage(field, code.n, sd_leakage);
        ordered_json j;
        j["v"] = 1;
        j["field"] = field->spec_string();
        j["code"] = ordered_json{{"n", code.n}, {"k", code.k}};
        j["alphabet"] = fam.alphabet;
        const double sd_exact_v =
            ll::exact_sd(code, fam, ll::Budgets::global().codewords, sd_common.threads);
        j["sd_exact"] = sd_exact_v;
        if (sd_dual) {
            const double dv = ll::sd_dual_form(code, fam);
            j["sd_dual_form"] = dv;
            j["agree"] = std::abs(dv - sd_exact_v) <= ll::kTolerance;
        }
        if (sd_common.timings) j["timings"] = ordered_json{{"total_ms", elapsed_ms()}};
        emit(sd_common, j);
        if (sd_dual && !j["agree"].get<bool>()) return 1;
        return 0;
    }

    if (*attack) {
        apply_budget(atk_common);
        ll::RampScheme scheme = resolve_scheme(atk_scheme, attack, nullptr, nullptr, nullptr);
        const ll::AttackReport rep =
            ll::trace_attack(scheme, atk_trials, atk_common.seed, atk_s0, atk_s1);
        ordered_json j = ll::to_json(rep);
        if (atk_common.timings) j["timings"] = ordered_json{{"total_ms", elapsed_ms()}};
        emit(atk_common, j);
        const bool relation_ok = rep.relation_holds == 2 * rep.trials;
        const bool sd_ok = !rep.separated || rep.sd_empirical == 1.0;
        return relation_ok && sd_ok ? 0 : 1;
    }

    if (*compare) {
        apply_budget(cmp_common);
        double lo = 0, hi = 0, step = 1;
        {
            std::stringstream ss(cmp_n);
            std::string tok;
            std::vector<double> parts;
            while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
            if (parts.size() == 1) {
                lo = hi = parts[0];
            } else if (parts.size() == 3) {
                lo = parts[0];
                hi = parts[1];
                step = parts[2];
            } else {
                throw std::invalid_argument("--N expects a value or start:stop:step");
            }
        }
        const auto thr12 = ll::discover_threshold(ll::Proposition::OneVsTwo, cmp_t, cmp_theta,
                                                  cmp_mu, cmp_q, cmp_n0, cmp_nmax);
        const auto thr34 = ll::discover_threshold(ll::Proposition::ThreeVsFour, cmp_t, cmp_theta,
                                                  cmp_mu, cmp_q, cmp_n0, cmp_nmax);
        std::string csv = ll::regime_csv_header() + "\n";
        for (double n = lo; n <= hi + 1e-9; n += step)
            csv += ll::regime_csv_row(ll::compare_regimes(n, cmp_t, cmp_theta, cmp_mu, cmp_q),
                                      thr12, thr34) +
                   "\n";
        emit_text(cmp_common, csv);
        return 0;
    }

    if (*verify) {
        apply_budget(vf_common);
        const ll::Field field = ll::parse_field_spec(vf_field);
        const ll::LemmaCheck worst =
            run_lemma(vf_lemma, field, vf_trials, vf_common.seed, vf_mu, vf_n, vf_k);
        ordered_json j;
        j["v"] = 1;
        j["lemma"] = vf_lemma;
        j["field"] = field->spec_string();
        j["trials"] = vf_trials;
        j["lhs"] = worst.lhs;
        j["rhs"] = worst.rhs;
        j["margin"] = worst.margin;
        j["pass"] = worst.pass;
        if (vf_common.timings) j["timings"] = ordered_json{{"total_ms", elapsed_ms()}};
        emit(vf_common, j);
        return worst.pass ? 0 : 1;
    }

    if (*share_cmd) {
        apply_budget(sh_common);
        ll::RampScheme scheme =
            resolve_scheme(sh_scheme, share_cmd, nullptr, nullptr, &sh_common.seed);
        const ll::ShareVector sv = ll::share(scheme, sh_secret, sh_common.seed);
        ordered_json j;
        j["v"] = 1;
        j["scheme"] = sh_scheme.cfg.scheme;
        j["secret"] = sv.secret;
        j["seed"] = sh_common.seed;
        j["shares"] = sv.shares;
        emit(sh_common, j);
        return 0;
    }

    if (*rec_cmd) {
        apply_budget(rc_common);
        ll::RampScheme scheme = resolve_scheme(rc_scheme, rec_cmd, nullptr, nullptr, nullptr);
        const auto indices = parse_index_list(rc_indices);
        const auto values = parse_value_list(rc_shares);
        const ll::ReconstructResult res = ll::reconstruct(scheme, indices, values);
        ordered_json j;
        j["v"] = 1;
        j["status"] = res.determined ? "ok" : "underdetermined";
        if (res.determined) j["secret"] = res.secret;
        emit(rc_common, j);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return do_main(argc, argv);
    } catch (const ll::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
