// End-to-end checks of the leakage-lab binary: documented invocations exit 0,
// reports are valid JSON/CSV with the frozen schema, and identical
// config + seed produces byte-identical output.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef LEAKAGE_LAB_CLI_PATH
#error "LEAKAGE_LAB_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                                 "/leakage_lab_cli_test_out.txt";
    const std::string cmd = std::string(LEAKAGE_LAB_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream is(out_path);
    std::stringstream ss;
    ss << is.rdbuf();
    r.output = ss.str();
    return r;
}

}  // namespace

TEST_CASE("analyze emits a versioned bound report") {
    const auto r = run_cli("analyze --scheme agsh --curve hermitian --field 3^2 --m 7 --theta 0 --mu 1");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j.at("v") == 1);
    CHECK(j.at("scheme") == "agsh");
    CHECK(j.at("n") == 26);
    CHECK(j.at("conditional_code").at("k") == 4);
    CHECK(j.contains("eps_thm1"));
    CHECK(j.contains("eps1"));
    CHECK_FALSE(j.contains("timings"));
}

TEST_CASE("same config and seed give byte-identical reports") {
    const std::string args =
        "analyze --scheme additive --field 3^2 --n 4 --theta 0 --mu 1 --with-sd "
        "--leakage random:7:1 --seed 7";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    const auto j = nlohmann::json::parse(a.output);
    CHECK(j.contains("sd_exact"));
}

TEST_CASE("config file with flag overrides") {
    const std::string cfg_path = "/tmp/leakage_lab_cfg.json";
    {
        std::ofstream os(cfg_path);
        os << R"({"v":1,"scheme":{"scheme":"shamir","field":"5^2","n":6,"t":2},"theta":1,"mu":1})";
    }
    const auto r = run_cli("analyze --config " + cfg_path);
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j.at("scheme") == "shamir");
    CHECK(j.at("theta") == 1);
    // flags win over the file
    const auto r2 = run_cli("analyze --config " + cfg_path + " --theta 0");
    const auto j2 = nlohmann::json::parse(r2.output);
    CHECK(j2.at("theta") == 0);
    // unknown keys are rejected
    {
        std::ofstream os(cfg_path);
        os << R"({"v":1,"scheme":{"scheme":"shamir","field":"5^2","n":6,"t":2},"bogus":3})";
    }
    CHECK(run_cli("analyze --config " + cfg_path).exit_code != 0);
}

TEST_CASE("verify-lemma passes and exits 0 on every lemma") {
    for (const char* lemma :
         {"poisson", "rootsum", "cmpe", "maxcmpe", "newxi", "cmgen", "norm2"}) {
        const auto r = run_cli(std::string("verify-lemma --lemma ") + lemma +
                               " --field 3^2 --trials 10 --seed 3");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.output);
        CHECK(j.at("pass") == true);
        CHECK(j.contains("lhs"));
        CHECK(j.contains("rhs"));
        CHECK(j.contains("margin"));
    }
    CHECK(run_cli("verify-lemma --lemma nope --field 3^2").exit_code != 0);
}

TEST_CASE("sd cross-validates the dual form") {
    const auto r = run_cli(
        R"(sd --field 3^2 --code '{"kind":"rs","n":9,"k":3}' --leakage lowbits:1 --dual)");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j.at("agree") == true);
    CHECK(j.at("code").at("n") == 9);

    const auto r2 = run_cli(
        R"(sd --field 3^2 --code '{"kind":"additive-zero-sum","n":4}' --leakage tracebit)");
    REQUIRE(r2.exit_code == 0);
}

TEST_CASE("attack certifies the transcript relation") {
    const auto r = run_cli("attack --scheme additive --field 3^2 --n 3 --trials 1000 --seed 3");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j.at("relation_holds") == 2000);
    CHECK(j.at("sd_empirical") == 1.0);

    const auto r2 = run_cli("attack --scheme shamir --field 5^2 --n 6 --t 2 --trials 200 --seed 5");
    REQUIRE(r2.exit_code == 0);
}

TEST_CASE("compare emits the frozen CSV schema") {
    const auto r = run_cli("compare --q 25 --mu 2 --N 40:400:20 --T 10 --theta 8");
    REQUIRE(r.exit_code == 0);
    std::stringstream ss(r.output);
    std::string header;
    std::getline(ss, header);
    CHECK(header ==
          "q,mu,N,T,theta,g1,g2,R1,R2,log2_eps1,log2_eps2,log2_eps3,log2_eps4,"
          "eps1,eps2,eps3,eps4,hyp_1vs2,holds_1vs2,hyp_3vs4,holds_3vs4,hyp_1vs3,holds_1vs3,"
          "hyp_mt1better_rho,hyp_mt1better_recip,holds_mt1better,threshold_1vs2,threshold_3vs4");
    size_t rows = 0;
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 19);  // 40..400 step 20
    // deterministic
    CHECK(run_cli("compare --q 25 --mu 2 --N 40:400:20 --T 10 --theta 8").output == r.output);
}

TEST_CASE("share and reconstruct round-trip through the CLI") {
    const auto r = run_cli("share --scheme shamir --field 5^2 --n 6 --t 2 --secret 7 --seed 42");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    const auto shares = j.at("shares").get<std::vector<uint64_t>>();
    REQUIRE(shares.size() == 6);
    std::string idx = "0,1,2", vals;
    for (size_t i = 0; i < 3; ++i) vals += (i ? "," : "") + std::to_string(shares[i]);
    const auto r2 = run_cli("reconstruct --scheme shamir --field 5^2 --n 6 --t 2 --indices " +
                            idx + " --shares " + vals);
    REQUIRE(r2.exit_code == 0);
    const auto j2 = nlohmann::json::parse(r2.output);
    CHECK(j2.at("status") == "ok");
    CHECK(j2.at("secret") == 7);

    // below the threshold: underdetermined, not an error
    const auto r3 = run_cli("reconstruct --scheme shamir --field 5^2 --n 6 --t 2 --indices 0,1 "
                            "--shares " + std::to_string(shares[0]) + "," +
                            std::to_string(shares[1]));
    REQUIRE(r3.exit_code == 0);
    CHECK(nlohmann::json::parse(r3.output).at("status") == "underdetermined");

    // tampering makes an over-determined share set inconsistent
    std::string all_idx, all_vals;
    for (size_t i = 0; i < shares.size(); ++i) {
        all_idx += (i ? "," : "") + std::to_string(i);
        const uint64_t v = i == 0 ? (shares[i] + 1) % 25 : shares[i];
        all_vals += (i ? "," : "") + std::to_string(v);
    }
    const auto r4 = run_cli("reconstruct --scheme shamir --field 5^2 --n 6 --t 2 --indices " +
                            all_idx + " --shares " + all_vals);
    CHECK(r4.exit_code == 2);
    CHECK(r4.output.find("invalid share set") != std::string::npos);
}

TEST_CASE("budget errors surface with the budget name") {
    const auto r = run_cli(
        R"(sd --field 3^2 --code '{"kind":"hermitian","m":12}' --leakage lowbits:1 --budget 1000)");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("budget") != std::string::npos);
}

TEST_CASE("LEAKAGE_LAB_BUDGET env var caps enumerations") {
    const std::string cmd =
        std::string("LEAKAGE_LAB_BUDGET=1000 ") + LEAKAGE_LAB_CLI_PATH +
        R"( sd --field 3^2 --code '{"kind":"hermitian","m":12}' --leakage lowbits:1 2>&1)";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[256];
    while (fgets(buf, sizeof(buf), pipe)) out += buf;
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(out.find("budget") != std::string::npos);
}

TEST_CASE("explicit modulus override is honored") {
    // t^2 + 2t + 2 instead of the default t^2 + 1; shares differ, secrets agree
    const auto a = run_cli("share --scheme additive --field 3^2 --n 3 --secret 5 --seed 1");
    const auto b = run_cli(
        "share --scheme additive --field 3^2 --modulus 2,2,1 --n 3 --secret 5 --seed 1");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(nlohmann::json::parse(a.output).at("secret") ==
          nlohmann::json::parse(b.output).at("secret"));
    // rejecting a reducible override
    const auto c = run_cli(
        "share --scheme additive --field 3^2 --modulus 2,0,1 --n 3 --secret 5 --seed 1");
    CHECK(c.exit_code != 0);
}

TEST_CASE("timings are opt-in") {
    const auto r = run_cli(
        "analyze --scheme additive --field 3^2 --n 3 --theta 0 --mu 1 --timings");
    REQUIRE(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.output).contains("timings"));
}
