#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"

namespace {

std::string cli() {
    const char* p = std::getenv("WEILLAB_CLI");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string cmd = cli() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

const char* kArnold = "'{\"N\":1,\"matrix\":[[2,1],[1,1]]}'";

}  // namespace

TEST_CASE("verify suites pass and report rows") {
    auto r = run("verify --suite egorov --p 7 --N 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"pass\": true") != std::string::npos);

    auto c = run("verify --suite char --p 5 --N 1");
    CHECK(c.exit_code == 0);
    // |U| rows: count occurrences of "check": "char"
    size_t rows = 0, pos = 0;
    while ((pos = c.output.find("\"check\": \"char\"", pos)) != std::string::npos) {
        ++rows;
        ++pos;
    }
    CHECK(rows > 60);

    CHECK(run("verify --suite mult --p 7 --N 1").exit_code == 0);
    CHECK(run("verify --suite svn --p 5 --N 1").exit_code == 0);
}

TEST_CASE("config errors exit with code 2") {
    CHECK(run("verify --suite egorov --p 4 --N 1").exit_code == 2);
    CHECK(run("verify --suite bogus --p 5 --N 1").exit_code == 2);
    CHECK(run("wigner --catmap '{\"N\":1,\"matrix\":[[2,1],[1,2]]}' --p 13").exit_code == 2);
    CHECK(run("wigner --catmap '{bad json' --p 13").exit_code == 2);
    CHECK(run(std::string("wigner --catmap ") + kArnold + " --p 13 --xi 1,2,3").exit_code == 2);
}

TEST_CASE("bad primes exit with code 3") {
    CHECK(run(std::string("wigner --catmap ") + kArnold + " --p 5").exit_code == 3);
    CHECK(run(std::string("selfred --catmap ") + kArnold + " --p 5").exit_code == 3);
}

TEST_CASE("wigner report: all bounds pass at p = 13") {
    auto r = run(std::string("wigner --catmap ") + kArnold + " --p 13 --xi 1,0 --xi 2,3 --xi 0,1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"violations\": 0") != std::string::npos);
    CHECK(r.output.find("\"schema_version\": \"1\"") != std::string::npos);
    CHECK(r.output.find("\"pass\": false") == std::string::npos);
    // exhaustive default census over all xi != 0
    auto full = run(std::string("wigner --catmap ") + kArnold + " --p 13");
    CHECK(full.exit_code == 0);
    CHECK(full.output.find("\"records_checked\": 2352") != std::string::npos);  // 14 * 168
    CHECK(full.output.find("\"violations\": 0") != std::string::npos);
    // xi = 0 gets a note instead of a bound claim
    auto z = run(std::string("wigner --catmap ") + kArnold + " --p 13 --xi 0,0");
    CHECK(z.exit_code == 0);
    CHECK(z.output.find("span condition violated") != std::string::npos);
    // csv format
    auto c = run(std::string("wigner --catmap ") + kArnold + " --p 13 --xi 1,0 --format csv");
    CHECK(c.exit_code == 0);
    CHECK(c.output.rfind("chi,xi,m_chi", 0) == 0);
}

TEST_CASE("ranksweep output shape") {
    auto r = run(std::string("ranksweep --catmap ") + kArnold + " --pmax 100 --jobs 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("p,r_p,factor_degrees,skipped_flag", 0) == 0);
    CHECK(r.output.find("5,,,1") != std::string::npos);       // p = 5 skipped
    CHECK(r.output.find("freq_r1,1,1,0") != std::string::npos);
    // byte-stable across runs
    auto r2 = run(std::string("ranksweep --catmap ") + kArnold + " --pmax 100 --jobs 2");
    CHECK(r.output == r2.output);
    CHECK(run(std::string("ranksweep --catmap ") + kArnold + " --pmax 2000000").exit_code == 2);
}

TEST_CASE("spectrum and selfred subcommands") {
    auto s = run(std::string("spectrum --catmap ") + kArnold + " --p 13");
    CHECK(s.exit_code == 0);
    CHECK(s.output.find("\"multiplicity_total\": 13") != std::string::npos);
    CHECK(s.output.find("\"ambiguous_spectrum\": false") != std::string::npos);

    auto f = run("selfred --catmap '{\"N\":2,\"matrix\":[[0,0,1,0],[0,0,0,1],[-1,0,2,1],[0,-1,1,-1]]}' --p 5 --samples 30");
    CHECK(f.exit_code == 0);
    CHECK(f.output.find("\"commutant_dim\": 1") != std::string::npos);
    CHECK(f.output.find("\"pass\": true") != std::string::npos);
}
