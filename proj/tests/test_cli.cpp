#include "cli.hpp"

#include "sts/simkit.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = sts::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("encode")
{
    auto r = run({"encode", "--field", "5", "--n", "4", "--message", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "# field=5 n=4 k=1 t=1 rho=3 message=1\n1 2 4 3\n");

    r = run({"encode", "--field", "631", "--n", "14", "--message", "511", "--rcrm"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "511 186 532 185 502 547 4 120 445 99 446 129 84 627\n"));
    CHECK(contains(r.out, "rid=3 prio=7 sinr=3 bshash=3\n"));

    r = run({"encode", "--field", "5", "--n", "4", "--k", "1", "--message", "0"});
    CHECK(contains(r.out, "\n0 0 0 0\n"));

    r = run({"encode", "--field", "5", "--n", "3", "--message", "1"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "BlockLengthIncompatible"));

    r = run({"encode", "--field", "512", "--n", "4", "--message", "1"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "NonPrimeModulus"));
}

TEST_CASE("decode and offset")
{
    auto r = run({"decode", "--field", "5", "--n", "4", "--detections", "1,2;2,4;4,3;3,1", "--tau", "4"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "messages=1 2\n"));

    r = run({"decode", "--field", "5", "--n", "4", "--detections", ";;;"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "messages=\n"));

    r = run({"decode", "--field", "5", "--n", "4", "--detections", "1;2;4"});
    CHECK(r.code == 2);

    r = run({"offset", "--field", "5", "--n", "4", "--codeword", "2,3,0,4"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "delta=1 codeword=1 2 4 3 m=1\n"));

    r = run({"offset", "--field", "5", "--n", "4", "--codeword", "4 0 2 1"});
    CHECK(contains(r.out, "delta=3 codeword=1 2 4 3 m=1\n"));

    r = run({"offset", "--field", "5", "--n", "4", "--codeword", "1,1,2,1"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "INVALID"));
}

TEST_CASE("params")
{
    const auto r = run({"params", "--field", "631", "--n", "14", "--far", "0.01"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "t=6\n"));
    CHECK(contains(r.out, "rho=13\n"));
    CHECK(contains(r.out, "separability_bound=631\n"));
    CHECK(contains(r.out, "default_tau=7\n"));
    CHECK(contains(r.out, "alpha=3\n"));
    CHECK(contains(r.out, "threshold=4.60517\n"));
}

TEST_CASE("usage errors")
{
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"encode", "--field", "5"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("validate")
{
    auto r = run({"validate", "--samples", "20000"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "RESULT PASS"));
    CHECK(contains(r.out, "# samples = 20000"));

    r = run({"validate", "--samples", "200000", "--perturb"});
    CHECK(r.code == 1);
    CHECK(contains(r.out, "RESULT FAIL"));

    CHECK(run({"validate", "--config", "/nonexistent.conf"}).code == 2);
    CHECK(run({"validate", "--samples", "0"}).code == 2);
}

TEST_CASE("sweep writes a reproducible CSV")
{
    const auto dir = std::filesystem::temp_directory_path() / "sts_cli_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "exp.conf");
        os << "users = 8\ntrials = 30\nsir_db = -25, -10\n";
    }
    const auto conf = (dir / "exp.conf").string();
    auto r = run({"sweep", "--config", conf, "--out", (dir / "a.csv").string()});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "wrote"));
    r = run({"sweep", "--config", conf, "--out", (dir / "b.csv").string(), "--workers", "2"});
    CHECK(r.code == 0);
    const auto a = slurp(dir / "a.csv");
    CHECK(a == slurp(dir / "b.csv"));
    CHECK(sts::parse_csv(a).size() == 2);

    r = run({"sweep", "--config", conf, "--out", (dir / "c.csv").string(), "--seed", "5"});
    CHECK(slurp(dir / "c.csv") != a);

    r = run({"sweep", "--config", conf, "--out", (dir / "no" / "such" / "x.csv").string()});
    CHECK(r.code == 3);
    CHECK(run({"sweep", "--config", (dir / "missing.conf").string(), "--out", (dir / "d.csv").string()}).code == 2);
    std::filesystem::remove_all(dir);
}
