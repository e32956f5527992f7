#include "sts/error.hpp"
#include "sts/simkit.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

using namespace sts;

namespace {

Errc error_code(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected sts::Error");
    return Errc::IoFailure;
}

SimConfig small_config()
{
    SimConfig cfg;
    cfg.users = 10;
    cfg.trials = 40;
    cfg.sir_db = {-30.0, -15.0, 0.0};
    return cfg;
}

} // namespace

TEST_CASE("error attribution")
{
    using S = UserStatus;
    const std::vector<std::uint64_t> sent{4, 9, 2};

    auto o = classify(sent, {2, 4, 9});
    CHECK(o.status == std::vector<S>{S::Decoded, S::Decoded, S::Decoded});
    CHECK(o.spurious.empty());

    o = classify(sent, {4});
    CHECK(o.status == std::vector<S>{S::Decoded, S::Erasure, S::Erasure});

    // fewer decodes than users: missing users are erasures even with a spurious decode
    o = classify(sent, {4, 100});
    CHECK(o.status == std::vector<S>{S::Decoded, S::Erasure, S::Erasure});
    CHECK(o.spurious == std::vector<std::uint64_t>{100});

    // same cardinality: the substituted user is an error
    o = classify(sent, {4, 9, 100});
    CHECK(o.status == std::vector<S>{S::Decoded, S::Decoded, S::Error});

    o = classify(sent, {4, 100, 101, 102});
    CHECK(o.status == std::vector<S>{S::Decoded, S::Erasure, S::Erasure});

    // more spurious messages than missing users: surplus only affects the false-accept flag
    o = classify(sent, {2, 4, 9, 50, 60});
    CHECK(o.count(S::Decoded) == 3);
    CHECK(o.spurious == std::vector<std::uint64_t>{50, 60});

    o = classify(sent, {7, 8, 60, 60});
    CHECK(o.status == std::vector<S>{S::Error, S::Error, S::Error});
    CHECK(o.decoded == std::vector<std::uint64_t>{7, 8, 60});
}

TEST_CASE("Wilson interval")
{
    auto ci = wilson_interval(0, 10);
    CHECK(ci.lo == 0.0);
    CHECK(ci.hi == doctest::Approx(0.277533).epsilon(1e-5));
    ci = wilson_interval(5, 10);
    CHECK(ci.lo == doctest::Approx(0.236593).epsilon(1e-5));
    CHECK(ci.hi == doctest::Approx(0.763407).epsilon(1e-5));
    ci = wilson_interval(10, 10);
    CHECK(ci.hi == 1.0);
    ci = wilson_interval(0, 0);
    CHECK(ci.lo == 0.0);
    CHECK(ci.hi == 1.0);
}

TEST_CASE("random streams are reproducible and independent")
{
    auto a = stream_rng(1, 5);
    auto b = stream_rng(1, 5);
    auto c = stream_rng(1, 6);
    auto d = stream_rng(2, 5);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("config validation")
{
    SimConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.resolved_tau() == 7);

    auto bad = cfg;
    bad.k = 2; // bound 13 < 30 users
    CHECK(error_code([&] { bad.validate(); }) == Errc::InvalidParameters);
    bad.allow_over_bound = true;
    CHECK_NOTHROW(bad.validate());

    bad = cfg;
    bad.field_order = 512;
    CHECK(error_code([&] { bad.validate(); }) == Errc::NonPrimeModulus);
    bad = cfg;
    bad.n = 13;
    CHECK(error_code([&] { bad.validate(); }) == Errc::BlockLengthIncompatible);
    bad = cfg;
    bad.subcarriers = 600;
    CHECK(error_code([&] { bad.validate(); }) == Errc::InvalidParameters);
    bad = cfg;
    bad.target_far = 1.0;
    CHECK(error_code([&] { bad.validate(); }) == Errc::InvalidParameters);
    bad = cfg;
    bad.tau = 15;
    CHECK(error_code([&] { bad.validate(); }) == Errc::InvalidParameters);
    bad = cfg;
    bad.users = 632;
    bad.allow_over_bound = true;
    CHECK(error_code([&] { bad.validate(); }) == Errc::InvalidParameters);
}

TEST_CASE("messages are distinct and the transmit grid is sparse")
{
    const Experiment ex(SimConfig{});
    auto rng = stream_rng(3, 0);
    const auto msgs = ex.draw_messages(rng);
    CHECK(msgs.size() == 30);
    CHECK(std::set<std::uint64_t>(msgs.begin(), msgs.end()).size() == 30);
    const auto grid = ex.transmit_grid(msgs);
    for (std::size_t n = 0; n < grid.symbols(); ++n)
        CHECK(grid.occupied(n) <= 30);
}

TEST_CASE("trials are deterministic in (seed, index)")
{
    const auto cfg = small_config();
    const auto a = run_trial(cfg, -10.0, 17);
    const auto b = run_trial(cfg, -10.0, 17);
    CHECK(a.sent == b.sent);
    CHECK(a.status == b.status);
    CHECK(a.decoded == b.decoded);
    // the same users are drawn at every SIR
    CHECK(run_trial(cfg, 5.0, 17).sent == a.sent);
    CHECK(run_trial(cfg, -10.0, 18).sent != a.sent);
}

TEST_CASE("noiseless limit decodes every user")
{
    auto cfg = small_config();
    cfg.fading = Fading::AwgnOnly;
    cfg.target_far = 1e-12;
    cfg.users = 30;
    const Experiment ex(cfg);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const auto o = ex.run_trial(30.0, t);
        REQUIRE(o.count(UserStatus::Decoded) == 30);
        REQUIRE(o.spurious.empty());
    }
}

TEST_CASE("vanishing SIR erases every user without errors")
{
    auto cfg = small_config();
    cfg.target_far = 1e-6;
    const Experiment ex(cfg);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const auto o = ex.run_trial(-80.0, t);
        REQUIRE(o.count(UserStatus::Erasure) == cfg.users);
        REQUIRE(o.spurious.empty());
    }
}

TEST_CASE("duplicate messages collapse into one decode")
{
    auto cfg = small_config();
    cfg.fading = Fading::AwgnOnly;
    cfg.target_far = 1e-12;
    const Experiment ex(cfg);
    Rng rng(1);
    const std::vector<std::uint64_t> msgs{42, 42, 7};
    const auto o = ex.run_trial(30.0, msgs, rng);
    CHECK(o.decoded == std::vector<std::uint64_t>{7, 42});
    CHECK(o.count(UserStatus::Decoded) == 3);
}

TEST_CASE("sweep is reproducible and independent of worker count")
{
    auto cfg = small_config();
    const auto one = run_sweep(cfg);
    cfg.workers = 3;
    const auto three = run_sweep(cfg);
    CHECK(format_csv(one) == format_csv(three));
    REQUIRE(one.points.size() == 3);
    // erasures fall as SIR rises
    CHECK(one.points[0].erasure_rate > one.points[2].erasure_rate);
    for (const auto& p : one.points) {
        CHECK(p.trials == 40);
        CHECK(p.user_trials == 400);
        CHECK(p.erasure_ci.lo <= p.erasure_rate);
        CHECK(p.erasure_rate <= p.erasure_ci.hi);
    }
}

TEST_CASE("CSV format and round trip")
{
    CHECK(format_number(0.1234567) == "0.123457");
    CHECK(format_number(-30.0) == "-30");
    CHECK(format_number(1e-7) == "1e-07");

    const auto result = run_sweep(small_config());
    const auto text = format_csv(result);
    CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].sir_db == result.points[i].sir_db);
        CHECK(rows[i].erasure_rate == doctest::Approx(result.points[i].erasure_rate).epsilon(1e-5));
        CHECK(rows[i].trials == 40);
    }
    CHECK(error_code([] { (void)parse_csv("bogus\n"); }) == Errc::ConfigError);
    CHECK(error_code([] { (void)parse_csv(std::string(kCsvHeader) + "\n1,2\n"); }) == Errc::ConfigError);

    const auto dir = std::filesystem::temp_directory_path() / "sts_csv_test";
    std::filesystem::create_directories(dir);
    export_csv(result, dir / "out.csv");
    CHECK(std::filesystem::file_size(dir / "out.csv") == text.size());
    CHECK(error_code([&] { export_csv(result, dir / "missing" / "out.csv"); }) == Errc::IoFailure);
    std::filesystem::remove_all(dir);
}

TEST_CASE("detector validation agrees with closed forms and catches a perturbed model")
{
    ValidationConfig v;
    v.samples = 200000;
    v.thresholds = {3.0, 8.0};
    const auto report = validate_detection(v);
    CHECK(report.tone_power == doctest::Approx(tone_power_for_sir(-21.0, 631, 1.0)));
    // 3 antenna counts x 5 thresholds x (1 noise + 3 occupied)
    CHECK(report.cells.size() == 60);
    CHECK(report.passed());
    const auto text = format_report(report);
    CHECK(text.find("RESULT PASS") != std::string::npos);

    v.analytic_scale = 1.1;
    v.thresholds.clear();
    const auto bad = validate_detection(v);
    CHECK_FALSE(bad.passed());
    CHECK(format_report(bad).find("RESULT FAIL") != std::string::npos);

    v.samples = 0;
    CHECK(error_code([&] { (void)validate_detection(v); }) == Errc::InvalidParameters);
}

TEST_CASE("binomial z-score")
{
    CHECK(binomial_z(50, 100, 0.5) == 0.0);
    CHECK(binomial_z(60, 100, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("zero threshold is certain detection")
{
    ValidationConfig v;
    v.n_rx = {2};
    v.n_user = {1};
    v.far = {};
    v.thresholds = {0.0};
    v.samples = 1000;
    const auto report = validate_detection(v);
    REQUIRE(report.cells.size() == 2);
    CHECK(report.cells[0].analytic == 1.0);
    CHECK(report.cells[0].empirical == 1.0);
    CHECK(report.cells[1].analytic == 0.0);
    CHECK(report.cells[1].empirical == 0.0);
    CHECK(report.passed());
}

TEST_CASE("CSV row count follows the SIR points")
{
    auto cfg = small_config();
    cfg.sir_db = {};
    CHECK(format_csv(run_sweep(cfg)) == std::string(kCsvHeader) + "\n");
    cfg.sir_db = {-12.0};
    cfg.trials = 1;
    const auto one = run_sweep(cfg);
    const auto text = format_csv(one);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    const auto trial = run_trial(cfg, -12.0, 0);
    CHECK(one.points[0].erasures == trial.count(UserStatus::Erasure));
}
