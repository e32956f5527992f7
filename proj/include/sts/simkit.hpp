#pragma once

// Seeded Monte Carlo engine for multi-user coded single-tone signaling:
// encode -> modulate -> per-user channel -> energy detection -> list decode,
// swept over SIR, plus empirical-vs-closed-form checks of the detector.

#include "sts/codec.hpp"
#include "sts/phy.hpp"
#include "sts/rcrm.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sts {

struct SimConfig {
    std::uint32_t field_order = 631;
    std::size_t n = 14;
    std::size_t k = 1;
    std::size_t subcarriers = 631;
    /// Simultaneous users d.
    std::size_t users = 30;
    std::size_t n_rx = 1;
    std::size_t n_tx = 1;
    double noise_var = 1.0;
    Fading fading = Fading::Rayleigh;
    double fade_correlation = 0.0;
    double target_far = 1e-2;
    std::vector<double> sir_db;
    std::size_t trials = 2000;
    /// 0 selects default_tau().
    std::size_t tau = 0;
    std::uint64_t master_seed = 1;
    /// Permit more users than the separability bound.
    bool allow_over_bound = false;
    /// Worker threads for run_sweep; results do not depend on it.
    unsigned workers = 1;

    CodeParams code_params() const;
    ChannelConfig channel() const;
    std::size_t resolved_tau() const;
    /// Throws Errc::InvalidParameters (or the codec's errors) on bad values.
    void validate() const;
};

enum class UserStatus { Decoded, Erasure, Error };

struct TrialOutcome {
    /// Message sent by each user, in user order.
    std::vector<std::uint64_t> sent;
    std::vector<UserStatus> status;
    /// Everything the decoder accepted, ascending.
    std::vector<std::uint64_t> decoded;
    /// Decoded messages nobody sent, ascending.
    std::vector<std::uint64_t> spurious;

    std::size_t count(UserStatus s) const noexcept;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for k successes out of n (95% by default).
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

struct SweepPoint {
    double sir_db = 0.0;
    std::size_t trials = 0;
    std::uint64_t user_trials = 0;
    std::uint64_t erasures = 0;
    std::uint64_t errors = 0;
    /// Trials in which at least one message nobody sent was decoded.
    std::uint64_t false_accept_trials = 0;

    double erasure_rate = 0.0;
    double error_rate = 0.0;
    double false_accept_rate = 0.0;
    Interval erasure_ci;
    Interval error_ci;
    Interval false_accept_ci;
};

struct SweepResult {
    SimConfig config;
    std::vector<SweepPoint> points;
};

/// Independent generator for stream `stream` of a master seed.
Rng stream_rng(std::uint64_t master_seed, std::uint64_t stream);

/// Classify users against the decoded list. A user whose message is missing is
/// an error when the decoded list has as many messages as were sent (and so
/// contains one nobody sent), otherwise an erasure.
TrialOutcome classify(std::span<const std::uint64_t> sent, std::vector<std::uint64_t> decoded);

/// Precomputes the transform, codebook and detection threshold once so that
/// trials share them.
class Experiment {
public:
    explicit Experiment(SimConfig cfg);

    const SimConfig& config() const noexcept { return cfg_; }
    const CodeParams& params() const noexcept { return params_; }
    double threshold() const noexcept { return threshold_; }
    std::size_t tau() const noexcept { return tau_; }

    /// d distinct uniformly drawn messages.
    std::vector<std::uint64_t> draw_messages(Rng& rng) const;

    /// Deterministic in (master_seed, trial_index); SIR points share the stream.
    TrialOutcome run_trial(double sir_db, std::uint64_t trial_index) const;
    /// Run one trial for explicit messages (duplicates allowed).
    TrialOutcome run_trial(double sir_db, std::span<const std::uint64_t> messages, Rng& rng) const;

    /// Superposed transmit grid of the given messages at unit tone power.
    ToneGrid transmit_grid(std::span<const std::uint64_t> messages) const;

    SweepResult run_sweep() const;

private:
    SimConfig cfg_;
    CodeParams params_;
    GftContext ctx_;
    Codebook book_;
    double threshold_;
    std::size_t tau_;
};

TrialOutcome run_trial(const SimConfig& cfg, double sir_db, std::uint64_t trial_index);
SweepResult run_sweep(const SimConfig& cfg);

/// A user's serving base station and the request it broadcasts.
struct RcrmUser {
    std::uint32_t bsid = 0;
    Rcrm request;
};

/// Users spread round-robin over base stations; users of one base station
/// get distinct resource ids, so they never collide with each other.
/// Requires users <= 4 * base_stations.
std::vector<RcrmUser> rcrm_scenario(std::size_t users, std::span<const std::uint32_t> base_stations,
                                    std::uint64_t timeslot, Rng& rng);

// ---- detector validation -------------------------------------------------

struct ValidationConfig {
    double noise_var = 1.0;
    std::size_t subcarriers = 631;
    /// Sets the occupied-tone power through tone_power_for_sir.
    double sir_db = -21.0;
    std::vector<std::size_t> n_rx = {1, 2, 4};
    std::vector<std::size_t> n_user = {1, 2, 4};
    std::vector<double> far = {1e-3, 1e-2, 1e-1};
    /// Raw thresholds checked in addition to the ones derived from `far`.
    std::vector<double> thresholds;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    /// Multiplies every analytic probability; 1 for a real check. Test hook.
    double analytic_scale = 1.0;

    void validate() const;
};

struct ValidationCell {
    enum class Kind { FalseAlarm, Erasure };
    Kind kind = Kind::FalseAlarm;
    std::size_t n_rx = 1;
    /// 0 for noise-only cells.
    std::size_t n_user = 0;
    /// Design false-alarm rate, or 0 for a raw threshold.
    double target_far = 0.0;
    double threshold = 0.0;
    double analytic = 0.0;
    double empirical = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t events = 0;
    double z = 0.0;

    bool passed(double limit = 3.0) const noexcept;
};

struct ValidationReport {
    double tone_power = 0.0;
    std::vector<ValidationCell> cells;

    bool passed(double limit = 3.0) const noexcept;
};

/// (empirical - analytic) / binomial standard deviation.
double binomial_z(std::uint64_t events, std::uint64_t samples, double analytic) noexcept;

ValidationReport validate_detection(const ValidationConfig& cfg);
/// Validation at the sweep's noise level, subcarrier count, seed and design FAR.
ValidationReport validate_detection(const SimConfig& cfg, double sir_db);

std::string format_report(const ValidationReport& report);

// ---- CSV -----------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "sir_db,erasure_rate,erasure_ci_lo,erasure_ci_hi,error_rate,error_ci_lo,error_ci_hi,false_accept_rate,trials";

std::string format_csv(const SweepResult& result);
/// Throws Errc::IoFailure if the file cannot be written.
void export_csv(const SweepResult& result, const std::filesystem::path& path);

struct CsvRow {
    double sir_db = 0.0;
    double erasure_rate = 0.0;
    double erasure_ci_lo = 0.0;
    double erasure_ci_hi = 0.0;
    double error_rate = 0.0;
    double error_ci_lo = 0.0;
    double error_ci_hi = 0.0;
    double false_accept_rate = 0.0;
    std::size_t trials = 0;
};

/// Throws Errc::ConfigError on a malformed file.
std::vector<CsvRow> parse_csv(const std::string& text);

/// Six significant digits, as written to CSV.
std::string format_number(double v);

} // namespace sts
