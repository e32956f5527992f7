#include "sts/simkit.hpp"

#include "sts/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace sts {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

const SimConfig& validated(const SimConfig& cfg)
{
    cfg.validate();
    return cfg;
}

// Runs body(i) for i in [0, count) on `workers` threads; the first exception wins.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body)
{
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        const auto n = std::min<std::size_t>(workers, count);
        for (std::size_t w = 0; w < n; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t i = next++; i < count; i = next++)
                        body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = count;
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace

// ---- SimConfig --------------------------------------------------------------

CodeParams SimConfig::code_params() const { return CodeParams(Field(field_order), n, k); }

ChannelConfig SimConfig::channel() const
{
    ChannelConfig ch;
    ch.n_rx = n_rx;
    ch.n_tx = n_tx;
    ch.noise_var = noise_var;
    ch.fading = fading;
    ch.fade_correlation = fade_correlation;
    return ch;
}

std::size_t SimConfig::resolved_tau() const { return tau == 0 ? default_tau(code_params()) : tau; }

void SimConfig::validate() const
{
    const auto params = code_params();
    channel().validate();
    if (trials < 1)
        throw Error(Errc::InvalidParameters, "trials must be >= 1");
    if (users < 1)
        throw Error(Errc::InvalidParameters, "users must be >= 1");
    if (subcarriers < field_order)
        throw Error(Errc::InvalidParameters, "subcarriers (" + std::to_string(subcarriers) +
                                                 ") must be >= field order (" + std::to_string(field_order) + ")");
    if (users > params.message_space())
        throw Error(Errc::InvalidParameters, "more users than distinct messages");
    if (!allow_over_bound && users > separability_bound(n, k, field_order))
        throw Error(Errc::InvalidParameters,
                    "users=" + std::to_string(users) + " exceeds separability bound " +
                        std::to_string(separability_bound(n, k, field_order)) + " (set allow_over_bound)");
    if (!(target_far > 0.0 && target_far < 1.0))
        throw Error(Errc::InvalidParameters, "target_far must lie in (0, 1)");
    if (tau > n)
        throw Error(Errc::InvalidParameters, "tau must not exceed N");
    if (workers < 1)
        throw Error(Errc::InvalidParameters, "workers must be >= 1");
}

// ---- outcomes ---------------------------------------------------------------

std::size_t TrialOutcome::count(UserStatus s) const noexcept
{
    return static_cast<std::size_t>(std::count(status.begin(), status.end(), s));
}

TrialOutcome classify(std::span<const std::uint64_t> sent, std::vector<std::uint64_t> decoded)
{
    std::sort(decoded.begin(), decoded.end());
    decoded.erase(std::unique(decoded.begin(), decoded.end()), decoded.end());

    TrialOutcome out;
    out.sent.assign(sent.begin(), sent.end());
    out.decoded = std::move(decoded);

    std::vector<std::uint64_t> sent_sorted(sent.begin(), sent.end());
    std::sort(sent_sorted.begin(), sent_sorted.end());
    std::set_difference(out.decoded.begin(), out.decoded.end(), sent_sorted.begin(), sent_sorted.end(),
                        std::back_inserter(out.spurious));

    // A missing user counts as an error only when the decoder returned as many
    // messages as were sent, so some message nobody sent took its place.
    const bool substituted = out.decoded.size() == sent_sorted.size() && !out.spurious.empty();
    out.status.reserve(sent.size());
    for (auto m : sent) {
        if (std::binary_search(out.decoded.begin(), out.decoded.end(), m))
            out.status.push_back(UserStatus::Decoded);
        else
            out.status.push_back(substituted ? UserStatus::Error : UserStatus::Erasure);
    }
    return out;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z)
{
    if (n == 0)
        return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    ci.lo = std::min(ci.lo, p);
    ci.hi = std::max(ci.hi, p);
    return ci;
}

Rng stream_rng(std::uint64_t master_seed, std::uint64_t stream)
{
    return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(stream + 0x632be59bd9b4e019ull)));
}

// ---- Experiment ---------------------------------------------------------------

Experiment::Experiment(SimConfig cfg)
    : cfg_(validated(cfg)),
      params_(cfg_.code_params()),
      ctx_(params_),
      book_(ctx_),
      threshold_(threshold_for_far(cfg_.target_far, cfg_.noise_var, cfg_.n_rx)),
      tau_(cfg_.resolved_tau())
{
}

std::vector<std::uint64_t> Experiment::draw_messages(Rng& rng) const
{
    std::uniform_int_distribution<std::uint64_t> pick(0, params_.message_space() - 1);
    std::vector<std::uint64_t> msgs;
    msgs.reserve(cfg_.users);
    while (msgs.size() < cfg_.users) {
        const auto m = pick(rng);
        if (std::find(msgs.begin(), msgs.end(), m) == msgs.end())
            msgs.push_back(m);
    }
    return msgs;
}

TrialOutcome Experiment::run_trial(double sir_db, std::uint64_t trial_index) const
{
    auto rng = stream_rng(cfg_.master_seed, trial_index);
    const auto msgs = draw_messages(rng);
    return run_trial(sir_db, msgs, rng);
}

TrialOutcome Experiment::run_trial(double sir_db, std::span<const std::uint64_t> messages, Rng& rng) const
{
    const double power = tone_power_for_sir(sir_db, cfg_.subcarriers, cfg_.noise_var);
    std::vector<ToneGrid> grids;
    grids.reserve(messages.size());
    for (auto m : messages)
        grids.push_back(modulate(encode(m, ctx_), cfg_.subcarriers, power));

    const auto recv = apply_channel(grids, cfg_.channel(), rng);
    const auto detections = detect(combine_energy(recv), threshold_);
    DecoderConfig dec;
    dec.tau = tau_;
    return classify(messages, decode_multiuser(detections, book_, dec));
}

ToneGrid Experiment::transmit_grid(std::span<const std::uint64_t> messages) const
{
    std::vector<ToneGrid> grids;
    for (auto m : messages)
        grids.push_back(modulate(encode(m, ctx_), cfg_.subcarriers, 1.0));
    return superpose(grids);
}

SweepResult Experiment::run_sweep() const
{
    struct Tally {
        std::uint32_t erasures = 0;
        std::uint32_t errors = 0;
        bool false_accept = false;
    };

    SweepResult result;
    result.config = cfg_;
    for (double sir : cfg_.sir_db) {
        std::vector<Tally> tallies(cfg_.trials);
        parallel_for(cfg_.trials, cfg_.workers, [&](std::size_t t) {
            const auto outcome = run_trial(sir, t);
            tallies[t] = Tally{static_cast<std::uint32_t>(outcome.count(UserStatus::Erasure)),
                               static_cast<std::uint32_t>(outcome.count(UserStatus::Error)),
                               !outcome.spurious.empty()};
        });

        SweepPoint pt;
        pt.sir_db = sir;
        pt.trials = cfg_.trials;
        pt.user_trials = static_cast<std::uint64_t>(cfg_.trials) * cfg_.users;
        for (const auto& t : tallies) {
            pt.erasures += t.erasures;
            pt.errors += t.errors;
            pt.false_accept_trials += t.false_accept ? 1 : 0;
        }
        pt.erasure_rate = static_cast<double>(pt.erasures) / static_cast<double>(pt.user_trials);
        pt.error_rate = static_cast<double>(pt.errors) / static_cast<double>(pt.user_trials);
        pt.false_accept_rate = static_cast<double>(pt.false_accept_trials) / static_cast<double>(pt.trials);
        pt.erasure_ci = wilson_interval(pt.erasures, pt.user_trials);
        pt.error_ci = wilson_interval(pt.errors, pt.user_trials);
        pt.false_accept_ci = wilson_interval(pt.false_accept_trials, pt.trials);
        result.points.push_back(pt);
    }
    return result;
}

TrialOutcome run_trial(const SimConfig& cfg, double sir_db, std::uint64_t trial_index)
{
    return Experiment(cfg).run_trial(sir_db, trial_index);
}

SweepResult run_sweep(const SimConfig& cfg) { return Experiment(cfg).run_sweep(); }

std::vector<RcrmUser> rcrm_scenario(std::size_t users, std::span<const std::uint32_t> base_stations,
                                    std::uint64_t timeslot, Rng& rng)
{
    if (base_stations.empty())
        throw Error(Errc::InvalidParameters, "need at least one base station");
    if (users > 4 * base_stations.size())
        throw Error(Errc::InvalidParameters, "at most 4 users per base station (2-bit resource id)");

    // per base station: a shuffled list of free resource ids
    std::vector<std::vector<std::uint32_t>> free_ids(base_stations.size(), {0, 1, 2, 3});
    for (auto& ids : free_ids)
        std::shuffle(ids.begin(), ids.end(), rng);
    std::uniform_int_distribution<std::uint32_t> prio(0, 7);
    std::uniform_int_distribution<std::uint32_t> sinr(0, 3);

    std::vector<RcrmUser> out;
    out.reserve(users);
    for (std::size_t u = 0; u < users; ++u) {
        const auto b = u % base_stations.size();
        RcrmUser user;
        user.bsid = base_stations[b];
        user.request.resource_id = free_ids[b].back();
        free_ids[b].pop_back();
        user.request.priority = prio(rng);
        user.request.target_sinr = sinr(rng);
        user.request.bs_hash = hash_bsid(user.bsid, timeslot);
        out.push_back(user);
    }
    return out;
}

// ---- validation ---------------------------------------------------------------

void ValidationConfig::validate() const
{
    if (samples < 1)
        throw Error(Errc::InvalidParameters, "samples must be >= 1");
    if (!(noise_var > 0.0))
        throw Error(Errc::InvalidParameters, "noise_var must be > 0");
    if (n_rx.empty())
        throw Error(Errc::InvalidParameters, "need at least one antenna count");
    for (auto a : n_rx)
        if (a < 1)
            throw Error(Errc::InvalidParameters, "antenna counts must be >= 1");
    for (auto u : n_user)
        if (u < 1)
            throw Error(Errc::InvalidParameters, "user counts must be >= 1");
    for (auto f : far)
        if (!(f > 0.0 && f < 1.0))
            throw Error(Errc::InvalidParameters, "false-alarm targets must lie in (0, 1)");
    for (auto x : thresholds)
        if (x < 0.0)
            throw Error(Errc::InvalidParameters, "thresholds must be >= 0");
}

bool ValidationCell::passed(double limit) const noexcept { return std::abs(z) <= limit; }

bool ValidationReport::passed(double limit) const noexcept
{
    return std::all_of(cells.begin(), cells.end(), [&](const ValidationCell& c) { return c.passed(limit); });
}

double binomial_z(std::uint64_t events, std::uint64_t samples, double analytic) noexcept
{
    const double n = static_cast<double>(samples);
    const double empirical = static_cast<double>(events) / n;
    const double sd = std::sqrt(analytic * (1.0 - analytic) / n);
    if (sd == 0.0)
        return empirical == analytic ? 0.0 : std::numeric_limits<double>::infinity();
    return (empirical - analytic) / sd;
}

namespace {

// Combined energy of `samples` independent cells, each carrying `users`
// co-located tones of the given power (none when users == 0).
std::vector<double> sample_energies(std::size_t users, double power, const ChannelConfig& ch,
                                    std::uint64_t samples, Rng& rng)
{
    constexpr std::size_t kChunk = 4096;
    std::vector<double> energies;
    energies.reserve(samples);
    while (energies.size() < samples) {
        const auto cols = std::min<std::size_t>(kChunk, samples - energies.size());
        std::vector<ToneGrid> tx;
        if (users == 0) {
            tx.emplace_back(1, cols);
        } else {
            for (std::size_t u = 0; u < users; ++u) {
                ToneGrid g(1, cols);
                for (auto& a : g.cells())
                    a = std::sqrt(power);
                tx.push_back(std::move(g));
            }
        }
        const auto z = combine_energy(apply_channel(tx, ch, rng));
        energies.insert(energies.end(), z.cells().begin(), z.cells().end());
    }
    return energies;
}

} // namespace

ValidationReport validate_detection(const ValidationConfig& cfg)
{
    cfg.validate();
    ValidationReport report;
    report.tone_power = tone_power_for_sir(cfg.sir_db, cfg.subcarriers, cfg.noise_var);

    auto scaled = [&](double p) { return std::clamp(p * cfg.analytic_scale, 0.0, 1.0); };

    for (auto n_rx : cfg.n_rx) {
        ChannelConfig ch;
        ch.n_rx = n_rx;
        ch.noise_var = cfg.noise_var;

        // (design FAR or 0, threshold)
        std::vector<std::pair<double, double>> points;
        for (auto f : cfg.far)
            points.emplace_back(f, threshold_for_far(f, cfg.noise_var, n_rx));
        for (auto x : cfg.thresholds)
            points.emplace_back(0.0, x);

        auto rng = stream_rng(cfg.seed, n_rx * 1000);
        const auto noise = sample_energies(0, 0.0, ch, cfg.samples, rng);
        for (auto [far, x] : points) {
            ValidationCell cell;
            cell.kind = ValidationCell::Kind::FalseAlarm;
            cell.n_rx = n_rx;
            cell.target_far = far;
            cell.threshold = x;
            cell.samples = cfg.samples;
            cell.events = static_cast<std::uint64_t>(
                std::count_if(noise.begin(), noise.end(), [x = x](double z) { return z >= x; }));
            cell.analytic = scaled(p_false_alarm(x, cfg.noise_var, n_rx));
            cell.empirical = static_cast<double>(cell.events) / static_cast<double>(cell.samples);
            cell.z = binomial_z(cell.events, cell.samples, cell.analytic);
            report.cells.push_back(cell);
        }

        for (auto users : cfg.n_user) {
            auto urng = stream_rng(cfg.seed, n_rx * 1000 + users);
            const auto occupied = sample_energies(users, report.tone_power, ch, cfg.samples, urng);
            for (auto [far, x] : points) {
                ValidationCell cell;
                cell.kind = ValidationCell::Kind::Erasure;
                cell.n_rx = n_rx;
                cell.n_user = users;
                cell.target_far = far;
                cell.threshold = x;
                cell.samples = cfg.samples;
                cell.events = static_cast<std::uint64_t>(
                    std::count_if(occupied.begin(), occupied.end(), [x = x](double z) { return z < x; }));
                cell.analytic = scaled(p_erasure(x, cfg.noise_var, report.tone_power, n_rx, users));
                cell.empirical = static_cast<double>(cell.events) / static_cast<double>(cell.samples);
                cell.z = binomial_z(cell.events, cell.samples, cell.analytic);
                report.cells.push_back(cell);
            }
        }
    }
    return report;
}

ValidationReport validate_detection(const SimConfig& cfg, double sir_db)
{
    ValidationConfig v;
    v.noise_var = cfg.noise_var;
    v.subcarriers = cfg.subcarriers;
    v.sir_db = sir_db;
    v.far = {cfg.target_far};
    v.seed = cfg.master_seed;
    return validate_detection(v);
}

std::string format_report(const ValidationReport& report)
{
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "tone_power=%.6g\n", report.tone_power);
    os << line;
    std::snprintf(line, sizeof line, "%-11s %4s %6s %9s %10s %12s %12s %8s %s\n", "kind", "n_rx", "n_user",
                  "far", "threshold", "analytic", "empirical", "z", "verdict");
    os << line;
    for (const auto& c : report.cells) {
        std::snprintf(line, sizeof line, "%-11s %4zu %6zu %9.3g %10.5f %12.6g %12.6g %8.3f %s\n",
                      c.kind == ValidationCell::Kind::FalseAlarm ? "false_alarm" : "erasure", c.n_rx, c.n_user,
                      c.target_far, c.threshold, c.analytic, c.empirical, c.z, c.passed() ? "PASS" : "FAIL");
        os << line;
    }
    os << (report.passed() ? "RESULT PASS" : "RESULT FAIL") << '\n';
    return os.str();
}

// ---- CSV ----------------------------------------------------------------------

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string format_csv(const SweepResult& result)
{
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& p : result.points) {
        const double fields[] = {p.sir_db,     p.erasure_rate, p.erasure_ci.lo, p.erasure_ci.hi,
                                 p.error_rate, p.error_ci.lo,  p.error_ci.hi,   p.false_accept_rate};
        for (double f : fields) {
            out += format_number(f);
            out += ',';
        }
        out += std::to_string(p.trials);
        out += '\n';
    }
    return out;
}

void export_csv(const SweepResult& result, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    os << format_csv(result);
    os.flush();
    if (!os)
        throw Error(Errc::IoFailure, "write to " + path.string() + " failed");
}

std::vector<CsvRow> parse_csv(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw Error(Errc::ConfigError, "missing or unexpected CSV header");
    std::vector<CsvRow> rows;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cols;
        std::string col;
        std::istringstream ls(line);
        while (std::getline(ls, col, ','))
            cols.push_back(col);
        if (cols.size() != 9)
            throw Error(Errc::ConfigError, "CSV row has " + std::to_string(cols.size()) + " columns");
        auto num = [&](std::size_t i) {
            char* end = nullptr;
            const double v = std::strtod(cols[i].c_str(), &end);
            if (end == cols[i].c_str() || *end != '\0')
                throw Error(Errc::ConfigError, "bad number '" + cols[i] + "'");
            return v;
        };
        CsvRow r;
        r.sir_db = num(0);
        r.erasure_rate = num(1);
        r.erasure_ci_lo = num(2);
        r.erasure_ci_hi = num(3);
        r.error_rate = num(4);
        r.error_ci_lo = num(5);
        r.error_ci_hi = num(6);
        r.false_accept_rate = num(7);
        r.trials = static_cast<std::size_t>(num(8));
        rows.push_back(r);
    }
    return rows;
}

} // namespace sts
