#include "sts/phy.hpp"

#include "sts/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sts {

std::size_t ToneGrid::occupied(std::size_t symbol) const
{
    const auto col = column(symbol);
    return static_cast<std::size_t>(std::count_if(col.begin(), col.end(), [](cplx a) { return a != cplx{}; }));
}

void ChannelConfig::validate() const
{
    if (n_rx < 1)
        throw Error(Errc::InvalidParameters, "n_rx must be >= 1");
    if (n_tx < 1)
        throw Error(Errc::InvalidParameters, "n_tx must be >= 1");
    if (!(noise_var > 0.0))
        throw Error(Errc::InvalidParameters, "noise_var must be > 0");
    if (!(fade_correlation >= 0.0 && fade_correlation < 1.0))
        throw Error(Errc::InvalidParameters, "fade_correlation must lie in [0, 1)");
}

ToneGrid modulate(std::span<const FieldElement> c, std::size_t subcarriers, double power)
{
    if (!(power > 0.0))
        throw Error(Errc::InvalidParameters, "tone power must be > 0");
    ToneGrid grid(subcarriers, c.size());
    const double amplitude = std::sqrt(power);
    for (std::size_t n = 0; n < c.size(); ++n) {
        const auto idx = c[n].value();
        if (idx >= subcarriers)
            throw Error(Errc::IndexOutOfGrid, "tone index " + std::to_string(idx) + " >= S=" +
                                                  std::to_string(subcarriers));
        grid.at(idx, n) = amplitude;
    }
    return grid;
}

ToneGrid modulate(const StsCodeword& c, std::size_t subcarriers, double power)
{
    return modulate(std::span<const FieldElement>(c.symbols), subcarriers, power);
}

ToneGrid superpose(std::span<const ToneGrid> grids)
{
    if (grids.empty())
        throw Error(Errc::DimensionMismatch, "superpose needs at least one grid");
    ToneGrid sum(grids.front().subcarriers(), grids.front().symbols());
    for (const auto& g : grids) {
        if (g.subcarriers() != sum.subcarriers() || g.symbols() != sum.symbols())
            throw Error(Errc::DimensionMismatch, "grids differ in shape");
        auto out = sum.cells();
        auto in = g.cells();
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += in[i];
    }
    return sum;
}

cplx complex_gaussian(Rng& rng, double variance)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

ReceivedGrid apply_channel(const ToneGrid& grid, const ChannelConfig& cfg, Rng& rng)
{
    return apply_channel(std::span<const ToneGrid>(&grid, 1), cfg, rng);
}

ReceivedGrid apply_channel(std::span<const ToneGrid> transmitters, const ChannelConfig& cfg, Rng& rng)
{
    cfg.validate();
    if (transmitters.empty())
        throw Error(Errc::DimensionMismatch, "no transmitters");
    const auto S = transmitters.front().subcarriers();
    const auto N = transmitters.front().symbols();
    for (const auto& g : transmitters)
        if (g.subcarriers() != S || g.symbols() != N)
            throw Error(Errc::DimensionMismatch, "transmitter grids differ in shape");

    ReceivedGrid recv;
    recv.antennas.assign(cfg.n_rx, ToneGrid(S, N));

    std::normal_distribution<double> unit(0.0, 1.0);
    const double half = std::sqrt(0.5);
    auto cn01 = [&] {
        const double re = unit(rng);
        const double im = unit(rng);
        return cplx{re * half, im * half};
    };

    const double rho = cfg.fade_correlation;
    const double innovation = std::sqrt(1.0 - rho * rho);
    const double per_tx = 1.0 / std::sqrt(static_cast<double>(cfg.n_tx));

    // fades[i * n_tx + j]: gain from transmit antenna j to receive antenna i
    std::vector<cplx> fades(cfg.n_rx * cfg.n_tx);
    for (const auto& g : transmitters) {
        bool have_state = false;
        for (std::size_t n = 0; n < N; ++n) {
            bool first_in_column = true;
            for (std::size_t s = 0; s < S; ++s) {
                const cplx a = g.at(s, n);
                if (a == cplx{})
                    continue;
                if (cfg.fading == Fading::AwgnOnly) {
                    for (auto& ant : recv.antennas)
                        ant.at(s, n) += a;
                    continue;
                }
                // The transmitter's primary tone in this symbol follows the
                // AR(1) fade process; any further tones fade independently.
                const bool correlated = first_in_column && have_state && rho > 0.0;
                for (auto& h : fades)
                    h = correlated ? rho * h + innovation * cn01() : cn01();
                if (first_in_column)
                    have_state = true;
                first_in_column = false;
                for (std::size_t i = 0; i < cfg.n_rx; ++i) {
                    cplx y{};
                    for (std::size_t j = 0; j < cfg.n_tx; ++j)
                        y += fades[i * cfg.n_tx + j];
                    recv.antennas[i].at(s, n) += y * a * per_tx;
                }
            }
        }
    }

    const double sigma = std::sqrt(cfg.noise_var);
    for (auto& ant : recv.antennas)
        for (auto& y : ant.cells())
            y += sigma * cn01();
    return recv;
}

EnergyGrid combine_energy(const ReceivedGrid& recv)
{
    if (recv.antennas.empty())
        return {};
    const auto& first = recv.antennas.front();
    EnergyGrid z(first.subcarriers(), first.symbols());
    auto out = z.cells();
    for (const auto& ant : recv.antennas) {
        if (ant.subcarriers() != first.subcarriers() || ant.symbols() != first.symbols())
            throw Error(Errc::DimensionMismatch, "antenna grids differ in shape");
        auto in = ant.cells();
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += std::norm(in[i]);
    }
    return z;
}

DetectionGrid detect(const EnergyGrid& z, double threshold)
{
    if (threshold < 0.0)
        throw Error(Errc::InvalidParameters, "threshold must be >= 0");
    DetectionGrid out;
    out.subcarriers = z.subcarriers();
    out.symbols.resize(z.symbols());
    for (std::size_t n = 0; n < z.symbols(); ++n)
        for (std::size_t s = 0; s < z.subcarriers(); ++s)
            if (z.at(s, n) >= threshold)
                out.symbols[n].push_back(static_cast<std::uint32_t>(s));
    return out;
}

double erlang_survival(double x, double scale, std::size_t n_rx)
{
    if (x <= 0.0)
        return 1.0;
    const double lambda = x / scale;
    double term = std::exp(-lambda);
    double sum = term;
    for (std::size_t k = 1; k < n_rx; ++k) {
        term *= lambda / static_cast<double>(k);
        sum += term;
    }
    return std::min(sum, 1.0);
}

double erlang_cdf(double x, double scale, std::size_t n_rx)
{
    if (x <= 0.0)
        return 0.0;
    const double lambda = x / scale;
    if (lambda >= static_cast<double>(n_rx))
        return 1.0 - erlang_survival(x, scale, n_rx);
    // lower tail: e^-lambda * sum_{k >= n} lambda^k / k!
    const auto n = static_cast<double>(n_rx);
    double term = std::exp(-lambda + n * std::log(lambda) - std::lgamma(n + 1.0));
    double sum = 0.0;
    for (std::size_t k = n_rx; k < n_rx + 10000; ++k) {
        sum += term;
        term *= lambda / static_cast<double>(k + 1);
        if (term < sum * 1e-17)
            break;
    }
    return std::min(sum, 1.0);
}

double p_false_alarm(double x, double sigma2, std::size_t n_rx)
{
    if (!(sigma2 > 0.0) || n_rx < 1)
        throw Error(Errc::InvalidParameters, "need sigma2 > 0 and n_rx >= 1");
    return erlang_survival(x, sigma2, n_rx);
}

double p_erasure(double x, double sigma2, double p_total, std::size_t n_rx, std::size_t n_user)
{
    if (!(sigma2 > 0.0) || n_rx < 1 || n_user < 1 || p_total < 0.0)
        throw Error(Errc::InvalidParameters, "need sigma2 > 0, p_total >= 0, n_rx >= 1, n_user >= 1");
    return erlang_cdf(x, sigma2 + static_cast<double>(n_user) * p_total, n_rx);
}

double threshold_for_far(double target_far, double sigma2, std::size_t n_rx)
{
    if (!(target_far > 0.0 && target_far < 1.0))
        throw Error(Errc::InvalidParameters, "target false-alarm rate must lie in (0, 1)");
    if (!(sigma2 > 0.0) || n_rx < 1)
        throw Error(Errc::InvalidParameters, "need sigma2 > 0 and n_rx >= 1");
    double lo = 0.0;
    double hi = sigma2;
    while (p_false_alarm(hi, sigma2, n_rx) > target_far)
        hi *= 2.0;
    for (int iter = 0; iter < 2000 && hi - lo > 0.0; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (p_false_alarm(mid, sigma2, n_rx) > target_far)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double papr_db(const ToneGrid& grid)
{
    const auto S = grid.subcarriers();
    std::vector<cplx> twiddle(S);
    for (std::size_t r = 0; r < S; ++r)
        twiddle[r] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(S));

    bool any = false;
    double worst = 0.0;
    std::vector<cplx> samples(S);
    for (std::size_t n = 0; n < grid.symbols(); ++n) {
        const auto col = grid.column(n);
        if (std::all_of(col.begin(), col.end(), [](cplx a) { return a == cplx{}; }))
            continue;
        std::fill(samples.begin(), samples.end(), cplx{});
        for (std::size_t s = 0; s < S; ++s) {
            if (col[s] == cplx{})
                continue;
            for (std::size_t m = 0; m < S; ++m)
                samples[m] += col[s] * twiddle[(s * m) % S];
        }
        double peak = 0.0;
        double total = 0.0;
        for (auto x : samples) {
            const double e = std::norm(x);
            peak = std::max(peak, e);
            total += e;
        }
        const double ratio = 10.0 * std::log10(peak / (total / static_cast<double>(S)));
        worst = any ? std::max(worst, ratio) : ratio;
        any = true;
    }
    if (!any)
        throw Error(Errc::EmptyGrid, "grid carries no energy");
    return worst;
}

double tone_power_for_sir(double sir_db, std::size_t subcarriers, double sigma2) noexcept
{
    return std::pow(10.0, sir_db / 10.0) * static_cast<double>(subcarriers) * sigma2;
}

} // namespace sts
