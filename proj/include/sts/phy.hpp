#pragma once

// OFDM tone-grid physical layer: modulation of codewords onto an S x N grid,
// multi-user superposition, per-tone Rayleigh/AWGN channel with N_r receive
// antennas, energy combining, threshold detection, and the closed-form
// false-alarm and erasure probabilities of the energy detector.

#include "sts/codec.hpp"
#include "sts/detection.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sts {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

/// S subcarriers x N OFDM symbols of complex amplitudes, stored column by column.
class ToneGrid {
public:
    ToneGrid() = default;
    ToneGrid(std::size_t subcarriers, std::size_t symbols)
        : subcarriers_(subcarriers), symbols_(symbols), cells_(subcarriers * symbols)
    {
    }

    std::size_t subcarriers() const noexcept { return subcarriers_; }
    std::size_t symbols() const noexcept { return symbols_; }

    cplx& at(std::size_t subcarrier, std::size_t symbol) { return cells_[symbol * subcarriers_ + subcarrier]; }
    cplx at(std::size_t subcarrier, std::size_t symbol) const { return cells_[symbol * subcarriers_ + subcarrier]; }

    std::span<const cplx> column(std::size_t symbol) const
    {
        return {cells_.data() + symbol * subcarriers_, subcarriers_};
    }
    std::span<cplx> column(std::size_t symbol) { return {cells_.data() + symbol * subcarriers_, subcarriers_}; }

    std::span<const cplx> cells() const noexcept { return cells_; }
    std::span<cplx> cells() noexcept { return cells_; }

    /// Number of nonzero cells in one OFDM symbol.
    std::size_t occupied(std::size_t symbol) const;

private:
    std::size_t subcarriers_ = 0;
    std::size_t symbols_ = 0;
    std::vector<cplx> cells_;
};

enum class Fading { Rayleigh, AwgnOnly };

struct ChannelConfig {
    std::size_t n_rx = 1;
    /// Transmit power of each tone is split evenly over n_tx antennas.
    std::size_t n_tx = 1;
    double noise_var = 1.0;
    Fading fading = Fading::Rayleigh;
    /// AR(1) coefficient of a transmitter's fade from one OFDM symbol to the
    /// next; 0 gives independent fades per tone.
    double fade_correlation = 0.0;

    void validate() const;
};

/// One S x N grid per receive antenna.
struct ReceivedGrid {
    std::vector<ToneGrid> antennas;
};

/// Combined per-cell energy z.
class EnergyGrid {
public:
    EnergyGrid() = default;
    EnergyGrid(std::size_t subcarriers, std::size_t symbols)
        : subcarriers_(subcarriers), symbols_(symbols), cells_(subcarriers * symbols, 0.0)
    {
    }

    std::size_t subcarriers() const noexcept { return subcarriers_; }
    std::size_t symbols() const noexcept { return symbols_; }
    double& at(std::size_t subcarrier, std::size_t symbol) { return cells_[symbol * subcarriers_ + subcarrier]; }
    double at(std::size_t subcarrier, std::size_t symbol) const { return cells_[symbol * subcarriers_ + subcarrier]; }
    std::span<const double> cells() const noexcept { return cells_; }
    std::span<double> cells() noexcept { return cells_; }

private:
    std::size_t subcarriers_ = 0;
    std::size_t symbols_ = 0;
    std::vector<double> cells_;
};

/// Amplitude sqrt(power) at (c[n], n). Throws Errc::IndexOutOfGrid if c[n] >= S.
ToneGrid modulate(std::span<const FieldElement> c, std::size_t subcarriers, double power);
ToneGrid modulate(const StsCodeword& c, std::size_t subcarriers, double power);

/// Element-wise sum. Requires at least one grid, all of the same shape.
ToneGrid superpose(std::span<const ToneGrid> grids);

/// Fade every occupied cell independently, then add noise to every cell.
ReceivedGrid apply_channel(const ToneGrid& grid, const ChannelConfig& cfg, Rng& rng);

/// Each transmitter gets its own fades; faded signals sum per cell before a
/// single noise realization is added.
ReceivedGrid apply_channel(std::span<const ToneGrid> transmitters, const ChannelConfig& cfg, Rng& rng);

EnergyGrid combine_energy(const ReceivedGrid& recv);

DetectionGrid detect(const EnergyGrid& z, double threshold);

/// Erlang(n_rx, scale) survival function at x.
double erlang_survival(double x, double scale, std::size_t n_rx);
/// Erlang(n_rx, scale) CDF at x, accurate in the lower tail.
double erlang_cdf(double x, double scale, std::size_t n_rx);

/// P(z >= x) on an empty cell.
double p_false_alarm(double x, double sigma2, std::size_t n_rx);

/// P(z < x) on a cell carrying n_user co-located tones of power p_total each.
double p_erasure(double x, double sigma2, double p_total, std::size_t n_rx, std::size_t n_user = 1);

/// Threshold x with p_false_alarm(x) == target_far, by bisection.
double threshold_for_far(double target_far, double sigma2, std::size_t n_rx);

/// Peak-to-average power ratio in dB of each column's inverse DFT, maximized
/// over columns that carry energy. Throws Errc::EmptyGrid if none do.
double papr_db(const ToneGrid& grid);

/// Per-tone receive power for a given SIR: the whole time-domain sample energy
/// lands on one of S subcarriers, so p = SIR * S * sigma2.
double tone_power_for_sir(double sir_db, std::size_t subcarriers, double sigma2) noexcept;

/// Draw from CN(0, variance).
cplx complex_gaussian(Rng& rng, double variance);

} // namespace sts
