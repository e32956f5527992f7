#pragma once

// Reed-Solomon coding of single-tone signals via the Galois Fourier
// transform, plus the multi-user list decoder and frequency-offset recovery.
//
// A codeword c has one entry per OFDM symbol; c[n] is the subcarrier index
// energized in symbol n. The transform input is v = [0, u_1..u_K, 0..0] and
// c = Z v, where Z[i][j] = beta^(i*j) and beta = alpha^((D-1)/N) is an N-th
// root of unity.

#include "sts/detection.hpp"
#include "sts/galois.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sts {

/// (N, K) code over GF(D). Requires 1 <= K <= N and N | D-1.
class CodeParams {
public:
    CodeParams(Field field, std::size_t n, std::size_t k);

    const Field& field() const noexcept { return field_; }
    std::uint32_t order() const noexcept { return field_.order(); }
    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    /// Error-correction capability floor((N-K)/2).
    std::size_t t() const noexcept { return (n_ - k_) / 2; }
    /// Erasure-correction capability N-K.
    std::size_t rho() const noexcept { return n_ - k_; }
    /// D^K, saturated at UINT64_MAX.
    std::uint64_t message_space() const noexcept;

private:
    Field field_;
    std::size_t n_;
    std::size_t k_;
};

/// Base-D digits of a message, least significant first.
struct Message {
    std::vector<FieldElement> digits;
};

struct StsCodeword {
    std::vector<FieldElement> symbols;

    std::size_t size() const noexcept { return symbols.size(); }
    /// Subcarrier indices as plain integers.
    std::vector<std::uint32_t> indices() const;
};

class GftContext {
public:
    explicit GftContext(const CodeParams& params);

    const CodeParams& params() const noexcept { return params_; }
    FieldElement forward(std::size_t i, std::size_t j) const;
    FieldElement inverse(std::size_t i, std::size_t j) const;

    /// Z v.
    std::vector<FieldElement> apply(std::span<const FieldElement> v) const;
    /// Z^-1 c.
    std::vector<FieldElement> apply_inverse(std::span<const FieldElement> c) const;

private:
    CodeParams params_;
    // row-major N x N, raw residues
    std::vector<std::uint32_t> z_;
    std::vector<std::uint32_t> zinv_;
};

struct DecoderConfig {
    /// Minimum number of symbols in which a candidate's tone must be detected.
    std::size_t tau = 1;
    /// Largest candidate space the exhaustive decoder will enumerate.
    std::uint64_t enumeration_cap = std::uint64_t{1} << 24;
};

/// ceil((N + K - 1) / 2); equals ceil(N/2) for K = 1.
std::size_t default_tau(const CodeParams& params) noexcept;

/// Base-`base` digits of m, least significant first. Throws
/// Errc::MessageOutOfRange if m >= base^k.
std::vector<std::uint64_t> to_digits(std::uint64_t m, std::uint64_t base, std::size_t k);
std::uint64_t from_digits(std::span<const std::uint64_t> digits, std::uint64_t base);

Message pack_message(std::uint64_t m, const CodeParams& params);
std::uint64_t unpack_message(const Message& msg);

GftContext gft_context(const CodeParams& params);

StsCodeword encode(const Message& msg, const GftContext& ctx);
/// Shorthand for encode(pack_message(m)).
StsCodeword encode(std::uint64_t m, const GftContext& ctx);

std::vector<FieldElement> inverse_gft(std::span<const FieldElement> c, const GftContext& ctx);

/// Inverse transform has a zero first element and zeros beyond position K.
bool is_valid_codeword(std::span<const FieldElement> c, const GftContext& ctx);

/// Message carried by a valid codeword (digits 1..K of its inverse transform).
/// Throws Errc::InvalidParameters if c is not a valid codeword.
std::uint64_t codeword_message(std::span<const FieldElement> c, const GftContext& ctx);

/// Element-wise addition of delta to every symbol (a tone-grid frequency offset).
StsCodeword shift(std::span<const FieldElement> c, FieldElement delta);

/// N^-1 * sum(c): the first inverse-transform element.
FieldElement estimate_offset(std::span<const FieldElement> c_shifted, const GftContext& ctx);

StsCodeword correct_offset(std::span<const FieldElement> c_shifted, FieldElement delta);

/// Largest number of simultaneous users d with K <= ceil(N/d), capped at D^K.
std::uint64_t separability_bound(std::uint64_t n, std::uint64_t k, std::uint64_t d_order);

/// All D^K codewords, precomputed once for repeated decoding.
class Codebook {
public:
    /// Throws Errc::CandidateSpaceTooLarge when D^K exceeds cap.
    explicit Codebook(const GftContext& ctx, std::uint64_t cap = std::uint64_t{1} << 24);

    const CodeParams& params() const noexcept { return params_; }
    std::uint64_t size() const noexcept { return size_; }
    /// Symbol n of the codeword for message m.
    std::uint32_t tone(std::uint64_t m, std::size_t n) const noexcept
    {
        return tones_[m * params_.n() + n];
    }

private:
    CodeParams params_;
    std::uint64_t size_;
    std::vector<std::uint32_t> tones_;
};

/// Every message whose tone appears in the detected set of at least tau symbols,
/// in ascending order.
std::vector<std::uint64_t> decode_multiuser(const DetectionGrid& detections, const Codebook& book,
                                            const DecoderConfig& cfg);
std::vector<std::uint64_t> decode_multiuser(const DetectionGrid& detections, const CodeParams& params,
                                            const DecoderConfig& cfg);

/// Detection grid with exactly the tones of the given codewords (no misses, no false alarms).
DetectionGrid perfect_detection(std::span<const StsCodeword> codewords, std::size_t subcarriers);

} // namespace sts
