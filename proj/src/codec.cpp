#include "sts/codec.hpp"

#include "sts/error.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sts {

namespace {

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exponent) noexcept
{
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exponent; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        result *= base;
    }
    return result;
}

void require_length(std::span<const FieldElement> c, const CodeParams& params)
{
    if (c.size() != params.n())
        throw Error(Errc::DimensionMismatch, "expected " + std::to_string(params.n()) +
                                                 " symbols, got " + std::to_string(c.size()));
}

} // namespace

CodeParams::CodeParams(Field field, std::size_t n, std::size_t k) : field_(field), n_(n), k_(k)
{
    if (k < 1 || k > n)
        throw Error(Errc::InvalidParameters,
                    "need 1 <= K <= N, got N=" + std::to_string(n) + " K=" + std::to_string(k));
    if ((field.order() - 1) % n != 0)
        throw Error(Errc::BlockLengthIncompatible,
                    "N=" + std::to_string(n) + " does not divide D-1=" + std::to_string(field.order() - 1));
}

std::uint64_t CodeParams::message_space() const noexcept { return saturating_pow(order(), k_); }

std::vector<std::uint32_t> StsCodeword::indices() const
{
    std::vector<std::uint32_t> out;
    out.reserve(symbols.size());
    for (auto s : symbols)
        out.push_back(s.value());
    return out;
}

GftContext::GftContext(const CodeParams& params) : params_(params)
{
    const auto p = params.order();
    const auto n = params.n();
    const std::uint64_t step = (p - 1) / n;
    const std::uint32_t beta = detail::pow_mod(params.field().alpha().value(), step, p);
    const std::uint32_t beta_inv = detail::pow_mod(beta, p - 2, p);
    const std::uint32_t n_inv = detail::pow_mod(static_cast<std::uint32_t>(n % p), p - 2, p);

    z_.resize(n * n);
    zinv_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint64_t e = (i * j) % n;
            z_[i * n + j] = detail::pow_mod(beta, e, p);
            zinv_[i * n + j] = detail::mul_mod(n_inv, detail::pow_mod(beta_inv, e, p), p);
        }
    }

    // Z * Zinv must be the identity.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::uint64_t acc = 0;
            for (std::size_t l = 0; l < n; ++l)
                acc = (acc + static_cast<std::uint64_t>(z_[i * n + l]) * zinv_[l * n + j]) % p;
            if (acc != (i == j ? 1u : 0u))
                throw Error(Errc::InvalidParameters, "transform matrix is not invertible");
        }
    }
}

FieldElement GftContext::forward(std::size_t i, std::size_t j) const
{
    return params_.field().element(z_.at(i * params_.n() + j));
}

FieldElement GftContext::inverse(std::size_t i, std::size_t j) const
{
    return params_.field().element(zinv_.at(i * params_.n() + j));
}

static std::vector<FieldElement> matvec(const std::vector<std::uint32_t>& m, std::span<const FieldElement> v,
                                        const CodeParams& params)
{
    require_length(v, params);
    const auto p = params.order();
    const auto n = params.n();
    std::vector<FieldElement> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (v[j].modulus() != p)
                throw Error(Errc::FieldMismatch, "vector element from GF(" + std::to_string(v[j].modulus()) + ")");
            acc = (acc + static_cast<std::uint64_t>(m[i * n + j]) * v[j].value()) % p;
        }
        out.push_back(params.field().element(acc));
    }
    return out;
}

std::vector<FieldElement> GftContext::apply(std::span<const FieldElement> v) const
{
    return matvec(z_, v, params_);
}

std::vector<FieldElement> GftContext::apply_inverse(std::span<const FieldElement> c) const
{
    return matvec(zinv_, c, params_);
}

std::size_t default_tau(const CodeParams& params) noexcept
{
    return (params.n() + params.k()) / 2;
}

std::vector<std::uint64_t> to_digits(std::uint64_t m, std::uint64_t base, std::size_t k)
{
    if (base < 2)
        throw Error(Errc::InvalidParameters, "digit base must be >= 2");
    if (m >= saturating_pow(base, k))
        throw Error(Errc::MessageOutOfRange, std::to_string(m) + " >= " + std::to_string(base) + "^" +
                                                 std::to_string(k));
    std::vector<std::uint64_t> digits(k);
    for (auto& d : digits) {
        d = m % base;
        m /= base;
    }
    return digits;
}

std::uint64_t from_digits(std::span<const std::uint64_t> digits, std::uint64_t base)
{
    std::uint64_t m = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        m = m * base + *it;
    return m;
}

Message pack_message(std::uint64_t m, const CodeParams& params)
{
    Message msg;
    msg.digits.reserve(params.k());
    for (auto d : to_digits(m, params.order(), params.k()))
        msg.digits.push_back(params.field().element(d));
    return msg;
}

std::uint64_t unpack_message(const Message& msg)
{
    if (msg.digits.empty())
        return 0;
    std::vector<std::uint64_t> digits;
    for (auto d : msg.digits)
        digits.push_back(d.value());
    return from_digits(digits, msg.digits.front().modulus());
}

GftContext gft_context(const CodeParams& params) { return GftContext(params); }

StsCodeword encode(const Message& msg, const GftContext& ctx)
{
    const auto& params = ctx.params();
    if (msg.digits.size() != params.k())
        throw Error(Errc::DimensionMismatch, "message has " + std::to_string(msg.digits.size()) +
                                                 " digits, code expects " + std::to_string(params.k()));
    if (params.k() + 1 > params.n())
        throw Error(Errc::InvalidParameters, "K+1 must not exceed N for encoding");
    std::vector<FieldElement> v(params.n(), params.field().zero());
    std::copy(msg.digits.begin(), msg.digits.end(), v.begin() + 1);
    return StsCodeword{ctx.apply(v)};
}

StsCodeword encode(std::uint64_t m, const GftContext& ctx) { return encode(pack_message(m, ctx.params()), ctx); }

std::vector<FieldElement> inverse_gft(std::span<const FieldElement> c, const GftContext& ctx)
{
    return ctx.apply_inverse(c);
}

bool is_valid_codeword(std::span<const FieldElement> c, const GftContext& ctx)
{
    const auto& params = ctx.params();
    if (c.size() != params.n())
        return false;
    const auto v = ctx.apply_inverse(c);
    if (!v[0].is_zero())
        return false;
    for (std::size_t i = params.k() + 1; i < params.n(); ++i)
        if (!v[i].is_zero())
            return false;
    return true;
}

std::uint64_t codeword_message(std::span<const FieldElement> c, const GftContext& ctx)
{
    if (!is_valid_codeword(c, ctx))
        throw Error(Errc::InvalidParameters, "not a valid codeword");
    const auto v = ctx.apply_inverse(c);
    Message msg;
    msg.digits.assign(v.begin() + 1, v.begin() + 1 + static_cast<std::ptrdiff_t>(ctx.params().k()));
    return unpack_message(msg);
}

StsCodeword shift(std::span<const FieldElement> c, FieldElement delta)
{
    StsCodeword out;
    out.symbols.reserve(c.size());
    for (auto s : c)
        out.symbols.push_back(s + delta);
    return out;
}

FieldElement estimate_offset(std::span<const FieldElement> c_shifted, const GftContext& ctx)
{
    return ctx.apply_inverse(c_shifted)[0];
}

StsCodeword correct_offset(std::span<const FieldElement> c_shifted, FieldElement delta)
{
    return shift(c_shifted, neg(delta));
}

std::uint64_t separability_bound(std::uint64_t n, std::uint64_t k, std::uint64_t d_order)
{
    if (k < 1 || k > n)
        throw Error(Errc::InvalidParameters, "need 1 <= K <= N");
    const auto cap = saturating_pow(d_order, k);
    if (k == 1)
        return cap;
    // ceil(N/d) >= K  <=>  d < N/(K-1)
    const std::uint64_t bound = (n + (k - 1) - 1) / (k - 1) - 1;
    return std::min(bound, cap);
}

Codebook::Codebook(const GftContext& ctx, std::uint64_t cap) : params_(ctx.params()), size_(0)
{
    const auto space = params_.message_space();
    if (space > cap)
        throw Error(Errc::CandidateSpaceTooLarge,
                    "D^K = " + std::to_string(space) + " exceeds cap " + std::to_string(cap));
    size_ = space;
    const auto n = params_.n();
    tones_.resize(size_ * n);
    for (std::uint64_t m = 0; m < size_; ++m) {
        const auto c = encode(m, ctx);
        for (std::size_t i = 0; i < n; ++i)
            tones_[m * n + i] = c.symbols[i].value();
    }
}

std::vector<std::uint64_t> decode_multiuser(const DetectionGrid& detections, const Codebook& book,
                                            const DecoderConfig& cfg)
{
    const auto& params = book.params();
    const auto n = params.n();
    if (detections.symbols.size() != n)
        throw Error(Errc::DimensionMismatch, "detection grid has " + std::to_string(detections.symbols.size()) +
                                                 " symbols, code length is " + std::to_string(n));
    if (cfg.tau < 1 || cfg.tau > n)
        throw Error(Errc::InvalidParameters, "tau must lie in [1, N], got " + std::to_string(cfg.tau));
    if (book.size() > cfg.enumeration_cap)
        throw Error(Errc::CandidateSpaceTooLarge,
                    "D^K = " + std::to_string(book.size()) + " exceeds cap " + std::to_string(cfg.enumeration_cap));

    // one membership bitmap per symbol, indexed by field value
    const std::size_t width = params.order();
    std::vector<char> present(n * width, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (auto idx : detections.symbols[i])
            if (idx < width)
                present[i * width + idx] = 1;

    std::vector<std::uint64_t> decoded;
    for (std::uint64_t m = 0; m < book.size(); ++m) {
        std::size_t score = 0;
        for (std::size_t i = 0; i < n; ++i) {
            score += static_cast<std::size_t>(present[i * width + book.tone(m, i)]);
            if (score + (n - 1 - i) < cfg.tau)
                break;
        }
        if (score >= cfg.tau)
            decoded.push_back(m);
    }
    return decoded;
}

std::vector<std::uint64_t> decode_multiuser(const DetectionGrid& detections, const CodeParams& params,
                                            const DecoderConfig& cfg)
{
    if (params.message_space() > cfg.enumeration_cap)
        throw Error(Errc::CandidateSpaceTooLarge, "D^K = " + std::to_string(params.message_space()) +
                                                      " exceeds cap " + std::to_string(cfg.enumeration_cap));
    const GftContext ctx(params);
    const Codebook book(ctx, cfg.enumeration_cap);
    return decode_multiuser(detections, book, cfg);
}

DetectionGrid perfect_detection(std::span<const StsCodeword> codewords, std::size_t subcarriers)
{
    DetectionGrid grid;
    grid.subcarriers = subcarriers;
    if (codewords.empty())
        return grid;
    const auto n = codewords.front().size();
    grid.symbols.resize(n);
    for (const auto& c : codewords) {
        if (c.size() != n)
            throw Error(Errc::DimensionMismatch, "codewords of different lengths");
        for (std::size_t i = 0; i < n; ++i) {
            if (c.symbols[i].value() >= subcarriers)
                throw Error(Errc::IndexOutOfGrid, "tone index beyond subcarrier count");
            grid.symbols[i].push_back(c.symbols[i].value());
        }
    }
    for (auto& s : grid.symbols) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return grid;
}

} // namespace sts
