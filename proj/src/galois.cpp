#include "sts/galois.hpp"

#include "sts/error.hpp"

#include <string>
#include <vector>

namespace sts {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::NonPrimeModulus: return "NonPrimeModulus";
    case Errc::ZeroInverse: return "ZeroInverse";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::ValueOutOfRange: return "ValueOutOfRange";
    case Errc::MessageOutOfRange: return "MessageOutOfRange";
    case Errc::BlockLengthIncompatible: return "BlockLengthIncompatible";
    case Errc::InvalidParameters: return "InvalidParameters";
    case Errc::CandidateSpaceTooLarge: return "CandidateSpaceTooLarge";
    case Errc::IndexOutOfGrid: return "IndexOutOfGrid";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::FieldOverflow: return "FieldOverflow";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

namespace detail {

std::uint32_t pow_mod(std::uint32_t base, std::uint64_t exponent, std::uint32_t p) noexcept
{
    std::uint32_t result = 1 % p;
    base %= p;
    while (exponent > 0) {
        if (exponent & 1u)
            result = mul_mod(result, base, p);
        base = mul_mod(base, base, p);
        exponent >>= 1;
    }
    return result;
}

} // namespace detail

namespace {

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> factors;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            factors.push_back(q);
            while (n % q == 0)
                n /= q;
        }
    }
    if (n > 1)
        factors.push_back(n);
    return factors;
}

std::uint32_t smallest_primitive_root(std::uint32_t p)
{
    if (p == 2)
        return 1;
    const auto factors = distinct_prime_factors(p - 1);
    for (std::uint32_t g = 2; g < p; ++g) {
        bool generator = true;
        for (auto q : factors) {
            if (detail::pow_mod(g, (p - 1) / q, p) == 1) {
                generator = false;
                break;
            }
        }
        if (generator)
            return g;
    }
    // unreachable for prime p
    throw Error(Errc::NonPrimeModulus, "no primitive root for " + std::to_string(p));
}

void require_same_field(FieldElement a, FieldElement b)
{
    if (a.modulus() != b.modulus())
        throw Error(Errc::FieldMismatch, "operands from GF(" + std::to_string(a.modulus()) +
                                             ") and GF(" + std::to_string(b.modulus()) + ")");
}

} // namespace

bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    for (std::uint64_t q = 3; q * q <= n; q += 2)
        if (n % q == 0)
            return false;
    return true;
}

Field::Field(std::uint32_t p) : p_(p), alpha_(0)
{
    if (p < 2)
        throw Error(Errc::InvalidParameters, "field order must be >= 2, got " + std::to_string(p));
    if (!is_prime(p))
        throw Error(Errc::NonPrimeModulus, std::to_string(p) + " is not prime");
    alpha_ = smallest_primitive_root(p);
}

FieldElement Field::element(std::uint64_t value) const
{
    if (value >= p_)
        throw Error(Errc::ValueOutOfRange,
                    std::to_string(value) + " outside GF(" + std::to_string(p_) + ")");
    return FieldElement(static_cast<std::uint32_t>(value), p_);
}

FieldElement Field::reduce(std::int64_t value) const noexcept
{
    auto r = value % static_cast<std::int64_t>(p_);
    if (r < 0)
        r += p_;
    return FieldElement(static_cast<std::uint32_t>(r), p_);
}

FieldElement Field::pow(FieldElement base, std::uint64_t exponent) const
{
    require_same_field(base, zero());
    return FieldElement(detail::pow_mod(base.value(), exponent, p_), p_);
}

std::uint64_t Field::multiplicative_order(FieldElement a) const
{
    require_same_field(a, zero());
    if (a.is_zero())
        throw Error(Errc::ZeroInverse, "zero has no multiplicative order");
    std::uint64_t order = 1;
    std::uint32_t x = a.value();
    while (x != 1) {
        x = detail::mul_mod(x, a.value(), p_);
        ++order;
    }
    return order;
}

FieldElement primitive_element(const Field& field) { return field.alpha(); }

FieldElement add(FieldElement a, FieldElement b)
{
    require_same_field(a, b);
    const auto p = a.modulus();
    auto v = a.value() + b.value();
    return FieldElement(v >= p ? v - p : v, p);
}

FieldElement sub(FieldElement a, FieldElement b)
{
    require_same_field(a, b);
    const auto p = a.modulus();
    return FieldElement(a.value() >= b.value() ? a.value() - b.value() : a.value() + p - b.value(), p);
}

FieldElement mul(FieldElement a, FieldElement b)
{
    require_same_field(a, b);
    return FieldElement(detail::mul_mod(a.value(), b.value(), a.modulus()), a.modulus());
}

FieldElement neg(FieldElement a) noexcept
{
    return FieldElement(a.value() == 0 ? 0 : a.modulus() - a.value(), a.modulus());
}

FieldElement inv(FieldElement a)
{
    if (a.is_zero())
        throw Error(Errc::ZeroInverse, "inverse of zero in GF(" + std::to_string(a.modulus()) + ")");
    // Fermat: a^(p-2)
    return FieldElement(detail::pow_mod(a.value(), a.modulus() - 2, a.modulus()), a.modulus());
}

std::ostream& operator<<(std::ostream& os, FieldElement e) { return os << e.value(); }

} // namespace sts
