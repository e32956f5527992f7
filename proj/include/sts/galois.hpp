#pragma once

#include <cstdint>
#include <ostream>

namespace sts {

class Field;

/// An element of GF(p). Carries its modulus so that mixing elements of
/// different fields is caught at runtime.
class FieldElement {
public:
    std::uint32_t value() const noexcept { return value_; }
    std::uint32_t modulus() const noexcept { return modulus_; }
    bool is_zero() const noexcept { return value_ == 0; }

    friend bool operator==(FieldElement a, FieldElement b) noexcept
    {
        return a.value_ == b.value_ && a.modulus_ == b.modulus_;
    }

private:
    friend class Field;
    friend FieldElement add(FieldElement, FieldElement);
    friend FieldElement sub(FieldElement, FieldElement);
    friend FieldElement mul(FieldElement, FieldElement);
    friend FieldElement neg(FieldElement) noexcept;
    friend FieldElement inv(FieldElement);

    FieldElement(std::uint32_t value, std::uint32_t modulus) noexcept
        : value_(value), modulus_(modulus)
    {
    }

    std::uint32_t value_;
    std::uint32_t modulus_;
};

std::ostream& operator<<(std::ostream& os, FieldElement e);

/// Prime field GF(p) together with its smallest primitive root.
class Field {
public:
    /// Throws Errc::NonPrimeModulus for composite p and Errc::InvalidParameters for p < 2.
    explicit Field(std::uint32_t p);

    std::uint32_t order() const noexcept { return p_; }
    FieldElement alpha() const noexcept { return FieldElement(alpha_, p_); }
    FieldElement zero() const noexcept { return FieldElement(0, p_); }
    FieldElement one() const noexcept { return FieldElement(1 % p_, p_); }

    /// Element with the given value; throws Errc::ValueOutOfRange if value >= p.
    FieldElement element(std::uint64_t value) const;
    /// Element congruent to value (any integer, reduced mod p).
    FieldElement reduce(std::int64_t value) const noexcept;

    FieldElement pow(FieldElement base, std::uint64_t exponent) const;

    /// Multiplicative order of a nonzero element.
    std::uint64_t multiplicative_order(FieldElement a) const;

    friend bool operator==(const Field& a, const Field& b) noexcept { return a.p_ == b.p_; }

private:
    std::uint32_t p_;
    std::uint32_t alpha_;
};

bool is_prime(std::uint64_t n) noexcept;

/// Smallest g whose multiplicative order is p - 1.
FieldElement primitive_element(const Field& field);

FieldElement add(FieldElement a, FieldElement b);
FieldElement sub(FieldElement a, FieldElement b);
FieldElement mul(FieldElement a, FieldElement b);
FieldElement neg(FieldElement a) noexcept;
/// Throws Errc::ZeroInverse for a == 0.
FieldElement inv(FieldElement a);

inline FieldElement operator+(FieldElement a, FieldElement b) { return add(a, b); }
inline FieldElement operator-(FieldElement a, FieldElement b) { return sub(a, b); }
inline FieldElement operator*(FieldElement a, FieldElement b) { return mul(a, b); }
inline FieldElement operator-(FieldElement a) noexcept { return neg(a); }

namespace detail {

inline std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) noexcept
{
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

std::uint32_t pow_mod(std::uint32_t base, std::uint64_t exponent, std::uint32_t p) noexcept;

} // namespace detail

} // namespace sts
