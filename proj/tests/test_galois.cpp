#include "sts/error.hpp"
#include "sts/galois.hpp"

#include <doctest.h>

#include <random>

using namespace sts;

namespace {

// Brute-force multiplicative order, independent of Field's implementation.
std::uint32_t brute_order(std::uint32_t g, std::uint32_t p)
{
    std::uint32_t x = g % p;
    std::uint32_t k = 1;
    while (x != 1) {
        x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * g % p);
        ++k;
    }
    return k;
}

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

} // namespace

TEST_CASE("field construction picks the smallest primitive root")
{
    CHECK(Field(5).alpha().value() == 2);
    CHECK(Field(2).alpha().value() == 1);
    CHECK(Field(7).alpha().value() == 3);
    CHECK(Field(3).alpha().value() == 2);
    CHECK(primitive_element(Field(17)).value() == 3);
    CHECK(Field(631).alpha().value() == 3);
}

TEST_CASE("composite and degenerate moduli are rejected")
{
    CHECK(error_code([] { Field f(512); }) == Errc::NonPrimeModulus);
    CHECK(error_code([] { Field f(1); }) == Errc::InvalidParameters);
    CHECK(error_code([] { Field f(0); }) == Errc::InvalidParameters);
    CHECK(error_code([] { Field f(91); }) == Errc::NonPrimeModulus);
}

TEST_CASE("element arithmetic in GF(5)")
{
    const Field f(5);
    CHECK(inv(f.element(4)).value() == 4);
    CHECK(inv(f.element(1)).value() == 1);
    CHECK((f.element(3) + f.element(4)).value() == 2);
    CHECK((f.element(1) - f.element(3)).value() == 3);
    CHECK((-f.element(0)).value() == 0);
    CHECK((-f.element(2)).value() == 3);
    CHECK((f.element(3) * f.element(4)).value() == 2);
    CHECK(f.reduce(-1).value() == 4);
    CHECK(error_code([&] { (void)inv(f.element(0)); }) == Errc::ZeroInverse);
    CHECK(error_code([&] { (void)f.element(5); }) == Errc::ValueOutOfRange);
}

TEST_CASE("mixing fields is rejected")
{
    const Field a(5);
    const Field b(7);
    CHECK(error_code([&] { (void)(a.element(1) + b.element(1)); }) == Errc::FieldMismatch);
    CHECK(error_code([&] { (void)(a.element(1) * b.element(1)); }) == Errc::FieldMismatch);
    CHECK(error_code([&] { (void)a.pow(b.element(2), 3); }) == Errc::FieldMismatch);
}

TEST_CASE("inverses and primitive roots, exhaustive for p <= 1000")
{
    int fields = 0;
    for (std::uint32_t p = 2; p <= 1000; ++p) {
        if (!is_prime(p))
            continue;
        ++fields;
        const Field f(p);
        const auto g = f.alpha().value();
        REQUIRE(brute_order(g, p) == p - 1);
        // smallest such root
        for (std::uint32_t h = 1; h < g; ++h)
            REQUIRE(brute_order(h, p) < p - 1);
        CHECK(f.pow(f.alpha(), p - 1) == f.one());
        CHECK(f.multiplicative_order(f.alpha()) == p - 1);
        for (std::uint32_t a = 1; a < p; ++a)
            REQUIRE(f.element(a) * inv(f.element(a)) == f.one());
    }
    CHECK(fields == 168);
}

TEST_CASE("field axioms on random triples")
{
    std::mt19937_64 rng(2024);
    for (std::uint32_t p : {2u, 3u, 17u, 631u, 65521u, 2147483647u}) {
        const Field f(p);
        std::uniform_int_distribution<std::uint64_t> pick(0, p - 1);
        for (int i = 0; i < 2000; ++i) {
            const auto a = f.element(pick(rng));
            const auto b = f.element(pick(rng));
            const auto c = f.element(pick(rng));
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a + b == b + a);
            REQUIRE(a * b == b * a);
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE(a + (-a) == f.zero());
            REQUIRE((a - b) + b == a);
        }
    }
}
