#include "sts/codec.hpp"
#include "sts/error.hpp"
#include "sts/rcrm.hpp"
#include "sts/simkit.hpp"

#include <doctest.h>

#include <array>
#include <map>
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

} // namespace

TEST_CASE("packing layout")
{
    CHECK(rcrm_pack({3, 7, 3, 3}) == 511);
    CHECK(rcrm_pack({0, 0, 0, 0}) == 0);
    CHECK(rcrm_pack({1, 0, 0, 0}) == 128);
    CHECK(rcrm_pack({0, 1, 0, 0}) == 16);
    CHECK(rcrm_pack({0, 0, 1, 0}) == 4);
    CHECK(rcrm_pack({0, 0, 0, 1}) == 1);
    CHECK(rcrm_pack({2, 5, 1, 2}) == 2 * 128 + 5 * 16 + 4 + 2);
    CHECK(to_string(rcrm_unpack(511)) == "rid=3 prio=7 sinr=3 bshash=3");
}

TEST_CASE("pack/unpack round trip over all 512 messages")
{
    std::set<std::uint32_t> seen;
    for (std::uint32_t m = 0; m < kRcrmSpace; ++m) {
        const auto r = rcrm_unpack(m);
        REQUIRE(rcrm_pack(r) == m);
        seen.insert(m);
    }
    CHECK(seen.size() == 512);
    CHECK(error_code([] { (void)rcrm_unpack(512); }) == Errc::MessageOutOfRange);
}

TEST_CASE("field overflow is rejected")
{
    CHECK(error_code([] { (void)rcrm_pack({4, 0, 0, 0}); }) == Errc::FieldOverflow);
    CHECK(error_code([] { (void)rcrm_pack({0, 8, 0, 0}); }) == Errc::FieldOverflow);
    CHECK(error_code([] { (void)rcrm_pack({0, 0, 4, 0}); }) == Errc::FieldOverflow);
    CHECK(error_code([] { (void)rcrm_pack({0, 0, 0, 4}); }) == Errc::FieldOverflow);
}

TEST_CASE("every request fits one codeword of the 631-ary code")
{
    const CodeParams p(Field(631), 14, 1);
    CHECK(kRcrmSpace <= p.message_space());
    const GftContext ctx(p);
    CHECK(encode(rcrm_pack({3, 7, 3, 3}), ctx).indices().front() == 511);
}

TEST_CASE("base-station hash")
{
    for (std::uint32_t b = 0; b < kBaseStationIdSpace; ++b)
        for (std::uint64_t t = 0; t < 8; ++t)
            REQUIRE(hash_bsid(b, t) < 4);
    CHECK(error_code([] { (void)hash_bsid(512, 0); }) == Errc::ValueOutOfRange);
    CHECK(hash_bsid(17, 5) == hash_bsid(17, 5));

    // Roughly uniform over ids in each slot, and it actually varies with the slot.
    std::size_t varying = 0;
    for (std::uint64_t t = 0; t < 64; ++t) {
        std::array<int, 4> bucket{};
        for (std::uint32_t b = 0; b < kBaseStationIdSpace; ++b)
            ++bucket[hash_bsid(b, t)];
        for (int c : bucket)
            REQUIRE(std::abs(c - 128) <= 40);
    }
    for (std::uint32_t b = 0; b < kBaseStationIdSpace; ++b) {
        std::set<std::uint32_t> values;
        for (std::uint64_t t = 0; t < 16; ++t)
            values.insert(hash_bsid(b, t));
        varying += values.size() > 1;
    }
    CHECK(varying == kBaseStationIdSpace);
}

TEST_CASE("collisions are payload equality")
{
    CHECK(collides({1, 2, 3, 0}, {1, 2, 3, 0}));
    CHECK_FALSE(collides({1, 2, 3, 0}, {1, 2, 3, 1}));
}

TEST_CASE("scenario gives distinct resources within a base station")
{
    const std::array<std::uint32_t, 3> bs{10, 200, 511};
    Rng rng(1);
    const auto users = rcrm_scenario(12, bs, 7, rng);
    REQUIRE(users.size() == 12);
    std::map<std::uint32_t, std::set<std::uint32_t>> rid_by_bs;
    for (std::size_t i = 0; i < users.size(); ++i) {
        CHECK(users[i].bsid == bs[i % bs.size()]);
        CHECK(users[i].request.bs_hash == hash_bsid(users[i].bsid, 7));
        CHECK(rid_by_bs[users[i].bsid].insert(users[i].request.resource_id).second);
    }
    for (std::size_t i = 0; i < users.size(); ++i)
        for (std::size_t j = i + 1; j < users.size(); ++j)
            if (users[i].bsid == users[j].bsid)
                CHECK_FALSE(collides(users[i].request, users[j].request));
    CHECK(error_code([&] { (void)rcrm_scenario(13, bs, 0, rng); }) == Errc::InvalidParameters);
}
