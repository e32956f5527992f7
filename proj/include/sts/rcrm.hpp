#pragma once

// 9-bit resource coordination request message.
//
// Layout, most significant first:
//   [8:7] resource_id  [6:4] priority  [3:2] target_sinr  [1:0] bs_hash

#include <cstdint>
#include <string>

namespace sts {

struct Rcrm {
    std::uint32_t resource_id = 0; // 2 bits
    std::uint32_t priority = 0;    // 3 bits
    std::uint32_t target_sinr = 0; // 2 bits
    std::uint32_t bs_hash = 0;     // 2 bits

    friend bool operator==(const Rcrm&, const Rcrm&) = default;
};

inline constexpr std::uint32_t kRcrmBits = 9;
inline constexpr std::uint32_t kRcrmSpace = 1u << kRcrmBits;
inline constexpr std::uint32_t kBaseStationIdSpace = 512;

/// Throws Errc::FieldOverflow if any field exceeds its width.
std::uint32_t rcrm_pack(const Rcrm& r);
/// Throws Errc::MessageOutOfRange for m >= 512.
Rcrm rcrm_unpack(std::uint64_t m);

/// Time-varying 2-bit digest of a 9-bit base-station id.
/// Throws Errc::ValueOutOfRange for bsid >= 512.
std::uint32_t hash_bsid(std::uint32_t bsid, std::uint64_t timeslot);

/// Two requests collide when their payloads are identical; their tones
/// coincide and the receiver sees a single message.
bool collides(const Rcrm& a, const Rcrm& b);

/// `rid=<n> prio=<n> sinr=<n> bshash=<n>`
std::string to_string(const Rcrm& r);

} // namespace sts
