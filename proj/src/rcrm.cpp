#include "sts/rcrm.hpp"

#include "sts/error.hpp"

namespace sts {

namespace {

void check_width(std::uint32_t value, std::uint32_t bits, const char* name)
{
    if (value >= (1u << bits))
        throw Error(Errc::FieldOverflow,
                    std::string(name) + "=" + std::to_string(value) + " exceeds " + std::to_string(bits) + " bits");
}

// MurmurHash3 32-bit finalizer.
std::uint32_t fmix32(std::uint32_t h) noexcept
{
    h ^= h >> 16;
    h *= 0x85ebca6bu;
    h ^= h >> 13;
    h *= 0xc2b2ae35u;
    h ^= h >> 16;
    return h;
}

} // namespace

std::uint32_t rcrm_pack(const Rcrm& r)
{
    check_width(r.resource_id, 2, "resource_id");
    check_width(r.priority, 3, "priority");
    check_width(r.target_sinr, 2, "target_sinr");
    check_width(r.bs_hash, 2, "bs_hash");
    return (r.resource_id << 7) | (r.priority << 4) | (r.target_sinr << 2) | r.bs_hash;
}

Rcrm rcrm_unpack(std::uint64_t m)
{
    if (m >= kRcrmSpace)
        throw Error(Errc::MessageOutOfRange, std::to_string(m) + " does not fit 9 bits");
    const auto v = static_cast<std::uint32_t>(m);
    return Rcrm{(v >> 7) & 0x3u, (v >> 4) & 0x7u, (v >> 2) & 0x3u, v & 0x3u};
}

std::uint32_t hash_bsid(std::uint32_t bsid, std::uint64_t timeslot)
{
    if (bsid >= kBaseStationIdSpace)
        throw Error(Errc::ValueOutOfRange, "base station id " + std::to_string(bsid) + " exceeds 9 bits");
    const auto key = static_cast<std::uint32_t>(static_cast<std::uint64_t>(bsid) * 2654435761u +
                                                timeslot * 40503u);
    return fmix32(key) >> 30;
}

bool collides(const Rcrm& a, const Rcrm& b) { return rcrm_pack(a) == rcrm_pack(b); }

std::string to_string(const Rcrm& r)
{
    return "rid=" + std::to_string(r.resource_id) + " prio=" + std::to_string(r.priority) +
           " sinr=" + std::to_string(r.target_sinr) + " bshash=" + std::to_string(r.bs_hash);
}

} // namespace sts
