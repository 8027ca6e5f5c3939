// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so results do not depend on thread scheduling
// or on the standard library's distribution implementations.
#pragma once

#include <cstdint>
#include <string_view>

namespace parawt
{

constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a; stable across platforms, used for stream names and param hashes.
constexpr std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

class CounterRng
{
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)))
    {
    }
    CounterRng(std::uint64_t seed, std::string_view stream)
        : CounterRng(seed, fnv1a(stream))
    {
    }

    std::uint64_t at(std::uint64_t counter) const
    {
        return mix64(key_ ^ mix64(counter));
    }
    std::uint64_t next_u64() { return at(counter_++); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    CounterRng substream(std::uint64_t index) const
    {
        CounterRng r = *this;
        r.key_ = mix64(key_ + mix64(index ^ 0x5851f42d4c957f2dULL));
        r.counter_ = 0;
        return r;
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace parawt
