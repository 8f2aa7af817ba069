#ifndef NANOMAC_CORE_RNG_HPP
#define NANOMAC_CORE_RNG_HPP

#include <cstdint>

namespace nanomac {

// splitmix64 step (Vigna's public-domain mixer). With state 0 the first three
// outputs are e220a8397b1dcdaf, 6e789e6aa1b965f4, 06c45d188009454f, which the
// test suite pins so every platform produces the same draws.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) { return splitmix64_next(x); }

// One independent draw stream per simulated node. The state derives from
// (seed, stream_id) alone, so node processing order never shifts anyone's
// sequence. Split rule: mix the seed, mix the xor-tagged stream id, mix the
// combination.
class RandomStream {
  public:
    RandomStream() : state_(0), stream_id_(0) {}
    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(derive_state(seed, stream_id)), stream_id_(stream_id) {}

    static std::uint64_t derive_state(std::uint64_t seed, std::uint64_t stream_id) {
        return mix64(mix64(seed) ^ mix64(stream_id ^ 0x9e3779b97f4a7c15ull));
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Unbiased integer in [0, bound) by rejection (arc4random_uniform rule).
    std::uint64_t uniform_int(std::uint64_t bound) {
        // bound >= 1; bound == 1 still consumes one draw
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t stream_id() const { return stream_id_; }

  private:
    std::uint64_t state_;
    std::uint64_t stream_id_;
};

} // namespace nanomac

#endif
