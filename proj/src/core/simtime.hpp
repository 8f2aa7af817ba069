#ifndef NANOMAC_CORE_SIMTIME_HPP
#define NANOMAC_CORE_SIMTIME_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nanomac {

// The virtual clock counts integer femtoseconds. Pulse widths are 100 fs and
// beacon intervals run to minutes, so a long sweep exceeds the 64-bit range;
// 128-bit storage keeps every instant exact. Overflow is a hard fault, never
// a silent wrap.
class SimTime {
  public:
    using rep = unsigned __int128;

    constexpr SimTime() : fs_(0) {}
    constexpr explicit SimTime(rep femtoseconds) : fs_(femtoseconds) {}

    static constexpr std::int64_t kFsPerPs = 1000;
    static constexpr std::int64_t kFsPerSecond = 1000000000000000LL;  // 1e15
    static constexpr std::int64_t kFsPerMinute = 60 * kFsPerSecond;

    static constexpr SimTime from_fs(std::uint64_t fs) { return SimTime(rep(fs)); }
    static constexpr SimTime from_seconds(std::uint64_t s) {
        return SimTime(rep(s) * rep(kFsPerSecond));
    }
    static constexpr SimTime from_minutes(std::uint64_t m) {
        return SimTime(rep(m) * rep(kFsPerMinute));
    }

    constexpr rep femtoseconds() const { return fs_; }

    SimTime operator+(SimTime o) const {
        rep r = fs_ + o.fs_;
        if (r < fs_) throw std::overflow_error("SimTime addition overflow");
        return SimTime(r);
    }
    SimTime operator-(SimTime o) const {
        if (o.fs_ > fs_) throw std::overflow_error("SimTime subtraction underflow");
        return SimTime(fs_ - o.fs_);
    }
    SimTime operator*(std::uint64_t k) const {
        if (k != 0 && fs_ > ~rep(0) / k) throw std::overflow_error("SimTime multiply overflow");
        return SimTime(fs_ * rep(k));
    }

    constexpr bool operator==(const SimTime&) const = default;
    constexpr auto operator<=>(const SimTime&) const = default;

    std::string to_string() const {
        if (fs_ == 0) return "0";
        std::string out;
        rep v = fs_;
        while (v > 0) {
            out.push_back(char('0' + int(v % 10)));
            v /= 10;
        }
        return {out.rbegin(), out.rend()};
    }

  private:
    rep fs_;
};

// elapsed_minutes as an exact rational against kFsPerMinute; callers that need
// fractional minutes divide themselves.
inline double simtime_to_seconds(SimTime t) {
    return double(t.femtoseconds()) / double(SimTime::kFsPerSecond);
}

} // namespace nanomac

#endif
