#ifndef NANOMAC_CORE_SIM_HPP
#define NANOMAC_CORE_SIM_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "core/simtime.hpp"
#include "core/status.hpp"

namespace nanomac::sim {

// Closed set of event kinds; worlds dispatch on the kind rather than queueing
// closures, which keeps traces replayable.
enum class EventKind : std::uint8_t {
    BeaconDue = 0,
    SlotBoundary = 1,
    FrameArrival = 2,
    HarvestSample = 3,
    ExperimentCheckpoint = 4,
};

const char* event_kind_name(EventKind kind);

struct Event {
    SimTime at;
    std::uint64_t seq = 0;  // insertion order; breaks same-instant ties
    EventKind kind = EventKind::ExperimentCheckpoint;
    std::uint32_t target = 0;
};

// Single-threaded event loop over a (time, insertion-seq) ordered queue.
// One Engine per simulated world; independent worlds can run on separate
// threads.
class Engine {
  public:
    using Handler = std::function<void(Engine&, const Event&)>;

    SimTime now() const { return now_; }

    Status schedule(SimTime at, EventKind kind, std::uint32_t target);

    // Dispatch events in order until the queue drains or the next event lies
    // beyond the horizon. Returns the number of events dispatched; the clock
    // finishes at max(horizon, last dispatch time).
    std::uint64_t run_until(SimTime horizon, const Handler& handler);

    bool empty() const { return queue_.empty(); }

    // Optional event log, one "time_fs,seq,kind,target" line per dispatch.
    void set_trace(std::string* sink) { trace_ = sink; }

  private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at) return b.at < a.at;
            return b.seq < a.seq;
        }
    };

    SimTime now_{};
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::string* trace_ = nullptr;
};

} // namespace nanomac::sim

#endif
