#include "core/sim.hpp"

namespace nanomac::sim {

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::BeaconDue: return "BeaconDue";
        case EventKind::SlotBoundary: return "SlotBoundary";
        case EventKind::FrameArrival: return "FrameArrival";
        case EventKind::HarvestSample: return "HarvestSample";
        case EventKind::ExperimentCheckpoint: return "ExperimentCheckpoint";
    }
    return "Unknown";
}

Status Engine::schedule(SimTime at, EventKind kind, std::uint32_t target) {
    if (at < now_) return Status::PastEvent;
    queue_.push(Event{at, next_seq_++, kind, target});
    return Status::Ok;
}

std::uint64_t Engine::run_until(SimTime horizon, const Handler& handler) {
    std::uint64_t dispatched = 0;
    while (!queue_.empty() && !(horizon < queue_.top().at)) {
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.at;  // never moves backward: queue order plus the schedule guard
        if (trace_) {
            trace_->append(ev.at.to_string());
            trace_->push_back(',');
            trace_->append(std::to_string(ev.seq));
            trace_->push_back(',');
            trace_->append(event_kind_name(ev.kind));
            trace_->push_back(',');
            trace_->append(std::to_string(ev.target));
            trace_->push_back('\n');
        }
        handler(*this, ev);
        ++dispatched;
    }
    if (now_ < horizon) now_ = horizon;
    return dispatched;
}

} // namespace nanomac::sim
