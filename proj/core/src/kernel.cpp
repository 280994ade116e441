#include "dtsim/kernel.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "dtsim/errors.hpp"

namespace dtsim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::DemandGenerated: return "DemandGenerated";
    case EventKind::MessageHopDone: return "MessageHopDone";
    case EventKind::ComputeDone: return "ComputeDone";
    case EventKind::MobilityTick: return "MobilityTick";
    case EventKind::ModelUpdateTick: return "ModelUpdateTick";
    case EventKind::HandoverComplete: return "HandoverComplete";
  }
  return "?";
}

EventId Kernel::schedule(SimTime time, EventKind kind, std::uint64_t subject, std::uint64_t aux) {
  if (!std::isfinite(time)) {
    throw InvariantViolation("kernel: non-finite event time");
  }
  if (time < now_) {
    std::ostringstream os;
    os << "kernel: event " << to_string(kind) << " scheduled at t=" << time << " before now=" << now_;
    throw InvariantViolation(os.str());
  }
  Event e{time, next_seq_++, kind, subject, aux};
  queue_.push(e);
  live_.insert(e.seq);
  return e.seq;
}

void Kernel::cancel(EventId id) {
  if (live_.erase(id) == 0) {
    throw InvariantViolation("kernel: cancel of an event that is not pending");
  }
}

SimTime Kernel::run_until(SimTime t_end, const Dispatcher& dispatch) {
  if (!(t_end >= now_)) {
    throw InvariantViolation("kernel: run_until target precedes the clock");
  }
  while (!queue_.empty() && queue_.top().time <= t_end) {
    Event e = queue_.top();
    queue_.pop();
    if (live_.erase(e.seq) == 0) continue;  // cancelled
    now_ = e.time;
    ++dispatched_;
    fold(e);
    if (trace_ != nullptr) trace_->push_back(e);
    dispatch(e);
  }
  // Drop cancelled tombstones so pending() and the heap agree.
  while (!queue_.empty() && !live_.contains(queue_.top().seq)) queue_.pop();
  now_ = t_end;
  return now_;
}

void Kernel::fold(const Event& e) {
  auto mix = [this](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      digest_ ^= (v >> (8 * i)) & 0xffU;
      digest_ *= 1099511628211ULL;
    }
  };
  mix(std::bit_cast<std::uint64_t>(e.time));
  mix(e.seq);
  mix(static_cast<std::uint64_t>(e.kind));
  mix(e.subject);
  mix(e.aux);
}

}  // namespace dtsim
