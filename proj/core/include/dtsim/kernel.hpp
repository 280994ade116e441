#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

namespace dtsim {

// Simulated seconds.
using SimTime = double;

enum class EventKind : std::uint8_t {
  DemandGenerated,
  MessageHopDone,
  ComputeDone,
  MobilityTick,
  ModelUpdateTick,
  HandoverComplete,
};

const char* to_string(EventKind kind);

using EventId = std::uint64_t;

// `subject` and `aux` are interpreted per kind (terminal index, message id, node id, ...).
struct Event {
  SimTime time = 0.0;
  EventId seq = 0;
  EventKind kind = EventKind::DemandGenerated;
  std::uint64_t subject = 0;
  std::uint64_t aux = 0;
};

/// Sequential discrete-event engine.
///
/// Events are dispatched in (time, seq) order where seq is the insertion
/// counter, so equal-time events run FIFO. Every dispatched event is folded
/// into a running FNV-1a digest which identifies the trace.
class Kernel {
 public:
  using Dispatcher = std::function<void(const Event&)>;

  SimTime now() const { return now_; }

  // Throws InvariantViolation when `time` is in the past or not finite.
  EventId schedule(SimTime time, EventKind kind, std::uint64_t subject = 0, std::uint64_t aux = 0);
  EventId schedule_in(SimTime delay, EventKind kind, std::uint64_t subject = 0, std::uint64_t aux = 0) {
    return schedule(now_ + delay, kind, subject, aux);
  }

  // Removes a live event; it will never be dispatched.
  void cancel(EventId id);
  bool is_live(EventId id) const { return live_.contains(id); }

  // Dispatches every event with time <= t_end and leaves the clock at t_end.
  SimTime run_until(SimTime t_end, const Dispatcher& dispatch);

  std::size_t pending() const { return live_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }
  std::uint64_t trace_digest() const { return digest_; }

  // Optional sink receiving a copy of every dispatched event.
  void record_trace(std::vector<Event>* sink) { trace_ = sink; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  void fold(const Event& e);

  SimTime now_ = 0.0;
  EventId next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_set<EventId> live_;
  std::uint64_t dispatched_ = 0;
  std::uint64_t digest_ = 14695981039346656037ULL;
  std::vector<Event>* trace_ = nullptr;
};

}  // namespace dtsim
