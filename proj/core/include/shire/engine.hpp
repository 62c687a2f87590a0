#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "shire/log.hpp"
#include "shire/time.hpp"

namespace shire {

class Engine;

using EventAction = std::function<void(Engine&)>;

struct EventHandle {
  std::uint32_t slot = 0;
  std::uint64_t seq = 0;  // 0 = never valid
  bool valid() const { return seq != 0; }
};

// Deterministic discrete-event core. Events fire in (time, seq) order where
// seq is the insertion counter, so simultaneous events run in the order they
// were scheduled. Single-threaded; independent runs use separate engines.
class Engine {
 public:
  SimTime now() const { return clock_; }

  // Scheduling before the current clock signals a protocol bug and throws.
  EventHandle schedule(SimTime at, EventAction action);

  // Same, but the event also appends (entity, kind, detail) to the trace
  // when it fires. Cancelled events never fire and never appear in the log.
  EventHandle schedule_logged(SimTime at, std::string entity, std::string kind,
                              std::string detail, EventAction action);

  // True iff the event was pending and is now removed; idempotent.
  bool cancel(EventHandle h);

  // Appends a record at the current clock, in processing order.
  void log(std::string entity, std::string kind, std::string detail);

  // Processes every event with fire time <= end, then parks the clock at end.
  const EventLog& run_until(SimTime end);

  const EventLog& event_log() const { return log_; }
  EventLog take_log() { return std::move(log_); }
  std::size_t pending_count() const { return live_; }

 private:
  struct Slot {
    std::uint64_t seq = 0;
    bool cancelled = false;
    bool logged = false;
    std::string entity, kind, detail;
    EventAction action;
  };
  struct HeapEntry {
    std::int64_t t;
    std::uint64_t seq;
    std::uint32_t slot;
    bool operator>(const HeapEntry& o) const {
      if (t != o.t) return t > o.t;
      return seq > o.seq;
    }
  };

  std::uint32_t acquire_slot();
  EventHandle push(SimTime at, Slot&& slot);

  SimTime clock_;
  std::uint64_t next_seq_ = 1;
  std::size_t live_ = 0;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> free_slots_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap_;
  EventLog log_;
};

}  // namespace shire
