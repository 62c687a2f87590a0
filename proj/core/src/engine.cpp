#include "shire/engine.hpp"

#include <stdexcept>
#include <utility>

namespace shire {

std::uint32_t Engine::acquire_slot() {
  if (!free_slots_.empty()) {
    std::uint32_t idx = free_slots_.back();
    free_slots_.pop_back();
    return idx;
  }
  slots_.emplace_back();
  return static_cast<std::uint32_t>(slots_.size() - 1);
}

EventHandle Engine::push(SimTime at, Slot&& slot) {
  if (at < clock_)
    throw std::logic_error("schedule in the past: t=" +
                           std::to_string(at.us()) +
                           "us < clock=" + std::to_string(clock_.us()) + "us");
  std::uint32_t idx = acquire_slot();
  slot.seq = next_seq_++;
  slot.cancelled = false;
  slots_[idx] = std::move(slot);
  heap_.push({at.us(), slots_[idx].seq, idx});
  ++live_;
  return {idx, slots_[idx].seq};
}

EventHandle Engine::schedule(SimTime at, EventAction action) {
  Slot s;
  s.action = std::move(action);
  return push(at, std::move(s));
}

EventHandle Engine::schedule_logged(SimTime at, std::string entity,
                                    std::string kind, std::string detail,
                                    EventAction action) {
  Slot s;
  s.logged = true;
  s.entity = std::move(entity);
  s.kind = std::move(kind);
  s.detail = std::move(detail);
  s.action = std::move(action);
  return push(at, std::move(s));
}

bool Engine::cancel(EventHandle h) {
  if (!h.valid() || h.slot >= slots_.size()) return false;
  Slot& s = slots_[h.slot];
  if (s.seq != h.seq || s.cancelled) return false;
  s.cancelled = true;
  --live_;
  return true;
}

void Engine::log(std::string entity, std::string kind, std::string detail) {
  log_.append(clock_.us(), std::move(entity), std::move(kind),
              std::move(detail));
}

const EventLog& Engine::run_until(SimTime end) {
  while (!heap_.empty() && heap_.top().t <= end.us()) {
    HeapEntry e = heap_.top();
    heap_.pop();
    Slot& s = slots_[e.slot];
    if (s.cancelled) {
      // seq 0 marks the slot dead until reuse
      s = Slot{};
      free_slots_.push_back(e.slot);
      continue;
    }
    clock_ = SimTime::from_us(e.t);
    --live_;
    if (s.logged) log_.append(e.t, s.entity, s.kind, s.detail);
    EventAction action = std::move(s.action);
    s = Slot{};
    free_slots_.push_back(e.slot);
    if (action) action(*this);
  }
  if (end > clock_) clock_ = end;
  return log_;
}

}  // namespace shire
