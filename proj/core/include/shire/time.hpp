#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace shire {

// Simulation time as fixed-point microseconds. Integer ticks keep event
// ordering identical across compilers and FPUs; 1 us is finer than any
// delay this model cares about.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_us(std::int64_t us) { return SimTime(us); }
  static SimTime from_seconds(double s) {
    return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
  }

  constexpr std::int64_t us() const { return us_; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

  friend constexpr auto operator<=>(SimTime a, SimTime b) = default;

  constexpr SimTime operator+(SimTime rhs) const { return SimTime(us_ + rhs.us_); }
  constexpr SimTime operator-(SimTime rhs) const { return SimTime(us_ - rhs.us_); }
  SimTime& operator+=(SimTime rhs) {
    us_ += rhs.us_;
    return *this;
  }

 private:
  explicit constexpr SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

// Shorthand for converting scenario parameters given in seconds.
inline SimTime sim_seconds(double s) { return SimTime::from_seconds(s); }

}  // namespace shire
