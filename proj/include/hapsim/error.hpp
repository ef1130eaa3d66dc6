#pragma once

#include <stdexcept>
#include <string>

namespace hapsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an event is scheduled in the past or the clock is asked to go backwards.
class SchedulingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ProtocolViolation : public Error {
 public:
  ProtocolViolation(std::string state, std::string event)
      : Error("protocol violation: event '" + event + "' is not legal in state '" + state + "'"),
        state_(std::move(state)),
        event_(std::move(event)) {}

  const std::string& state() const { return state_; }
  const std::string& event() const { return event_; }

 private:
  std::string state_;
  std::string event_;
};

}  // namespace hapsim
