#pragma once

#include <stdexcept>
#include <string>

namespace genlab {

/// Malformed input: unknown element ids, bad JSON, invariant violations on load.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its precondition (not a prefilter,
/// noncommuting pair, conditioning on a null event, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Work would exceed a configured size or time cap.
class CapRefusal : public std::runtime_error {
 public:
  CapRefusal(const std::string& what, std::size_t cap)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

}  // namespace genlab
