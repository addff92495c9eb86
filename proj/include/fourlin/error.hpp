#pragma once

#include <stdexcept>
#include <string>

namespace fourlin {

enum class ErrorKind {
  invalid_argument,
  non_finite,
  resolution_too_coarse,
  symmetry_violation,
  oracle_size,
  non_convergence,
  degenerate_target,
  io,
  format,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::invalid_argument, what);
}

}  // namespace fourlin
