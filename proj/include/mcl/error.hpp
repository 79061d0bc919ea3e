#pragma once

#include <stdexcept>
#include <string>

namespace mcl {

enum class Errc {
  dimension_mismatch,
  invalid_argument,
  bad_grid,
  io,
  config,
  data_mismatch,
  witness_empty,
  unsupported,
};

/// Structured error: every failure carries a code plus a human-readable
/// message naming the offending input.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mcl
