#pragma once

#include <optional>

#include "partlab/error.hpp"

namespace support {

/// Kind of the partlab::Error thrown by f, or nothing if f returns normally.
template <class F>
std::optional<partlab::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const partlab::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace support
