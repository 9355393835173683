#pragma once
#include <stdexcept>
#include <string>

namespace conic {

// Error codes double as CLI exit codes.
enum class Errc {
  malformed_input = 2,
  anisotropic     = 3,
  degenerate      = 4,  // singular form, or imprimitive where primitive is required
  factoring_cap   = 5,
  oracle_mismatch = 6,
  internal        = 9,
};

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, Errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

// Consistency checks that cannot fire unless the implementation itself is wrong.
inline void check_internal(bool ok, const std::string& msg) {
  if (!ok) fail(Errc::internal, std::string("internal check failed: ") + msg);
}

}  // namespace conic
