#pragma once

#include <stdexcept>
#include <string>

namespace coxflate {

// Error families. Each family maps to a distinct CLI exit code (see tools/).
enum class errc {
  invalid_input,      // bad arguments, malformed files, unsupported parameters
  cap_exceeded,       // closure would pass its node cap
  non_simply_laced,   // closure met an inner product outside {0, +-1, +-2}
  no_fixpoint,        // closure did not stabilize within max_rounds
  enumeration_capped, // coset enumeration hit max_cosets without closing
  inconsistent,       // relation set violates radical/singularity invariants
  degenerate,         // quadratic space degenerate where nondegeneracy required
  io,                 // filesystem / serialization failures
  verification        // re-verification of a computed artifact failed
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_input: return "invalid_input";
    case errc::cap_exceeded: return "cap_exceeded";
    case errc::non_simply_laced: return "non_simply_laced";
    case errc::no_fixpoint: return "no_fixpoint";
    case errc::enumeration_capped: return "enumeration_capped";
    case errc::inconsistent: return "inconsistent";
    case errc::degenerate: return "degenerate";
    case errc::io: return "io";
    case errc::verification: return "verification";
  }
  return "unknown";
}

}  // namespace coxflate
