#pragma once

#include <stdexcept>
#include <string>

namespace svlab {

// Library-wide error type. Everything user-triggerable (bad config values,
// mismatched sample spaces, infeasible events) throws this; the CLI maps it
// to exit code 1 with the message on stderr.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

}  // namespace svlab
