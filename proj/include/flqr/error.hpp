#pragma once

#include <stdexcept>
#include <string>

namespace flqr {

// Error categories, mirrored one-to-one by the C API status codes.
enum class ErrorCode : int {
    ok = 0,
    invalid_argument = 1,
    convergence = 2,
    near_resonance = 3,
    ambiguous_branch = 4,
    dimension_limit = 5,
    truncation = 6,
    io = 7,
    internal = 8,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace flqr
