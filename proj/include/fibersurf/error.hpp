#pragma once

#include <stdexcept>
#include <string>

namespace fibersurf {

enum class ErrorCode {
  kIo = 1,
  kParse,
  kInvalidMesh,
  kNonManifold,
  kInvalidArgument,
  kNotFound,
  kNotAHit,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fibersurf
