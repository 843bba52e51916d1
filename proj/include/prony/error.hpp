#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prony {

enum class Errc {
  InvalidArgument,
  InsufficientMoments,
  IndexOutOfRange,
  NodesNotSorted,
  DimensionMismatch,
  CollidingNodes,
  InvalidInterval,
  DegenerateSequence,
  EmptyVariety,
  SingularHankel,
  InvalidWindow,
  NotHyperbolic,
  InvalidStratum,
  NodeOutOfBox,
  DegeneratePencil,
  PreconditionT,
};

std::string_view to_string(Errc code) noexcept;

/// Exception carrying a machine-readable error code. All library
/// preconditions are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace prony
