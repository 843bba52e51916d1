#include "prony/error.hpp"

namespace prony {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InsufficientMoments: return "InsufficientMoments";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NodesNotSorted: return "NodesNotSorted";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::CollidingNodes: return "CollidingNodes";
    case Errc::InvalidInterval: return "InvalidInterval";
    case Errc::DegenerateSequence: return "DegenerateSequence";
    case Errc::EmptyVariety: return "EmptyVariety";
    case Errc::SingularHankel: return "SingularHankel";
    case Errc::InvalidWindow: return "InvalidWindow";
    case Errc::NotHyperbolic: return "NotHyperbolic";
    case Errc::InvalidStratum: return "InvalidStratum";
    case Errc::NodeOutOfBox: return "NodeOutOfBox";
    case Errc::DegeneratePencil: return "DegeneratePencil";
    case Errc::PreconditionT: return "PreconditionT";
  }
  return "Unknown";
}

}  // namespace prony
