#include "graftlab/common.hpp"

namespace graftlab {

std::string_view to_string(Side side) { return side == Side::left ? "left" : "right"; }

std::string_view to_string(OuterBoundary bc) {
  return bc == OuterBoundary::dirichlet_zero ? "dirichlet" : "neumann";
}

Side side_from_string(std::string_view name) {
  if (name == "left") return Side::left;
  if (name == "right") return Side::right;
  throw DomainError("unknown side '" + std::string(name) + "'");
}

OuterBoundary outer_boundary_from_string(std::string_view name) {
  if (name == "dirichlet" || name == "dirichlet_zero") return OuterBoundary::dirichlet_zero;
  if (name == "neumann" || name == "neumann_zero") return OuterBoundary::neumann_zero;
  throw DomainError("unknown outer boundary condition '" + std::string(name) + "'");
}

}  // namespace graftlab
