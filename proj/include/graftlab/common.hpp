#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graftlab {

inline constexpr double kPi = std::numbers::pi;

/// Raised when an input lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical solve (Newton, BVP, linear system) fails.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The two seam circles bounding the flat insert: left is x = -s/2, right is x = +s/2.
enum class Side { left, right };

/// Self-adjoint condition imposed on the outer boundary |x| = s/2 + a of each strip.
enum class OuterBoundary { dirichlet_zero, neumann_zero };

constexpr double side_sign(Side side) { return side == Side::left ? -1.0 : 1.0; }

std::string_view to_string(Side side);
std::string_view to_string(OuterBoundary bc);
Side side_from_string(std::string_view name);
OuterBoundary outer_boundary_from_string(std::string_view name);

}  // namespace graftlab
