#pragma once

#include "graftlab/common.hpp"
#include "graftlab/identities.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace graftlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment parameters. Every field has a key of the same name in the config file and a
/// command-line flag (underscores become dashes).
struct RunConfig {
  double ell = 6.283185307179586;
  double s = 2.0;
  double a = 1.0;
  OuterBoundary outer_bc = OuterBoundary::dirichlet_zero;
  std::size_t modes = 32;
  double tol = 1e-10;          ///< algebraic identities
  double solver_tol = 1e-7;    ///< identities routed through BVP solves
  std::uint64_t seed = 1;
  std::size_t configs = 100;   ///< random configurations per property check
  double amplitude = 1.0;
  std::string field = "random";  ///< random | zero | c1
  std::string out;             ///< empty: write to the log stream
  std::string param = "ell";   ///< ell | s | a
  double from = 1.0;
  double to = 8.0;
  std::size_t steps = 50;
  double t = 1e-3;
  double fd_step = 0.0;        ///< 0: 1e-4 * t
  std::size_t nodes = 256;
  std::string kind = "hyperbolic";  ///< modes output: hyperbolic | spectral
};

/// Sets one key from its text value. Throws ConfigError on unknown keys, unparsable values
/// or out-of-range values.
void set_key(RunConfig& config, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Checks ranges that involve several keys; throws ConfigError.
void validate(const RunConfig& config);

/// The full identity suite at `config`.
std::vector<identities::IdentityReport> verify_suite(const RunConfig& config);

/// Each command returns an exit code and writes its main output to config.out, or to
/// `log` when out is empty. A one-line summary per check goes to `log` as well.
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_sweep(const RunConfig& config, std::ostream& log);
int cmd_geodesic(const RunConfig& config, std::ostream& log);
int cmd_chart(const RunConfig& config, std::ostream& log);
int cmd_modes(const RunConfig& config, std::ostream& log);

/// Sweep CSV header for `modes` determinant columns.
std::string sweep_header(std::size_t modes);

}  // namespace graftlab::cli
