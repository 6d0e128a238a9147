#include "doctest.h"

#include "graftlab/cli.hpp"
#include "graftlab/numerics.hpp"
#include "graftlab/parallel.hpp"

#include "json.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

using namespace graftlab;
using namespace graftlab::cli;
using doctest::Approx;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<double> column(const std::string& csv, const std::string& name) {
  const auto rows = lines_of(csv);
  std::vector<std::string> header;
  {
    std::istringstream h(rows.at(0));
    for (std::string cell; std::getline(h, cell, ',');) header.push_back(cell);
  }
  const auto idx = static_cast<std::size_t>(
      std::find(header.begin(), header.end(), name) - header.begin());
  std::vector<double> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].rfind("sweep:", 0) == 0) continue;
    std::istringstream in(rows[r]);
    std::string cell;
    for (std::size_t c = 0; c <= idx; ++c) std::getline(in, cell, ',');
    out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# experiment\n"
      "ell = 3.5\n"
      "  s=1.25   # trailing comment\n"
      "outer-bc = neumann_zero\n"
      "modes = 12\n"
      "\n"
      "param = s\n");
  const auto c = parse_config(in);
  CHECK(c.ell == 3.5);
  CHECK(c.s == 1.25);
  CHECK(c.outer_bc == OuterBoundary::neumann_zero);
  CHECK(c.modes == 12);
  CHECK(c.param == "s");
  CHECK(c.a == 1.0);
}

TEST_CASE("config errors") {
  RunConfig c;
  CHECK_THROWS_AS(set_key(c, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(set_key(c, "ell", "abc"), ConfigError);
  CHECK_THROWS_AS(set_key(c, "ell", "-1"), ConfigError);
  CHECK_THROWS_AS(set_key(c, "s", "-0.5"), ConfigError);
  CHECK_THROWS_AS(set_key(c, "modes", "0"), ConfigError);
  CHECK_THROWS_AS(set_key(c, "modes", "2.5"), ConfigError);
  CHECK_THROWS_AS(set_key(c, "param", "t"), ConfigError);
  CHECK_THROWS_AS(set_key(c, "outer_bc", "robin"), ConfigError);
  std::istringstream bad("ell = 2\nthis line is wrong\n");
  CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("line 2"), ConfigError);

  RunConfig v;
  v.nodes = 15;
  CHECK_THROWS_AS(validate(v), ConfigError);
  v.nodes = 256;
  v.from = 3.0;
  v.to = 1.0;
  CHECK_THROWS_AS(validate(v), ConfigError);
  v.from = 0.0;
  v.to = 1.0;
  CHECK_THROWS_AS(validate(v), ConfigError);
  v.param = "s";
  CHECK_NOTHROW(validate(v));
  CHECK_THROWS_AS(load_config("/nonexistent/graftlab.cfg"), ConfigError);
}

TEST_CASE("sweep over ell") {
  RunConfig c;
  c.modes = 8;
  c.steps = 50;
  std::ostringstream log;
  REQUIRE(cmd_sweep(c, log) == kExitPass);
  const auto text = log.str();
  CHECK(lines_of(text).front() == sweep_header(8));
  const auto mod = column(text, "modulus");
  REQUIRE(mod.size() == 50);
  for (std::size_t i = 1; i < mod.size(); ++i) CHECK(mod[i] < mod[i - 1]);
  const auto quad = column(text, "modulus_quadrature");
  for (std::size_t i = 0; i < mod.size(); ++i) CHECK(quad[i] == Approx(mod[i]).epsilon(1e-10));
  for (double d : column(text, "min_abs_det")) CHECK(d > 1e-6);
}

TEST_CASE("sweep over s and single step") {
  RunConfig c;
  c.modes = 4;
  c.param = "s";
  c.from = 0.0;
  c.to = 4.0;
  c.steps = 20;
  std::ostringstream log;
  REQUIRE(cmd_sweep(c, log) == kExitPass);
  const auto mod = column(log.str(), "modulus");
  REQUIRE(mod.size() == 20);
  for (std::size_t i = 1; i < mod.size(); ++i) CHECK(mod[i] > mod[i - 1]);

  c.steps = 1;
  std::ostringstream one;
  REQUIRE(cmd_sweep(c, one) == kExitPass);
  CHECK(column(one.str(), "modulus").size() == 1);
}

TEST_CASE("unwritable output is a config error") {
  RunConfig c;
  c.modes = 2;
  c.steps = 2;
  c.out = "/nonexistent-dir/out.csv";
  std::ostringstream log;
  CHECK(cmd_sweep(c, log) == kExitConfig);
  CHECK(cmd_chart(c, log) == kExitConfig);
}

TEST_CASE("chart and modes output") {
  RunConfig c;
  std::ostringstream log;
  REQUIRE(cmd_chart(c, log) == kExitPass);
  const auto doc = nlohmann::json::parse(log.str());
  CHECK(doc["area"].get<double>() == Approx(4.0 * kPi * std::sinh(1.0) + 4.0 * kPi));
  CHECK(doc["length"].get<double>() == Approx(4.0 * kPi));

  c.modes = 3;
  c.kind = "spectral";
  std::ostringstream table;
  REQUIRE(cmd_modes(c, table) == kExitPass);
  const auto rows = lines_of(table.str());
  CHECK(rows.front() == "n,c_re,c_im,d_re,d_im,lambda_re,lambda_im,rho_re,rho_im");
  CHECK(rows.size() == 5);

  c.kind = "hyperbolic";
  std::ostringstream hyp;
  REQUIRE(cmd_modes(c, hyp) == kExitPass);
  CHECK(lines_of(hyp.str()).front() == "n,xi,b,db");
}

TEST_CASE("verify exit codes and determinism") {
  RunConfig c;
  c.modes = 8;
  c.configs = 10;
  std::ostringstream first, second;
  CHECK(cmd_verify(c, first) == kExitPass);
  CHECK(cmd_verify(c, second) == kExitPass);
  CHECK(first.str() == second.str());
  const auto text = first.str();
  const auto doc = nlohmann::json::parse(text.substr(0, text.find("\nPASS") + 1));
  CHECK(doc.size() >= 12);

  c.tol = 1e-16;
  std::ostringstream strict;
  CHECK(cmd_verify(c, strict) == kExitFailure);
  CHECK(strict.str().find("FAIL ") != std::string::npos);
}

TEST_CASE("geodesic command on the zero field") {
  RunConfig c;
  c.field = "zero";
  c.modes = 4;
  std::ostringstream log;
  CHECK(cmd_geodesic(c, log) == kExitPass);
  const auto text = log.str();
  const auto doc = nlohmann::json::parse(text.substr(0, text.rfind("PASS")));
  CHECK(doc["max_rel_err"].get<double>() == 0.0);
}

TEST_CASE("parallel_for is deterministic and propagates the first failure") {
  std::vector<double> a(1000), b(1000);
  parallel_for(a.size(), [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); });
  parallel_for(b.size(), [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); });
  CHECK(a == b);
  std::atomic<int> ran{0};
  CHECK_THROWS_WITH(parallel_for(64,
                                 [&](std::size_t i) {
                                   ++ran;
                                   if (i == 7 || i == 40)
                                     throw std::runtime_error("task " + std::to_string(i));
                                 }),
                    "task 7");
  CHECK(thread_count() >= 1);
}

TEST_CASE("quadrature rules") {
  CHECK(numerics::simpson([](double x) { return x * x * x; }, 0.0, 2.0, 3) == Approx(4.0));
  CHECK(numerics::gauss_legendre([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK(numerics::periodic_trapezoid([](double y) { return std::cos(y) * std::cos(y); },
                                     2.0 * kPi, 16) == Approx(kPi).epsilon(1e-15));
  const auto d2 = numerics::fourier_second_derivative(32, 2.0 * kPi);
  const auto nodes = numerics::periodic_nodes(2.0 * kPi, 32);
  Eigen::VectorXd f(32);
  for (int j = 0; j < 32; ++j) f[j] = std::sin(3.0 * nodes[j]);
  const Eigen::VectorXd g = d2 * f;
  for (int j = 0; j < 32; ++j) CHECK(g[j] == Approx(-9.0 * f[j]).epsilon(1e-10).scale(1.0));
  CHECK(numerics::weighted_sinh_cosh(1e-300, 400.0) > 0.0);
  CHECK(std::isfinite(numerics::weighted_sinh_cosh(1e-300, 400.0)));
}
