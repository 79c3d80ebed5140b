#pragma once

// Line-oriented system definition files.
//
//   # comment
//   [system]
//   m = 2
//   name = coupled
//   seed = 0
//   [lagrangian]
//   z1*w1 + 2*z2*w2            (continuation lines are concatenated)
//   [constraints]
//   c1: 1, 0, -z1, 0           (2m coefficients ordered dz1..dzm, dw1..dwm)
//   [initial]
//   z1 = 0.5+0.25i
//   w1 = -0.1i
//   [integrator]
//   t1 = 10
//   dt = 1e-3
//   [tolerances]
//   energy_drift = 1e-6

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kahler/dynamics.hpp"

namespace kahler {

struct ConstraintSpec {
  std::string name;
  std::vector<Expr> coefficients;
  int line = 0;
};

struct SystemFile {
  std::string source;
  int m = 0;
  std::string name;
  std::optional<std::uint64_t> seed;
  Expr lagrangian;
  std::string lagrangian_text;
  std::vector<ConstraintSpec> constraints;
  std::vector<cplx> initial;  // packed (z1..zm, w1..wm)
  std::optional<double> t1;
  std::optional<double> dt;
  std::map<std::string, double> tolerances;

  /// Throws InvalidArgument when the system violates LagrangianSystem rules.
  LagrangianSystem build() const;
  PhaseState initial_state() const;
};

/// Throws SystemFileError with a line-anchored message.
SystemFile parse_system_file(std::string_view text, const std::string& source = "<input>");
SystemFile load_system_file(const std::filesystem::path& path);

}  // namespace kahler
