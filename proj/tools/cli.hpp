#pragma once

// Batch front end shared by the chbend executable and the tests.

#include <iosfwd>
#include <string>
#include <vector>

#include "chbend/group_io.hpp"
#include "chbend/limit_set.hpp"

namespace chbend::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;

/// Runs one command line (argv[0] is the program name) and returns the exit
/// code. Diagnostics go to err, reports to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

struct VerifyOptions {
  int certificate_depth = 8;
  int collar_depth = 6;
  int dirichlet_depth = 8;
  unsigned long long seed = 1;
  int samples = 1000;
};

std::vector<Check> verify_group(const MarkedGroup& g, const VerifyOptions& opt);
std::vector<Check> verify_bent(const BentGroup& b, const VerifyOptions& opt);

/// Two panes, (Re xi, Im xi) and (Re xi, v), in a fixed 1000 x 500 viewBox.
/// extent <= 0 picks the 98th percentile of the Cygan norms.
std::string render_svg(const std::vector<CsvPoint>& points, double extent = 0.0);

}  // namespace chbend::cli
