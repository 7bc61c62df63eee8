#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "dform/vec3.hpp"

namespace dform::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitGateFailed = 1;
inline constexpr int kExitUsage = 2;

/// Sample count of the hull cross-check run by --verify and converge.
inline constexpr std::size_t kOracleSamples = 200000;

/// Runs one command. `args` excludes the program name, e.g.
/// {"volume", "saddle", "--n", "2000", "--verify"}.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Reads a polyline file: one "x y z" triple per line, '#' starts a comment,
/// blank lines are skipped. A repeated closing point is dropped.
std::vector<Vec3> read_polyline(const std::string& path);

/// Probe generator: mt19937_64 seeded with `seed`, each coordinate mapped
/// from the top 53 bits of one draw to [0, 1).
class ProbeRng {
 public:
  explicit ProbeRng(std::uint64_t seed);
  double next_unit();

 private:
  std::mt19937_64 engine_;
};

}  // namespace dform::cli
