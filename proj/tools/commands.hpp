#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "report.hpp"

namespace plap::cli {

/// Streams for text mode: `out` carries the primary output (text or CSV),
/// `log` carries human-readable summaries.
struct Sinks {
  std::ostream& out;
  std::ostream& log;
};

struct BubbleArgs {
  int n = 0;
  double p = 0.0;
  double lambda = 1.0;
  /// Relative amplitude of a sin(r) perturbation of the bubble; 0 checks the bubble itself.
  double perturb = 0.0;
};

struct VerifyBubbleArgs {
  BubbleArgs bubble;
  int samples = 200;
  std::uint64_t seed = 0;
};

struct ClassifyArgs {
  int n = 0;
  double p = 0.0;
  std::optional<double> alpha;
  std::optional<double> energy_exponent;
};

struct EnergyScanArgs {
  BubbleArgs bubble;
  double R_min = 10.0;
  double R_max = 1e4;
  int per_decade = 8;
};

struct GradCheckArgs {
  BubbleArgs bubble;
  std::optional<double> epsilon;
  double R_min = 1.0;
  double R_max = 1e3;
  int per_decade = 4;
};

struct TensorCheckArgs {
  BubbleArgs bubble;
  int samples = 200;
  std::uint64_t seed = 0;
};

struct KeyEstimateArgs {
  BubbleArgs bubble;
  double R = 2.0;
  double delta = 0.2;
  double l = 2.0;
};

struct RadialSolveArgs {
  int n = 0;
  double p = 0.0;
  std::optional<double> u0;
  double lambda = 1.0;
  double r_max = 20.0;
  double tol = 1e-10;
};

struct RasterArgs {
  int n = 0;
  std::vector<double> alpha;
  std::optional<double> energy_exponent;
  int cells = 50;
};

RunReport verify_bubble(const VerifyBubbleArgs& args, Sinks sinks);
RunReport classify(const ClassifyArgs& args, Sinks sinks);
RunReport energy_scan(const EnergyScanArgs& args, Sinks sinks);
RunReport grad_check(const GradCheckArgs& args, Sinks sinks);
RunReport tensor_check(const TensorCheckArgs& args, Sinks sinks);
RunReport key_estimate(const KeyEstimateArgs& args, Sinks sinks);
RunReport radial_solve(const RadialSolveArgs& args, Sinks sinks);
RunReport raster(const RasterArgs& args, Sinks sinks);

}  // namespace plap::cli
