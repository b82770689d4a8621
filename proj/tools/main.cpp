#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "plap/error.hpp"

namespace {

using namespace plap::cli;

void add_bubble(CLI::App* cmd, BubbleArgs& a, bool perturb = true) {
  cmd->add_option("--n", a.n, "dimension")->required();
  cmd->add_option("--p", a.p, "exponent, 1 < p < n")->required();
  cmd->add_option("--lambda", a.lambda, "bubble scale")->capture_default_str();
  if (perturb) {
    cmd->add_option("--perturb", a.perturb, "relative sin(r/lambda) perturbation")
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for the critical p-Laplace equation"};
  app.require_subcommand(1);
  bool json = false;

  VerifyBubbleArgs verify;
  ClassifyArgs classify;
  EnergyScanArgs energy;
  GradCheckArgs grad;
  TensorCheckArgs tensor;
  KeyEstimateArgs key;
  RadialSolveArgs radial;
  RasterArgs raster;

  std::function<RunReport(Sinks)> run;
  std::string name;
  auto command = [&](const char* cmd_name, const char* help, std::function<RunReport(Sinks)> fn) {
    CLI::App* cmd = app.add_subcommand(cmd_name, help);
    cmd->add_flag("--json", json, "emit a JSON report");
    cmd->callback([&, fn, cmd_name] {
      run = fn;
      name = cmd_name;
    });
    return cmd;
  };

  {
    auto* cmd = command("verify-bubble", "residual, tensor and profile checks on a bubble",
                        [&](Sinks s) { return verify_bubble(verify, s); });
    add_bubble(cmd, verify.bubble);
    cmd->add_option("--samples", verify.samples, "random points")->capture_default_str();
    cmd->add_option("--seed", verify.seed, "random seed")->capture_default_str();
  }
  {
    auto* cmd = command("classify", "which classification case covers (n, p, alpha, k)",
                        [&](Sinks s) { return plap::cli::classify(classify, s); });
    cmd->add_option("--n", classify.n, "dimension")->required();
    cmd->add_option("--p", classify.p, "exponent, 1 < p < n")->required();
    cmd->add_option("--alpha", classify.alpha, "growth exponent: u <= C |x|^alpha");
    cmd->add_option("--energy-exponent", classify.energy_exponent, "annulus energy O(R^k)");
  }
  {
    auto* cmd = command("energy-scan", "annulus energies and their growth exponent",
                        [&](Sinks s) { return energy_scan(energy, s); });
    add_bubble(cmd, energy.bubble);
    cmd->add_option("--R-min", energy.R_min)->capture_default_str();
    cmd->add_option("--R-max", energy.R_max)->capture_default_str();
    cmd->add_option("--per-decade", energy.per_decade)->capture_default_str();
  }
  {
    auto* cmd = command("grad-check", "sharp gradient estimate along R and rays",
                        [&](Sinks s) { return grad_check(grad, s); });
    add_bubble(cmd, grad.bubble);
    cmd->add_option("--eps", grad.epsilon, "estimate exponent, default (p-1)/(4(n-p))");
    cmd->add_option("--R-min", grad.R_min)->capture_default_str();
    cmd->add_option("--R-max", grad.R_max)->capture_default_str();
    cmd->add_option("--per-decade", grad.per_decade)->capture_default_str();
  }
  {
    auto* cmd = command("tensor-check", "trace-free part of the rigidity tensor",
                        [&](Sinks s) { return tensor_check(tensor, s); });
    add_bubble(cmd, tensor.bubble);
    cmd->add_option("--samples", tensor.samples, "random points")->capture_default_str();
    cmd->add_option("--seed", tensor.seed, "random seed")->capture_default_str();
  }
  {
    auto* cmd = command("key-estimate", "both sides of the integral key estimate",
                        [&](Sinks s) { return key_estimate(key, s); });
    add_bubble(cmd, key.bubble);
    cmd->add_option("--R", key.R, "cutoff radius")->capture_default_str();
    cmd->add_option("--delta", key.delta, "cutoff exponent")->capture_default_str();
    cmd->add_option("--l", key.l, "cutoff power")->capture_default_str();
  }
  {
    auto* cmd = command("radial-solve", "integrate the radial ODE from u(0) = u0",
                        [&](Sinks s) { return radial_solve(radial, s); });
    cmd->add_option("--n", radial.n, "dimension")->required();
    cmd->add_option("--p", radial.p, "exponent, 1 < p < n")->required();
    cmd->add_option("--u0", radial.u0, "center value, default the bubble peak");
    cmd->add_option("--lambda", radial.lambda, "bubble scale when --u0 is absent")
        ->capture_default_str();
    cmd->add_option("--r-max", radial.r_max)->capture_default_str();
    cmd->add_option("--tol", radial.tol)->capture_default_str();
  }
  {
    auto* cmd = command("raster", "classification over a p-grid",
                        [&](Sinks s) { return plap::cli::raster(raster, s); });
    cmd->add_option("--n", raster.n, "dimension")->required();
    cmd->add_option("--alpha", raster.alpha, "growth exponents (repeatable)");
    cmd->add_option("--energy-exponent", raster.energy_exponent);
    cmd->add_option("--cells", raster.cells, "p-cells over (1, n)")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const bool json_out = json || name == "classify";
  std::ostringstream discard;
  const Sinks sinks = json_out ? Sinks{discard, discard} : Sinks{std::cout, std::cerr};
  try {
    const RunReport report = run(sinks);
    if (json_out) std::cout << report.to_json().dump(2) << '\n';
    return report.exit_code();
  } catch (const UsageError& e) {
    std::cerr << name << ": " << e.what() << '\n';
    return 2;
  } catch (const plap::Error& e) {
    if (json_out) {
      const Json error{{"schema_version", kSchemaVersion},
                       {"command", name},
                       {"status", "fail"},
                       {"error", {{"code", std::string(plap::to_string(e.code()))},
                                  {"message", e.what()}}}};
      std::cout << error.dump(2) << '\n';
    } else {
      std::cerr << name << ": numerical failure (" << plap::to_string(e.code()) << "): " << e.what()
                << '\n';
    }
    return 1;
  }
}
