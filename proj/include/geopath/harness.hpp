#pragma once

// Control-error probes and robustness sweeps.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geopath/evolve.hpp"
#include "geopath/paths.hpp"
#include "geopath/planner.hpp"
#include "geopath/synth.hpp"

namespace geopath {

struct ErrorModel {
  enum class Kind { AmplitudeScale, DetuningOffset, TimeWarp };
  Kind kind = Kind::AmplitudeScale;
  /// epsilon for AmplitudeScale, d for DetuningOffset; unused for TimeWarp.
  double magnitude = 0.0;
  RateProfile warp;
  /// Label for reports (the warp index for random warps).
  std::string label;

  static ErrorModel amplitude(double eps);
  static ErrorModel detuning(double d);
  static ErrorModel time_warp(RateProfile warp, std::string label = "warp");

  /// |magnitude| <= 0.2 and finite. Throws InvalidArgument.
  void validate() const;
  /// TimeWarp preserves the path; the others change it.
  bool path_preserving() const { return kind == Kind::TimeWarp; }
};

const char* to_string(ErrorModel::Kind kind);

/// AmplitudeScale multiplies the off-diagonal part by (1 + eps); DetuningOffset
/// adds d sigma_z / 2 (d R^z / 2 on two qubits); TimeWarp runs the same
/// schedule through a monotone clock, H'(t) = w'(t/tau) H(tau w(t/tau)).
HamiltonianSchedule apply_error(const HamiltonianSchedule& schedule, const ErrorModel& err);

/// `count` random monotone warps from a fixed seed: a sine series
/// u + sum a_k sin(k pi u)/(k pi) with sum|a_k| <= 0.9, optionally after a
/// power stage u^2 or u^3.
std::vector<RateProfile> random_warps(std::uint64_t seed, int count, int terms = 3);

/// Uniform double in [0, 1) from std::mt19937_64 using the top 53 bits, so
/// the sequence is the same on every platform (unlike the std distributions).
class SeededUniform {
 public:
  explicit SeededUniform(std::uint64_t seed) : rng_(seed) {}
  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

struct SweepRow {
  std::string family;
  double gamma = 0.0;
  Vec3 axis = Vec3::UnitZ();
  std::string error_kind;
  double magnitude = 0.0;
  std::string label;
  double fidelity = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  /// Every plan reached fidelity >= 1 - 1e-6 without error.
  bool sanity_ok = true;
};

/// Fidelity against the ideal gate for every (plan, error) pair; plan-major
/// order. A zero-error row per plan is always evaluated first.
SweepTable fidelity_sweep(const GateSpec& spec, const std::vector<PathPlan>& plans,
                          const std::vector<ErrorModel>& errors, const PropagatorConfig& cfg = {});

}  // namespace geopath
