#pragma once

// Candidate closed paths for a target rotation, built in a chart whose north
// pole is the gate axis, with time estimates under an amplitude cap.

#include <string>
#include <vector>

#include "geopath/evolve.hpp"
#include "geopath/paths.hpp"
#include "geopath/qcore.hpp"

namespace geopath {

enum class PlanFamily { OrangeSlice, ThreeSegment, MinCircle };

const char* to_string(PlanFamily family);

struct PathPlan {
  explicit PathPlan(ParamCurve c) : curve(std::move(c)) {}

  ParamCurve curve;
  PlanFamily family = PlanFamily::OrangeSlice;
  double theta_mid = 0.0;  // ThreeSegment only
  double predicted_gamma = 0.0;
  double length_spherical = 0.0;
  double length_paramsum = 0.0;
  /// Sum of envelope areas over amp_cap.
  double time_estimate = 0.0;
  double amp_cap = 1.0;
  /// Signed areas of the non-pole-turn segments; empty when an envelope is
  /// not of fixed phase (the circle).
  std::vector<double> pulse_areas;
  std::vector<double> envelope_areas;
};

/// Each segment runs at the cap for |envelope area| / cap; pole turns, which
/// need no drive, get `pole_turn_share` of the total.
struct PlanOptions {
  double amp_cap = 1.0;
  double pole_turn_share = 1e-3;
};

/// Meridian from the axis to its antipode, a south-pole turn of gamma, and
/// the meridian back.
PathPlan plan_orange_slice(const GateSpec& spec, const PlanOptions& opts = {});

/// Meridian down to theta_mid, a latitude arc of 2 gamma / (1 - cos theta_mid)
/// and the meridian back. Throws SweepTooLarge when the arc would exceed 2 pi
/// and InvalidArgument unless 0 < theta_mid <= pi.
PathPlan plan_three_segment(const GateSpec& spec, double theta_mid, const PlanOptions& opts = {});

PathPlan plan_min_circle(const GateSpec& spec, const PlanOptions& opts = {});

/// Sum of |envelope areas| over amp_cap. Throws InvalidArgument if amp_cap <= 0.
double time_estimate(const PathPlan& plan, double amp_cap);

struct PlanRow {
  PathPlan plan;
  EvolutionReport report;
};

struct PlanComparison {
  /// Verified plans sorted by time estimate (input order breaks ties).
  std::vector<PlanRow> rows;
  /// Human-readable reasons for candidates that were dropped.
  std::vector<std::string> skipped;
};

/// Builds every family (one ThreeSegment per grid value), verifies each
/// through run_geometric_gate, keeps those with fidelity >= min_fidelity.
/// Candidates are simulated concurrently; the result does not depend on
/// scheduling.
PlanComparison compare_plans(const GateSpec& spec, const std::vector<double>& theta_mid_grid,
                             double amp_cap, const PropagatorConfig& cfg = {},
                             double min_fidelity = 1.0 - 1e-6);

}  // namespace geopath
