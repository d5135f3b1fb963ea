#include "geopath/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "geopath/error.hpp"
#include "geopath/parallel.hpp"
#include "geopath/synth.hpp"

namespace geopath {

const char* to_string(PlanFamily family) {
  switch (family) {
    case PlanFamily::OrangeSlice:
      return "orange_slice";
    case PlanFamily::ThreeSegment:
      return "three_segment";
    case PlanFamily::MinCircle:
      return "min_circle";
  }
  return "unknown";
}

namespace {

void check_cap(double cap) {
  if (!(std::isfinite(cap) && cap > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "amplitude cap must be positive");
  }
}

// Rescales segment fractions so every driven segment runs at the cap.
ParamCurve timed_curve(const std::vector<Segment::Shape>& shapes, const PlanOptions& opts,
                       const Vec3& pole) {
  std::vector<double> durations;
  double driven = 0.0;
  for (const auto& shape : shapes) {
    const double d = envelope_area(Segment(shape, 1.0)) / opts.amp_cap;
    durations.push_back(d);
    driven += d;
  }
  double total = 0.0;
  if (driven > 0.0) {
    for (double& d : durations) {
      d = std::max(d, opts.pole_turn_share * driven);
      total += d;
    }
  } else {
    std::fill(durations.begin(), durations.end(), 1.0);
    total = static_cast<double>(durations.size());
  }
  std::vector<Segment> segs;
  double used = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    double f = durations[i] / total;
    if (i + 1 == shapes.size()) f = 1.0 - used;
    used += f;
    segs.emplace_back(shapes[i], f);
  }
  const double tau = driven > 0.0 ? total : 1.0;
  return ParamCurve(std::move(segs), tau, RateProfile{}, pole);
}

PathPlan finish(ParamCurve curve, PlanFamily family, const GateSpec& spec,
                const PlanOptions& opts) {
  PathPlan plan(std::move(curve));
  plan.family = family;
  plan.predicted_gamma = spec.half_angle();
  plan.length_spherical = path_length(plan.curve, LengthConvention::Spherical);
  plan.length_paramsum = path_length(plan.curve, LengthConvention::ParamSum);
  plan.amp_cap = opts.amp_cap;
  for (const Segment& seg : plan.curve.segments()) {
    if (!seg.is_pole_turn()) plan.envelope_areas.push_back(envelope_area(seg));
  }
  try {
    plan.pulse_areas = pulse_areas(plan.curve);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ComplexEnvelope) throw;
    plan.pulse_areas.clear();
  }
  plan.time_estimate = time_estimate(plan, opts.amp_cap);
  const double gamma = solid_angle_phase(plan.curve);
  if (std::abs(gamma - plan.predicted_gamma) > 1e-9) {
    std::ostringstream msg;
    msg << to_string(family) << " plan encloses " << gamma << ", expected "
        << plan.predicted_gamma;
    throw Error(ErrorKind::Domain, msg.str());
  }
  return plan;
}

}  // namespace

PathPlan plan_orange_slice(const GateSpec& spec, const PlanOptions& opts) {
  check_cap(opts.amp_cap);
  const double g = spec.half_angle();
  std::vector<Segment::Shape> shapes{Meridian{0.0, 0.0, kPi}, LatitudeArc{kPi, 0.0, g},
                                     Meridian{g, kPi, 0.0}};
  return finish(timed_curve(shapes, opts, spec.axis()), PlanFamily::OrangeSlice, spec, opts);
}

PathPlan plan_three_segment(const GateSpec& spec, double theta_mid, const PlanOptions& opts) {
  check_cap(opts.amp_cap);
  if (!(std::isfinite(theta_mid) && theta_mid > 0.0 && theta_mid <= kPi)) {
    throw Error(ErrorKind::InvalidArgument, "theta_mid must lie in (0, pi]");
  }
  const double g = spec.half_angle();
  const double sweep = 2.0 * g / (1.0 - std::cos(theta_mid));
  if (std::abs(sweep) > 2.0 * kPi + 1e-12) {
    std::ostringstream msg;
    msg << "latitude arc would sweep " << sweep << " > 2 pi; need |gamma| <= pi (1 - cos theta_mid)";
    throw Error(ErrorKind::SweepTooLarge, msg.str());
  }
  std::vector<Segment::Shape> shapes{Meridian{0.0, 0.0, theta_mid},
                                     LatitudeArc{theta_mid, 0.0, sweep},
                                     Meridian{sweep, theta_mid, 0.0}};
  PathPlan plan =
      finish(timed_curve(shapes, opts, spec.axis()), PlanFamily::ThreeSegment, spec, opts);
  plan.theta_mid = theta_mid;
  return plan;
}

PathPlan plan_min_circle(const GateSpec& spec, const PlanOptions& opts) {
  check_cap(opts.amp_cap);
  const ParamCurve base = min_circle_curve(spec);
  std::vector<Segment::Shape> shapes;
  for (const Segment& seg : base.segments()) shapes.push_back(seg.shape());
  return finish(timed_curve(shapes, opts, spec.axis()), PlanFamily::MinCircle, spec, opts);
}

double time_estimate(const PathPlan& plan, double amp_cap) {
  check_cap(amp_cap);
  double total = 0.0;
  for (double a : plan.envelope_areas) total += std::abs(a);
  return total / amp_cap;
}

PlanComparison compare_plans(const GateSpec& spec, const std::vector<double>& theta_mid_grid,
                             double amp_cap, const PropagatorConfig& cfg, double min_fidelity) {
  if (theta_mid_grid.empty()) throw Error(ErrorKind::InvalidArgument, "theta_mid grid is empty");
  PlanOptions opts;
  opts.amp_cap = amp_cap;
  PlanComparison out;
  std::vector<PathPlan> candidates;
  candidates.push_back(plan_orange_slice(spec, opts));
  for (double theta_mid : theta_mid_grid) {
    try {
      candidates.push_back(plan_three_segment(spec, theta_mid, opts));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SweepTooLarge) throw;
      std::ostringstream msg;
      msg << "three_segment theta_mid=" << theta_mid << ": " << e.what();
      out.skipped.push_back(msg.str());
    }
  }
  candidates.push_back(plan_min_circle(spec, opts));

  std::vector<std::optional<EvolutionReport>> reports(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t i) {
    reports[i] = run_geometric_gate(candidates[i].curve, GateKind::OneQubit, spec, cfg);
  });

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (reports[i]->fidelity >= min_fidelity) {
      order.push_back(i);
    } else {
      std::ostringstream msg;
      msg << to_string(candidates[i].family) << " failed verification (fidelity "
          << reports[i]->fidelity << ")";
      out.skipped.push_back(msg.str());
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].time_estimate < candidates[b].time_estimate;
  });
  for (std::size_t i : order) out.rows.push_back({candidates[i], *reports[i]});
  return out;
}

}  // namespace geopath
