#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "warpcheck/manifold.hpp"

namespace warpcheck {

struct Box {
  double low = 0.0;
  double high = 0.0;
};

/// Points are drawn uniformly from the product of boxes.  Point i depends
/// only on (seed, i), so sampling order and threading never change them.
struct SampleSpec {
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::vector<Box> boxes;
};

struct Tolerance {
  double atol = 1e-10;
  double rtol = 1e-8;

  double bound(double scale) const { return atol + rtol * scale; }
};

enum class Status {
  pass,
  fail,
  /// An implication whose premise did not hold at the samples.
  hypotheses_not_met,
  /// Computed for information only, e.g. an identity whose premise failed.
  informational,
};

std::string_view to_string(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::pass;
  double max_residual = 0.0;
  double scale = 0.0;
  Tolerance tol;
  /// Sample with the largest residual, coordinates named by `coords`.
  Point witness;
  std::vector<std::string> coords;
  std::string note;
  /// Sub-checks: hypotheses and branches of a theorem check.
  std::vector<CheckResult> parts;

  bool ok() const { return status != Status::fail; }
  bool within_tolerance() const { return max_residual <= tol.bound(scale); }
};

Point sample_point(const SampleSpec& spec, std::size_t i);
/// Validates the spec, draws all points and checks them against the domain.
std::vector<Point> sample_points(const SampleSpec& spec, const Manifold& m);
std::vector<Point> sample_points(const SampleSpec& spec);
void validate(const SampleSpec& spec, Index dim);

/// Same spec restricted to coordinates [first, first + count).
SampleSpec sub_spec(const SampleSpec& spec, Index first, Index count);

/// Running maximum of a residual over samples.  The first sample attaining
/// the maximum is the witness; NaN counts as infinitely bad.
class Accumulator {
 public:
  void add(const Point& p, double residual, double scale);
  /// pass/fail against `tol`.
  CheckResult finish(std::string name, const Tolerance& tol, const CoordNames& coords) const;

  double max_residual() const { return max_; }
  double scale() const { return scale_; }
  bool empty() const { return empty_; }

 private:
  bool empty_ = true;
  double max_ = 0.0;
  double scale_ = 0.0;
  Point witness_;
};

/// Combine a theorem's premise checks with its conclusion.  Any failed or
/// unmet premise yields hypotheses_not_met and the conclusion is not run.
CheckResult implication(std::string name, std::vector<CheckResult> premises,
                        const std::function<CheckResult()>& conclusion);

/// Residual and scale at one sample.
struct Sample {
  double residual = 0.0;
  double scale = 0.0;
};

/// Evaluate a per-point residual over all points and accumulate it.
CheckResult sweep(std::string name, const std::vector<Point>& points, const CoordNames& coords,
                  const Tolerance& tol, const std::function<Sample(const Point&)>& fn);

/// Evaluate fn at every point, in parallel, returning results in point order.
template <class T>
std::vector<T> map_points(const std::vector<Point>& points, const std::function<T(const Point&)>& fn);

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

template <class T>
std::vector<T> map_points(const std::vector<Point>& points, const std::function<T(const Point&)>& fn) {
  std::vector<T> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = fn(points[i]); });
  return out;
}

}  // namespace warpcheck
