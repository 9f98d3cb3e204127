#include "warpcheck/check.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "warpcheck/errors.hpp"

namespace warpcheck {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::hypotheses_not_met: return "hypotheses-not-met";
    case Status::informational: return "informational";
  }
  return "?";
}

void validate(const SampleSpec& spec, Index dim) {
  if (spec.count < 1) throw SamplingDomainError("sample count must be at least 1");
  if (static_cast<Index>(spec.boxes.size()) != dim)
    throw SamplingDomainError("sample spec has " + std::to_string(spec.boxes.size()) + " boxes for " +
                              std::to_string(dim) + " coordinates");
  for (const Box& b : spec.boxes)
    if (!std::isfinite(b.low) || !std::isfinite(b.high) || b.low > b.high)
      throw SamplingDomainError("sample box [" + std::to_string(b.low) + ", " + std::to_string(b.high) +
                                "] is not a finite interval");
}

Point sample_point(const SampleSpec& spec, std::size_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32)};
  std::mt19937_64 rng(seq);
  Point p(static_cast<Index>(spec.boxes.size()));
  for (std::size_t k = 0; k < spec.boxes.size(); ++k) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const Box& b = spec.boxes[k];
    p(static_cast<Index>(k)) = b.low == b.high ? b.low : b.low + (b.high - b.low) * u;
  }
  return p;
}

std::vector<Point> sample_points(const SampleSpec& spec) {
  validate(spec, static_cast<Index>(spec.boxes.size()));
  std::vector<Point> points;
  points.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) points.push_back(sample_point(spec, i));
  return points;
}

std::vector<Point> sample_points(const SampleSpec& spec, const Manifold& m) {
  validate(spec, m.dim());
  std::vector<Point> points = sample_points(spec);
  for (const Point& p : points) {
    try {
      m.check_domain(p);
    } catch (const DomainError& e) {
      throw SamplingDomainError(std::string("sample box leaves the domain: ") + e.what());
    }
  }
  return points;
}

SampleSpec sub_spec(const SampleSpec& spec, Index first, Index count) {
  SampleSpec out = spec;
  out.boxes.assign(spec.boxes.begin() + first, spec.boxes.begin() + first + count);
  return out;
}

void Accumulator::add(const Point& p, double residual, double scale) {
  const double r = std::isnan(residual) ? INFINITY : std::fabs(residual);
  if (empty_ || r > max_) {
    max_ = r;
    witness_ = p;
  }
  if (!std::isnan(scale)) scale_ = std::max(scale_, std::fabs(scale));
  empty_ = false;
}

CheckResult Accumulator::finish(std::string name, const Tolerance& tol, const CoordNames& coords) const {
  CheckResult r;
  r.name = std::move(name);
  r.max_residual = max_;
  r.scale = scale_;
  r.tol = tol;
  r.witness = witness_;
  r.coords = coords;
  r.status = r.within_tolerance() ? Status::pass : Status::fail;
  return r;
}

CheckResult implication(std::string name, std::vector<CheckResult> premises,
                        const std::function<CheckResult()>& conclusion) {
  const bool met = std::all_of(premises.begin(), premises.end(), [](const CheckResult& c) {
    return c.status == Status::pass;
  });
  CheckResult out;
  if (met) {
    out = conclusion();
  } else {
    out.status = Status::hypotheses_not_met;
    for (const auto& p : premises)
      if (p.status != Status::pass) {
        out.note = "premise '" + p.name + "' not met";
        out.max_residual = p.max_residual;
        out.scale = p.scale;
        out.tol = p.tol;
        out.witness = p.witness;
        out.coords = p.coords;
        break;
      }
  }
  out.name = std::move(name);
  std::vector<CheckResult> parts = std::move(premises);
  for (auto& p : out.parts) parts.push_back(std::move(p));
  out.parts = std::move(parts);
  return out;
}

CheckResult sweep(std::string name, const std::vector<Point>& points, const CoordNames& coords,
                  const Tolerance& tol, const std::function<Sample(const Point&)>& fn) {
  const std::vector<Sample> samples = map_points<Sample>(points, fn);
  Accumulator acc;
  for (std::size_t i = 0; i < points.size(); ++i) acc.add(points[i], samples[i].residual, samples[i].scale);
  return acc.finish(std::move(name), tol, coords);
}

namespace {
thread_local bool inside_parallel = false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (inside_parallel || workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    inside_parallel = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    inside_parallel = false;
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace warpcheck
