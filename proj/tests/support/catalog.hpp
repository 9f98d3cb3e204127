#pragma once

#include <string>
#include <vector>

#include "warpcheck/check.hpp"
#include "warpcheck/spacetime.hpp"
#include "warpcheck/warped.hpp"

namespace warpcheck::support {

inline Point at(std::initializer_list<double> v) {
  Point p(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

inline VectorFieldSpec field(const Manifold& m, const std::vector<std::string>& components) {
  return VectorFieldSpec::parse(m.coords_ptr(), components);
}

inline SampleSpec spec(std::vector<Box> boxes, std::size_t count = 100, std::uint64_t seed = 0) {
  SampleSpec s;
  s.count = count;
  s.seed = seed;
  s.boxes = std::move(boxes);
  return s;
}

/// A chart with a sampling box, a few vector fields on it, and which of
/// those fields are Killing.
struct Sampled {
  Manifold manifold;
  std::vector<Box> boxes;
  std::vector<VectorFieldSpec> fields;
  std::vector<VectorFieldSpec> killing;
};

inline Manifold euclidean(const CoordNames& coords) {
  return Manifold::diagonal("euclidean", coords, std::vector<std::string>(coords.size(), "1"));
}

inline Manifold polar() {
  return Manifold::diagonal("polar", {"r", "theta"}, {"1", "r^2"}).with_constraint(parse("r", CoordNames{"r", "theta"}),
                                                                                  "r > 0");
}

inline Manifold sphere() {
  const CoordNames c{"theta", "phi"};
  return Manifold::diagonal("sphere", c, {"1", "sin(theta)^2"}).with_constraint(parse("sin(theta)", c), "sin > 0");
}

inline Manifold half_plane() {
  const CoordNames c{"x", "y"};
  return Manifold::diagonal("half_plane", c, {"1/y^2", "1/y^2"}).with_constraint(parse("y", c), "y > 0");
}

inline Manifold schwarzschild() {
  const CoordNames c{"t", "r", "theta", "phi"};
  return Manifold::diagonal("schwarzschild", c, {"-(1 - 2/r)", "1/(1 - 2/r)", "r^2", "r^2*sin(theta)^2"})
      .with_constraint(parse("r - 2", c), "r > 2");
}

inline Manifold skew() {
  return Manifold::parse("skew", {"u", "v"}, {{"2 + sin(u*v)", "v/3"}, {"", "1 + u^2"}});
}

inline Manifold cylinder() { return Manifold::diagonal("cylinder", {"theta", "z"}, {"1", "1"}); }

/// Six curved, flat, Lorentzian and non-diagonal charts with their Killing fields.
inline std::vector<Sampled> catalog_manifolds() {
  std::vector<Sampled> out;
  {
    Sampled s{euclidean({"x", "y"}), {{-2, 2}, {-2, 2}}, {}, {}};
    s.killing = {field(s.manifold, {"-y", "x"}), field(s.manifold, {"1", "0"}), field(s.manifold, {"0.5", "-3"})};
    s.fields = {field(s.manifold, {"x*y", "sin(x)"}), field(s.manifold, {"cbrt(x + 3)", "y^2"})};
    out.push_back(std::move(s));
  }
  {
    Sampled s{polar(), {{0.5, 3}, {-3, 3}}, {}, {}};
    s.killing = {field(s.manifold, {"0", "1"}), field(s.manifold, {"cos(theta)", "-sin(theta)/r"})};
    s.fields = {field(s.manifold, {"r*theta", "cos(r)"})};
    out.push_back(std::move(s));
  }
  {
    Sampled s{sphere(), {{0.3, 2.8}, {0, 6.2}}, {}, {}};
    s.killing = {field(s.manifold, {"0", "1"}), field(s.manifold, {"sin(phi)", "cos(theta)*cos(phi)/sin(theta)"}),
                 field(s.manifold, {"-cos(phi)", "cos(theta)*sin(phi)/sin(theta)"})};
    s.fields = {field(s.manifold, {"1", "0"}), field(s.manifold, {"theta*phi", "sin(phi)"})};
    out.push_back(std::move(s));
  }
  {
    Sampled s{half_plane(), {{-2, 2}, {0.5, 2}}, {}, {}};
    s.killing = {field(s.manifold, {"1", "0"}), field(s.manifold, {"x", "y"}),
                 field(s.manifold, {"x^2 - y^2", "2*x*y"})};
    s.fields = {field(s.manifold, {"x*y", "cos(x)"})};
    out.push_back(std::move(s));
  }
  {
    Sampled s{schwarzschild(), {{-1, 1}, {3, 10}, {0.5, 2.5}, {0, 6}}, {}, {}};
    s.killing = {field(s.manifold, {"1", "0", "0", "0"}), field(s.manifold, {"0", "0", "0", "1"})};
    s.fields = {field(s.manifold, {"r", "t", "0", "1"})};
    out.push_back(std::move(s));
  }
  {
    Sampled s{skew(), {{-1, 1}, {-1, 1}}, {}, {}};
    s.fields = {field(s.manifold, {"u*v", "1"}), field(s.manifold, {"exp(u)", "v^2"})};
    out.push_back(std::move(s));
  }
  {
    Sampled s{cylinder(), {{-3, 3}, {-1, 1}}, {}, {}};
    s.killing = {field(s.manifold, {"1", "0"}), field(s.manifold, {"0", "1"})};
    s.fields = {field(s.manifold, {"z", "theta^2"})};
    out.push_back(std::move(s));
  }
  return out;
}

/// A generic warped product with nonconstant f, non-diagonal factors and
/// curvature on both sides.
inline WarpedProduct generic_warped(int sign = +1) {
  const Manifold base = Manifold::parse("b", {"x", "y"}, {{"1 + x^2", "x*y/4"}, {"", "exp(y)"}});
  const Manifold fiber = Manifold::diagonal("f", {"s", "w"}, {"1 + w^2", "2 + sin(s)"});
  return WarpedProduct(base, fiber, parse("2 + sin(x)*y^2 + x/3", base.coords()), sign);
}

inline WarpedProduct polynomial_warped() {
  const Manifold base = Manifold::diagonal("line", {"x"}, {"1 + x^2"});
  const Manifold fiber = Manifold::parse("plane", {"s", "w"}, {{"1 + s^2", "s*w/5"}, {"", "1 + w^4"}});
  return WarpedProduct(base, fiber, parse("1 + x^2 + x^3/4", base.coords()));
}

inline WarpedProduct curved_warped() {
  const CoordNames bc{"theta", "phi"};
  const Manifold base = Manifold::diagonal("s2", bc, {"1", "sin(theta)^2"});
  const Manifold fiber = Manifold::diagonal("h", {"a", "b"}, {"1/b^2", "1/b^2"});
  return WarpedProduct(base, fiber, parse("2 + cos(theta) + sin(phi)/2", bc));
}

struct WarpedCase {
  WarpedProduct w;
  std::vector<Box> boxes;
  std::vector<SplitField> fields;
};

/// Three warped products, each with base-only, fiber-only and mixed fields
/// besides the coordinate fields.
inline std::vector<WarpedCase> warped_cases(int sign = +1) {
  std::vector<WarpedCase> out;
  {
    WarpedProduct w = generic_warped(sign);
    std::vector<SplitField> f = {
        split_field(w, field(w.base(), {"x*y + 1", "cos(x)"}), field(w.fiber(), {"s^2", "w - s"})),
        base_only(w, field(w.base(), {"exp(x*y)", "1"})),
        fiber_only(w, field(w.fiber(), {"w", "cos(s)"})),
        split_field(w, field(w.base(), {"y", "x^2"}), field(w.fiber(), {"1", "s*w"})),
    };
    out.push_back({w, {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}, f});
  }
  {
    WarpedProduct w = polynomial_warped();
    std::vector<SplitField> f = {
        split_field(w, field(w.base(), {"x^2 - 1"}), field(w.fiber(), {"s*w", "1 + s"})),
        base_only(w, field(w.base(), {"x^3"})),
        fiber_only(w, field(w.fiber(), {"w^2", "s"})),
    };
    out.push_back({w, {{-1, 1}, {-1, 1}, {-1, 1}}, f});
  }
  {
    WarpedProduct w = curved_warped();
    std::vector<SplitField> f = {
        split_field(w, field(w.base(), {"sin(phi)", "theta"}), field(w.fiber(), {"a*b", "b^2"})),
        base_only(w, field(w.base(), {"cos(theta)*phi", "1"})),
        fiber_only(w, field(w.fiber(), {"1", "a"})),
    };
    out.push_back({w, {{0.4, 2.7}, {0, 6}, {-1, 1}, {0.5, 2}}, f});
  }
  return out;
}

}  // namespace warpcheck::support
