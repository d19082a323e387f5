#pragma once

#include <stdexcept>

namespace netmoment {

// Open interval (lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) throw std::invalid_argument("Interval: requires lo < hi");
  }
  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo < x && x < hi; }
};

// Problem geometry: source interval S = (-s, s), measurement interval
// K = (-q, q) at height h above the source line.
struct Geometry {
  double s = 1.0;
  double q = 1.5;
  double h = 0.1;

  Geometry() = default;
  Geometry(double s_, double q_, double h_) : s(s_), q(q_), h(h_) { validate(); }

  void validate() const {
    if (!(s > 0.0) || !(q > 0.0) || !(h > 0.0))
      throw std::invalid_argument("Geometry: s, q, h must all be positive");
  }
  // The reference configuration additionally satisfies q > s > h.
  bool is_reference_shape() const { return q > s && s > h; }

  Interval source() const { return Interval(-s, s); }
  Interval measurement() const { return Interval(-q, q); }

  bool operator==(const Geometry& o) const { return s == o.s && q == o.q && h == o.h; }
};

inline Geometry reference_geometry() { return Geometry(1.0, 1.5, 0.1); }

}  // namespace netmoment
