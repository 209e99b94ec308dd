#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "limsup/rng.hpp"
#include "limsup/spaces.hpp"
#include "limsup/svf.hpp"

namespace limsup {

// Every pair at distance >= r.
bool is_sparse(const RegularSpace& space, std::span<const Point> points, double r);

// Largest distance from a probe of B(x0, R) (net at resolution r/4) to the
// set; the set is maximal on that net when the result is < r.
double max_probe_gap(const RegularSpace& space, std::span<const Point> points, const Point& x0, double radius,
                     double r);

// A maximal r-sparse subset of the closed ball B(x0, R). With an rng the
// points of a probe net are first offered in random order, then a sweep from
// the left edge adds every support point the set leaves uncovered; without
// one only the sweep runs and the result is deterministic.
// Requires 0 < r <= 2R, R <= 2; DomainError otherwise or when r is below the
// space's resolvable scale.
std::vector<Point> max_sparse_subset(const RegularSpace& space, const Point& x0, double radius, double r,
                                     RandomStream* rng = nullptr);

struct SparseBounds {
  double lower;  // c^-2 (R/r)^s
  double upper;  // 4^s c^2 (R/r)^s
};
SparseBounds sparse_count_bounds(const RegularSpace& space, double radius, double r);

// Cover of a rectangle by max-metric balls of radius r. Elements are the
// Cartesian product of the per-factor center lists.
struct CoverReport {
  std::vector<std::vector<Point>> factor_centers;
  double radius = 0.0;
  double bound = 0.0;  // cardinality bound M
  double count = 0.0;  // product of list sizes
  std::string target;

  // Calls f(std::span<const Point>) for each element center, row-major.
  template <class F>
  void for_each_center(F&& f) const {
    const std::size_t d = factor_centers.size();
    for (const auto& c : factor_centers) {
      if (c.empty()) return;
    }
    std::vector<std::size_t> idx(d, 0);
    std::vector<Point> p(d);
    for (;;) {
      for (std::size_t i = 0; i < d; ++i) p[i] = factor_centers[i][idx[i]];
      f(std::span<const Point>(p));
      std::size_t i = d;
      while (i > 0) {
        --i;
        if (++idx[i] < factor_centers[i].size()) break;
        idx[i] = 0;
        if (i == 0) return;
      }
      if (d == 0) return;
    }
  }
};

// B(x, R) by balls B(y, r): bound 4^s c^2 (R/r)^s. Requires 0 < r <= 2R.
CoverReport cover_ball(const RegularSpace& space, const Point& x, double radius, double r);

// Rectangle R(x, radii) by balls of radius r; factors with r_i <= r keep their
// single center. bound = prod_{i : r_i > r} 4^(s_i) c_i^2 (r_i / r)^(s_i).
CoverReport cover_rectangle(const ProductSpace& space, std::span<const Point> x, const RadiusTuple& radii, double r);

struct CoverCheck {
  bool covered = false;
  std::size_t probes = 0;
  std::size_t uncovered = 0;
  double worst_gap = 0.0;  // max over probes of the distance to the nearest center
};

// Probe-net containment check of a cover against its target rectangle. The
// cover is a product, so each factor is checked independently.
CoverCheck verify_cover(const ProductSpace& space, const CoverReport& cover, std::span<const Point> x,
                        std::span<const double> radii);

}  // namespace limsup
