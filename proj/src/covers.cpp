#include "limsup/covers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "limsup/errors.hpp"
#include "limsup/format.hpp"

namespace limsup {

namespace {

constexpr double kMaxCoverPoints = 4e6;

// Smallest cursor step that still moves the successor: interval and circle
// points are doubles, Cantor positions long doubles.
long double nudge(const RegularSpace& space, long double y) {
  const int bits = space.kind() == SpaceKind::cantor ? 60 : 51;
  return y + std::max(std::fabs(y), 1.0L) * std::ldexp(1.0L, -bits);
}

long double wrap_offset(long double d) {
  d = std::fmod(d, 1.0L);
  if (d < 0.0L) d += 1.0L;
  return d;
}

void check_scales(const RegularSpace& space, double radius, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cover radius must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive");
  if (r > 2.0 * radius) throw DomainError("need r <= 2R");
  if (radius > 2.0) throw DomainError("ball radius beyond the regularity range (R <= 2)");
  if (r < 64.0 * space.resolution_floor()) throw DomainError("scale " + format_double(r) + " is below the resolvable digit depth");
  const double expected = sparse_count_bounds(space, radius, r).upper;
  if (expected > kMaxCoverPoints) throw DomainError("cover would need about " + format_double(expected) + " points");
}

// Sweep reach past a member. Cantor distances are rounded to double while
// positions stay long double, so start a hair short of a + r there and let
// the distance test decide the boundary case.
long double reach(const RegularSpace& space, long double a, double r) {
  const long double rl = r;
  return space.kind() == SpaceKind::cantor ? a + rl * (1.0L - 1e-15L) : a + rl;
}

// Points of a one-dimensional space keyed by an unwrapped line parameter.
// Circle keys live in [base, base + 1).
class LineIndex {
 public:
  LineIndex(const RegularSpace& space, long double base) : space_(space), base_(base) {}

  long double key(const Point& p) const {
    if (space_.periodic()) return base_ + wrap_offset(space_.position(p) - base_);
    return space_.position(p);
  }

  void insert(const Point& p) { points_.emplace(key(p), p); }

  // Largest a_u + r over members a with d(a, p) < r, where a_u is a's
  // parameter in the frame of pu; -inf when nothing blocks p.
  long double frontier(const Point& p, long double pu, double r) const {
    long double best = -INFINITY;
    const long double slack = static_cast<long double>(r) * (1.0L + 1e-9L) + 1e-15L;
    const int shifts = space_.periodic() ? 1 : 0;
    for (int sh = -shifts; sh <= shifts; ++sh) {
      const long double center = pu - sh;
      for (auto it = points_.lower_bound(center - slack); it != points_.end() && it->first <= center + slack; ++it) {
        if (space_.distance(it->second, p) < r) best = std::max(best, reach(space_, it->first + sh, r));
      }
    }
    return best;
  }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(points_.size());
    for (const auto& [k, p] : points_) out.push_back(p);
    return out;
  }

 private:
  const RegularSpace& space_;
  long double base_;
  std::multimap<long double, Point> points_;
};

// Nearest-center distance by neighbours in line order.
class NearestIndex {
 public:
  NearestIndex(const RegularSpace& space, std::span<const Point> pts) : space_(space), pts_(pts.begin(), pts.end()) {
    std::sort(pts_.begin(), pts_.end(),
              [&](const Point& a, const Point& b) { return space_.position(a) < space_.position(b); });
  }

  double nearest(const Point& q) const {
    if (pts_.empty()) return INFINITY;
    const long double pq = space_.position(q);
    auto it = std::lower_bound(pts_.begin(), pts_.end(), pq,
                               [&](const Point& a, long double v) { return space_.position(a) < v; });
    double best = INFINITY;
    auto consider = [&](std::size_t i) { best = std::min(best, space_.distance(pts_[i], q)); };
    const auto pos = static_cast<std::size_t>(it - pts_.begin());
    for (std::size_t i = pos >= 2 ? pos - 2 : 0; i < std::min(pts_.size(), pos + 2); ++i) consider(i);
    if (space_.periodic()) {
      consider(0);
      consider(pts_.size() - 1);
    }
    return best;
  }

 private:
  const RegularSpace& space_;
  std::vector<Point> pts_;
};

struct SweepRange {
  long double lo;
  long double hi;
  long double mid;
};

SweepRange sweep_range(const RegularSpace& space, const Point& x0, double radius) {
  const long double c = space.position(x0);
  switch (space.kind()) {
    case SpaceKind::interval:
      return {std::max(0.0L, c - radius), std::min(1.0L, c + radius), c};
    case SpaceKind::circle:
      if (radius >= 0.5) return {c, c + 1.0L, c + 2.0L};
      return {c - radius, c + radius, c};
    case SpaceKind::cantor:
      return {c - radius, c + radius, c};
  }
  return {c, c, c};
}

std::vector<Point> sparse_sweep(const RegularSpace& space, const Point& x0, double radius, double r,
                                const std::vector<Point>& seed) {
  const SweepRange range = sweep_range(space, x0, radius);
  LineIndex index(space, range.lo);
  for (const Point& p : seed) index.insert(p);

  long double cursor = range.lo;
  for (;;) {
    const std::optional<Point> p = space.successor(cursor);
    if (!p) break;
    long double pu = space.position(*p);
    if (space.periodic()) {
      // successor rounds to a double and may land a hair behind the cursor
      long double off = wrap_offset(pu - cursor);
      if (off > 0.5L) off -= 1.0L;
      pu = cursor + off;
    }
    if (pu > range.hi) break;
    if (space.distance(x0, *p) > radius) {
      // rounding at the ball's edges
      if (pu >= range.mid) break;
      cursor = nudge(space, std::max(cursor, pu));
      continue;
    }
    long double next = index.frontier(*p, pu, r);
    if (next == -INFINITY) {
      index.insert(*p);
      next = reach(space, pu, r);
    }
    cursor = next > cursor ? next : nudge(space, cursor);
  }
  return index.points();
}

}  // namespace

bool is_sparse(const RegularSpace& space, std::span<const Point> points, double r) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (space.distance(points[i], points[j]) < r) return false;
    }
  }
  return true;
}

double max_probe_gap(const RegularSpace& space, std::span<const Point> points, const Point& x0, double radius,
                     double r) {
  const NearestIndex index(space, points);
  double worst = 0.0;
  for (const Point& q : space.probe_net(x0, radius, r / 4.0)) worst = std::max(worst, index.nearest(q));
  return worst;
}

SparseBounds sparse_count_bounds(const RegularSpace& space, double radius, double r) {
  const double ratio = std::pow(radius / r, space.s());
  const double c2 = space.c() * space.c();
  return {ratio / c2, std::pow(4.0, space.s()) * c2 * ratio};
}

std::vector<Point> max_sparse_subset(const RegularSpace& space, const Point& x0, double radius, double r,
                                     RandomStream* rng) {
  check_scales(space, radius, r);
  std::vector<Point> seed;
  if (rng != nullptr) {
    std::vector<Point> net = space.probe_net(x0, radius, r / 4.0);
    for (std::size_t i = net.size(); i > 1; --i) std::swap(net[i - 1], net[rng->next_below(i)]);
    const SweepRange range = sweep_range(space, x0, radius);
    LineIndex index(space, range.lo);
    for (const Point& q : net) {
      if (index.frontier(q, index.key(q), r) == -INFINITY) {
        index.insert(q);
        seed.push_back(q);
      }
    }
  }
  return sparse_sweep(space, x0, radius, r, seed);
}

CoverReport cover_ball(const RegularSpace& space, const Point& x, double radius, double r) {
  const double built = std::min(radius, space.diameter());
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  if (r > 2.0 * radius) throw DomainError("need r <= 2R");
  CoverReport rep;
  rep.factor_centers.push_back(max_sparse_subset(space, x, built, std::min(r, 2.0 * built)));
  rep.radius = r;
  rep.bound = sparse_count_bounds(space, radius, r).upper;
  rep.count = static_cast<double>(rep.factor_centers[0].size());
  rep.target = "ball(" + space.descriptor() + ", R=" + format_double(radius) + ")";
  return rep;
}

CoverReport cover_rectangle(const ProductSpace& space, std::span<const Point> x, const RadiusTuple& radii, double r) {
  if (x.size() != space.dimension() || radii.size() != space.dimension()) {
    throw ContractViolation("rectangle dimension mismatch");
  }
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cover radius must be positive");
  CoverReport rep;
  rep.radius = r;
  rep.bound = 1.0;
  rep.count = 1.0;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const RegularSpace& f = space.factor(i);
    if (radii[i] > r) {
      CoverReport one = cover_ball(f, x[i], radii[i], r);
      rep.bound *= one.bound;
      rep.factor_centers.push_back(std::move(one.factor_centers[0]));
    } else {
      rep.factor_centers.push_back({x[i]});
    }
    rep.count *= static_cast<double>(rep.factor_centers.back().size());
  }
  rep.target = "rect(" + space.descriptor() + ", r=" + join_doubles(radii.values()) + ")";
  return rep;
}

CoverCheck verify_cover(const ProductSpace& space, const CoverReport& cover, std::span<const Point> x,
                        std::span<const double> radii) {
  if (cover.factor_centers.size() != space.dimension() || x.size() != space.dimension() ||
      radii.size() != space.dimension()) {
    throw ContractViolation("cover dimension mismatch");
  }
  CoverCheck out;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const RegularSpace& f = space.factor(i);
    const NearestIndex index(f, cover.factor_centers[i]);
    const double reach = std::min(radii[i], 2.0 * f.diameter());
    for (const Point& q : f.probe_net(x[i], reach, std::min(cover.radius, radii[i]) / 4.0)) {
      if (f.distance(x[i], q) > radii[i]) continue;
      ++out.probes;
      const double gap = index.nearest(q);
      out.worst_gap = std::max(out.worst_gap, gap);
      if (gap > cover.radius) ++out.uncovered;
    }
  }
  out.covered = out.uncovered == 0;
  return out;
}

}  // namespace limsup
