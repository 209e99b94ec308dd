#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "limsup/rng.hpp"
#include "limsup/svf.hpp"

namespace limsup {

enum class SpaceKind { interval, circle, cantor };

// A point of a one-dimensional regular space. Interval and circle points are
// their coordinate; Cantor points carry 64 ternary-style digits (bit k-1 is
// digit k, 0 = left child, 1 = right child) and the coordinate is their
// embedding in [0, 1].
struct Point {
  double coord = 0.0;
  std::uint64_t digits = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

namespace detail {
struct CantorTables;
}

// Ahlfors (c, s)-regular metric measure space:
//   interval [0, 1] with length            (c, s) = (2, 1), diameter 1
//   circle of circumference 1, arc metric  (c, s) = (2, 1), diameter 1/2
//   cantor(lambda), 0 < lambda < 1/2, with the uniform digit measure
//                                          s = log 2 / log(1/lambda), diameter 1
// Cantor constants come from an exhaustive search over cylinder endpoints at
// construction time and are cached per lambda.
class RegularSpace {
 public:
  static RegularSpace interval();
  static RegularSpace circle();
  static RegularSpace cantor(double lambda);

  SpaceKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double c() const { return c_; }
  double s() const { return s_; }
  double diameter() const { return diameter_; }
  bool periodic() const { return kind_ == SpaceKind::circle; }
  std::string descriptor() const;

  double distance(const Point& a, const Point& b) const;

  // mu of the open ball B(x, r). DomainError for r < 0.
  double ball_measure(const Point& x, double r) const;

  Point sample(RandomStream& rng) const { return from_bits(rng.next_bits()); }
  // Maps one uniform 64-bit draw to a sample of the space's measure.
  Point from_bits(std::uint64_t bits) const;

  // Interval/circle midpoint; for a Cantor set the support point lambda
  // (right end of the left first-level cylinder), nearest the middle.
  Point center() const;

  // Smallest support point with position >= y (circle positions wrap), or
  // nullopt past the right end.
  std::optional<Point> successor(long double y) const;
  // Position on the line used by sweeps (coordinate; long double embedding
  // for Cantor points).
  long double position(const Point& p) const;

  // Finite net of support points inside the closed ball B(x, R) such that
  // every support point of the ball lies within `resolution` of the net
  // (up to the ball's edge cylinders for Cantor sets).
  std::vector<Point> probe_net(const Point& x, double radius, double resolution) const;

  // Cantor helpers.
  Point cantor_point(std::uint64_t digits) const;
  // mu([0, y]) (the Cantor function). Interval: clamp(y, 0, 1).
  double mass_below(double y) const;
  // Smallest scale the digit arithmetic resolves (lambda^depth); 0 otherwise.
  double resolution_floor() const;
  // Depth of the cylinder net used for probe nets at `resolution`.
  int cylinder_level(double resolution) const;

 private:
  RegularSpace() = default;
  SpaceKind kind_ = SpaceKind::interval;
  double lambda_ = 0.0;
  double c_ = 2.0;
  double s_ = 1.0;
  double diameter_ = 1.0;
  std::shared_ptr<const detail::CantorTables> tables_;
};

// Parses "interval", "circle" or "cantor:<lambda>" (lambda may be "p/q").
RegularSpace parse_space(const std::string& descriptor);

// Product of regular spaces with the max metric. Rectangles are products of
// closed balls; a rectangle with equal radii is the ball of that radius.
class ProductSpace {
 public:
  explicit ProductSpace(std::vector<RegularSpace> factors);

  std::size_t dimension() const { return factors_.size(); }
  const RegularSpace& factor(std::size_t i) const { return factors_[i]; }
  const std::vector<RegularSpace>& factors() const { return factors_; }

  double distance(std::span<const Point> a, std::span<const Point> b) const;
  bool in_rectangle(std::span<const Point> center, std::span<const double> radii, std::span<const Point> p) const;
  // mu(closed rectangle) = product of factor ball masses.
  double rectangle_measure(std::span<const Point> center, std::span<const double> radii) const;

  std::vector<Point> sample(RandomStream& rng) const;
  std::vector<Point> center() const;

  RegularityVector regularity() const;
  // (prod c_i) * 2^(sum s_i): regularity constant of the product measure.
  double regularity_constant() const;
  // C = prod 4^(s_i) c_i^2: the constant of the rectangle cover bound.
  double cover_constant() const;

  ProductSpace permuted(const std::vector<std::size_t>& order) const;
  ProductSpace without_last() const;

  // Comma-separated factor descriptors, e.g. "circle,cantor:0.33333333333333331".
  std::string descriptor() const;

 private:
  std::vector<RegularSpace> factors_;
};

ProductSpace parse_product_space(const std::string& descriptor);

}  // namespace limsup
