#include "limsup/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>

#include "limsup/errors.hpp"
#include "limsup/format.hpp"
#include "limsup/parse.hpp"

namespace limsup {

namespace detail {

struct CantorTables {
  double lambda = 0.0;
  // digits the long double embedding keeps strictly ordered
  int resolved_depth = 0;
  long double pow_lambda[65] = {};
  // contribution of digits 8b+1 .. 8b+8 for each byte value
  long double bytes[8][256] = {};

  long double embed(std::uint64_t digits) const {
    long double x = 0.0L;
    for (int b = 7; b >= 0; --b) x += bytes[b][(digits >> (8 * b)) & 0xffu];
    return x;
  }

  // mu([0, y]) for the unit-scale set.
  long double mass_below(long double y) const {
    if (y < 0.0L) return 0.0L;
    if (y >= 1.0L) return 1.0L;
    const long double l = lambda;
    long double lo = 0.0L, len = 1.0L, mass = 0.0L, w = 1.0L;
    for (int depth = 0; depth < 64; ++depth) {
      if (y >= lo + len) return mass + w;
      if (y < lo) return mass;
      const long double child = l * len;
      w *= 0.5L;
      if (y < lo + child) {
        len = child;
      } else if (y < lo + len - child) {
        return mass + w;
      } else {
        mass += w;
        lo = lo + len - child;
        len = child;
      }
    }
    return mass + 0.5L * w;
  }
};

}  // namespace detail

namespace {

using detail::CantorTables;

constexpr int kSearchDepth = 8;
constexpr double kConstantMargin = 1e-3;

std::uint64_t low_mask(int k) { return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1; }

long double cantor_distance(const CantorTables& t, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t x = a ^ b;
  if (x == 0) return 0.0L;
  const int m = std::countr_zero(x);
  return t.pow_lambda[m] * std::fabs(t.embed(a >> m) - t.embed(b >> m));
}

// mu(B(x, r)) for the open ball, relative-accurate at every scale: zoom into
// the deepest cylinder of x that already contains the whole ball.
double cantor_ball(const CantorTables& t, std::uint64_t digits, double r) {
  const long double gap_ratio = 1.0L - 2.0L * t.lambda;
  int k = 0;
  while (k < 48 && static_cast<long double>(r) <= gap_ratio * t.pow_lambda[k]) ++k;
  const long double x = t.embed(digits >> k);
  const long double rr = static_cast<long double>(r) / t.pow_lambda[k];
  const long double local = t.mass_below(x + rr) - t.mass_below(x - rr);
  return static_cast<double>(std::ldexp(local, -k));
}

double search_constant(const CantorTables& t, double s) {
  const int depth = kSearchDepth;
  std::vector<std::uint64_t> pts;
  for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << depth); ++prefix) {
    // digit 1 is the most significant; build the prefix in digit order
    std::uint64_t d = 0;
    for (int k = 0; k < depth; ++k) {
      if (prefix >> (depth - 1 - k) & 1u) d |= std::uint64_t{1} << k;
    }
    pts.push_back(d);
    pts.push_back(d | ~low_mask(depth));
  }
  double upper = std::pow(2.0, -s);  // r = 2 swallows the set
  double lower = upper;
  for (std::uint64_t x : pts) {
    for (std::uint64_t y : pts) {
      if (x == y) continue;
      const double r = static_cast<double>(cantor_distance(t, x, y));
      if (!(r > 0.0)) continue;
      const double ratio = cantor_ball(t, x, r) / std::pow(r, s);
      upper = std::max(upper, ratio);
      lower = std::min(lower, ratio);
    }
  }
  return std::max(upper, 1.0 / lower) * (1.0 + kConstantMargin);
}

struct CantorEntry {
  std::shared_ptr<const CantorTables> tables;
  double c;
};

CantorEntry cantor_entry(double lambda) {
  static std::mutex mu;
  static std::map<double, CantorEntry> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(lambda); it != cache.end()) return it->second;

  auto t = std::make_shared<CantorTables>();
  t->lambda = lambda;
  const long double l = lambda;
  t->pow_lambda[0] = 1.0L;
  for (int k = 1; k <= 64; ++k) t->pow_lambda[k] = t->pow_lambda[k - 1] * l;
  for (int b = 0; b < 8; ++b) {
    for (int v = 0; v < 256; ++v) {
      long double sum = 0.0L;
      for (int j = 7; j >= 0; --j) {
        if (v >> j & 1) sum += (1.0L - l) * t->pow_lambda[8 * b + j];
      }
      t->bytes[b][v] = sum;
    }
  }
  // smallest separation at digit k is (1 - 2 lambda) lambda^(k-1); keep it
  // well above the long double rounding of a sum of eight terms
  const long double floor = std::ldexp(1.0L, -56);
  int depth = 1;
  while (depth < 64 && (1.0L - 2.0L * l) * t->pow_lambda[depth] >= floor) ++depth;
  t->resolved_depth = depth;

  const double s = std::log(2.0) / std::log(1.0 / lambda);
  CantorEntry e{t, search_constant(*t, s)};
  cache.emplace(lambda, e);
  return e;
}

double wrap_unit(long double y) {
  long double w = std::fmod(y, 1.0L);
  if (w < 0.0L) w += 1.0L;
  double d = static_cast<double>(w);
  if (d >= 1.0) d = 0.0;
  return d;
}

}  // namespace

RegularSpace RegularSpace::interval() {
  RegularSpace sp;
  sp.kind_ = SpaceKind::interval;
  return sp;
}

RegularSpace RegularSpace::circle() {
  RegularSpace sp;
  sp.kind_ = SpaceKind::circle;
  sp.diameter_ = 0.5;
  return sp;
}

RegularSpace RegularSpace::cantor(double lambda) {
  if (!(lambda > 0.0 && lambda < 0.5)) throw DomainError("Cantor contraction ratio must lie in (0, 1/2)");
  const CantorEntry e = cantor_entry(lambda);
  RegularSpace sp;
  sp.kind_ = SpaceKind::cantor;
  sp.lambda_ = lambda;
  sp.s_ = std::log(2.0) / std::log(1.0 / lambda);
  sp.c_ = e.c;
  sp.tables_ = e.tables;
  return sp;
}

std::string RegularSpace::descriptor() const {
  switch (kind_) {
    case SpaceKind::interval:
      return "interval";
    case SpaceKind::circle:
      return "circle";
    case SpaceKind::cantor:
      return "cantor:" + format_double(lambda_);
  }
  return {};
}

double RegularSpace::distance(const Point& a, const Point& b) const {
  switch (kind_) {
    case SpaceKind::interval:
      return std::fabs(a.coord - b.coord);
    case SpaceKind::circle: {
      const double d = std::fabs(a.coord - b.coord);
      return std::min(d, 1.0 - d);
    }
    case SpaceKind::cantor:
      return static_cast<double>(cantor_distance(*tables_, a.digits, b.digits));
  }
  return 0.0;
}

double RegularSpace::ball_measure(const Point& x, double r) const {
  if (!(r >= 0.0)) throw DomainError("ball radius must be non-negative");
  switch (kind_) {
    case SpaceKind::interval:
      return std::max(0.0, std::min(1.0, x.coord + r) - std::max(0.0, x.coord - r));
    case SpaceKind::circle:
      return std::min(2.0 * r, 1.0);
    case SpaceKind::cantor:
      if (r == 0.0) return 0.0;
      return cantor_ball(*tables_, x.digits, r);
  }
  return 0.0;
}

Point RegularSpace::from_bits(std::uint64_t bits) const {
  if (kind_ == SpaceKind::cantor) return cantor_point(bits);
  return Point{bits_to_uniform(bits), 0};
}

Point RegularSpace::center() const {
  if (kind_ == SpaceKind::cantor) return cantor_point(~std::uint64_t{1});
  return Point{0.5, 0};
}

Point RegularSpace::cantor_point(std::uint64_t digits) const {
  if (kind_ != SpaceKind::cantor) throw ContractViolation("digit points exist only on Cantor spaces");
  return Point{static_cast<double>(tables_->embed(digits)), digits};
}

long double RegularSpace::position(const Point& p) const {
  if (kind_ == SpaceKind::cantor) return tables_->embed(p.digits);
  return p.coord;
}

std::optional<Point> RegularSpace::successor(long double y) const {
  switch (kind_) {
    case SpaceKind::interval:
      if (y > 1.0L) return std::nullopt;
      return Point{std::clamp(static_cast<double>(y), 0.0, 1.0), 0};
    case SpaceKind::circle:
      return Point{wrap_unit(y), 0};
    case SpaceKind::cantor:
      break;
  }
  const CantorTables& t = *tables_;
  if (y <= 0.0L) return cantor_point(0);
  const std::uint64_t ones = ~std::uint64_t{0};
  if (y > t.embed(ones)) return std::nullopt;
  // largest resolved prefix whose left end is still below y
  const int depth = t.resolved_depth;
  std::uint64_t u = 0;
  for (int k = 0; k < depth; ++k) {
    const std::uint64_t cand = u | std::uint64_t{1} << k;
    if (t.embed(cand) < y) u = cand;
  }
  // y may sit inside the unresolved tail of that cylinder
  const std::uint64_t top = u | ~low_mask(depth);
  if (t.embed(top) >= y) return cantor_point(top);
  for (int k = depth - 1; k >= 0; --k) {
    if (!(u >> k & 1u)) {
      u = (u & low_mask(k)) | std::uint64_t{1} << k;
      return cantor_point(u);
    }
  }
  return cantor_point(ones);
}

int RegularSpace::cylinder_level(double resolution) const {
  if (kind_ != SpaceKind::cantor) return 0;
  int k = 0;
  while (k < tables_->resolved_depth && static_cast<long double>(resolution) < tables_->pow_lambda[k]) ++k;
  return k;
}

double RegularSpace::resolution_floor() const {
  if (kind_ != SpaceKind::cantor) return 0.0;
  return static_cast<double>(tables_->pow_lambda[tables_->resolved_depth]);
}

double RegularSpace::mass_below(double y) const {
  switch (kind_) {
    case SpaceKind::interval:
      return std::clamp(y, 0.0, 1.0);
    case SpaceKind::circle:
      return std::clamp(y, 0.0, 1.0);
    case SpaceKind::cantor:
      return static_cast<double>(tables_->mass_below(y));
  }
  return 0.0;
}

std::vector<Point> RegularSpace::probe_net(const Point& x, double radius, double resolution) const {
  if (!(radius >= 0.0)) throw DomainError("probe radius must be non-negative");
  if (!(resolution > 0.0)) throw DomainError("probe resolution must be positive");
  std::vector<Point> net;
  switch (kind_) {
    case SpaceKind::interval: {
      const double a = std::max(0.0, x.coord - radius);
      const double b = std::min(1.0, x.coord + radius);
      const auto m = static_cast<std::size_t>(std::ceil((b - a) / resolution));
      for (std::size_t k = 0; k <= m; ++k) {
        const double v = m == 0 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(m);
        net.push_back(Point{std::min(v, b), 0});
      }
      return net;
    }
    case SpaceKind::circle: {
      if (radius >= 0.5) {
        const auto m = static_cast<std::size_t>(std::ceil(1.0 / resolution));
        for (std::size_t k = 0; k < m; ++k) net.push_back(Point{static_cast<double>(k) / static_cast<double>(m), 0});
        return net;
      }
      const auto m = static_cast<std::size_t>(std::ceil(2.0 * radius / resolution));
      for (std::size_t k = 0; k <= m; ++k) {
        const long double off =
            m == 0 ? 0.0L : -radius + 2.0L * radius * static_cast<long double>(k) / static_cast<long double>(m);
        const Point p{wrap_unit(x.coord + off), 0};
        if (distance(x, p) <= radius) net.push_back(p);
      }
      if (net.empty()) net.push_back(x);
      return net;
    }
    case SpaceKind::cantor:
      break;
  }
  const CantorTables& t = *tables_;
  const int level = cylinder_level(resolution);
  const long double lo_edge = static_cast<long double>(x.coord) - radius;
  const long double hi_edge = static_cast<long double>(x.coord) + radius;
  auto take = [&](std::uint64_t d) {
    const Point p = cantor_point(d);
    if (distance(x, p) <= radius) net.push_back(p);
  };
  // depth-first over cylinders meeting [x - R, x + R]
  struct Frame {
    std::uint64_t prefix;
    int depth;
    long double lo;
  };
  std::vector<Frame> stack{{0, 0, 0.0L}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const long double len = t.pow_lambda[f.depth];
    if (f.lo > hi_edge || f.lo + len < lo_edge) continue;
    if (f.depth == level) {
      take(f.prefix);
      take(f.prefix | ~low_mask(level));
      continue;
    }
    const long double child = t.pow_lambda[f.depth + 1];
    stack.push_back({f.prefix | std::uint64_t{1} << f.depth, f.depth + 1, f.lo + len - child});
    stack.push_back({f.prefix, f.depth + 1, f.lo});
  }
  take(x.digits);
  if (auto p = successor(lo_edge)) take(p->digits);
  std::sort(net.begin(), net.end(), [](const Point& a, const Point& b) { return a.coord < b.coord; });
  net.erase(std::unique(net.begin(), net.end()), net.end());
  return net;
}

RegularSpace parse_space(const std::string& descriptor) {
  if (descriptor == "interval") return RegularSpace::interval();
  if (descriptor == "circle") return RegularSpace::circle();
  const std::string prefix = "cantor:";
  if (descriptor.rfind(prefix, 0) == 0) return RegularSpace::cantor(parse_double(descriptor.substr(prefix.size())));
  throw DomainError("unknown space '" + descriptor + "' (expected interval, circle or cantor:<lambda>)");
}

ProductSpace::ProductSpace(std::vector<RegularSpace> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DomainError("product space needs at least one factor");
}

double ProductSpace::distance(std::span<const Point> a, std::span<const Point> b) const {
  if (a.size() != dimension() || b.size() != dimension()) throw ContractViolation("point dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) d = std::max(d, factors_[i].distance(a[i], b[i]));
  return d;
}

bool ProductSpace::in_rectangle(std::span<const Point> center, std::span<const double> radii,
                                std::span<const Point> p) const {
  if (center.size() != dimension() || radii.size() != dimension() || p.size() != dimension()) {
    throw ContractViolation("rectangle dimension mismatch");
  }
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (factors_[i].distance(center[i], p[i]) > radii[i]) return false;
  }
  return true;
}

double ProductSpace::rectangle_measure(std::span<const Point> center, std::span<const double> radii) const {
  if (center.size() != dimension() || radii.size() != dimension()) throw ContractViolation("rectangle dimension mismatch");
  double m = 1.0;
  for (std::size_t i = 0; i < dimension(); ++i) m *= factors_[i].ball_measure(center[i], radii[i]);
  return m;
}

std::vector<Point> ProductSpace::sample(RandomStream& rng) const {
  std::vector<Point> p;
  p.reserve(dimension());
  for (const RegularSpace& f : factors_) p.push_back(f.sample(rng));
  return p;
}

std::vector<Point> ProductSpace::center() const {
  std::vector<Point> p;
  for (const RegularSpace& f : factors_) p.push_back(f.center());
  return p;
}

RegularityVector ProductSpace::regularity() const {
  std::vector<double> s;
  for (const RegularSpace& f : factors_) s.push_back(f.s());
  return RegularityVector(std::move(s));
}

double ProductSpace::regularity_constant() const {
  double c = 1.0, s = 0.0;
  for (const RegularSpace& f : factors_) {
    c *= f.c();
    s += f.s();
  }
  return c * std::pow(2.0, s);
}

double ProductSpace::cover_constant() const {
  double c = 1.0;
  for (const RegularSpace& f : factors_) c *= std::pow(4.0, f.s()) * f.c() * f.c();
  return c;
}

ProductSpace ProductSpace::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != dimension()) throw ContractViolation("permutation size mismatch");
  std::vector<RegularSpace> f;
  for (std::size_t i : order) f.push_back(factors_.at(i));
  return ProductSpace(std::move(f));
}

ProductSpace ProductSpace::without_last() const {
  if (dimension() < 2) throw ContractViolation("cannot drop the only factor");
  return ProductSpace(std::vector<RegularSpace>(factors_.begin(), factors_.end() - 1));
}

std::string ProductSpace::descriptor() const {
  std::string out;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (i) out += ",";
    out += factors_[i].descriptor();
  }
  return out;
}

ProductSpace parse_product_space(const std::string& descriptor) {
  std::vector<RegularSpace> f;
  for (const std::string& item : split(descriptor, ',')) f.push_back(parse_space(item));
  return ProductSpace(std::move(f));
}

}  // namespace limsup
