#include "limsup/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "limsup/errors.hpp"
#include "limsup/format.hpp"
#include "limsup/parse.hpp"

namespace limsup {

namespace {

constexpr double kMaxIndex = 0x1.0p53;

}  // namespace

PowerLawSchedule::PowerLawSchedule(std::vector<double> alphas, std::vector<double> coefficients)
    : alphas_(std::move(alphas)), coefficients_(std::move(coefficients)) {
  if (alphas_.empty()) throw DomainError("power-law schedule needs at least one exponent");
  if (coefficients_.empty()) coefficients_.assign(alphas_.size(), 1.0);
  if (coefficients_.size() != alphas_.size()) {
    throw DomainError("power-law schedule: " + std::to_string(alphas_.size()) + " exponents but " +
                      std::to_string(coefficients_.size()) + " coefficients");
  }
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    if (!(alphas_[i] > 0.0) || !std::isfinite(alphas_[i])) throw DomainError("decay exponent must be positive");
    if (!(coefficients_[i] > 0.0) || !std::isfinite(coefficients_[i])) {
      throw DomainError("radius coefficient must be positive");
    }
  }
  double start = 1.0;
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    const double bound = std::ceil(std::exp(std::log(coefficients_[i]) / alphas_[i]));
    if (!(bound < kMaxIndex)) throw DomainError("radius coefficient too large: radii never drop below 1");
    start = std::max(start, bound);
  }
  auto all_at_most_one = [this](std::uint64_t n) {
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      if (log_radius(n, i) > 0.0) return false;
    }
    return true;
  };
  n_min_ = static_cast<std::uint64_t>(start);
  while (!all_at_most_one(n_min_)) ++n_min_;
  while (n_min_ > 1 && all_at_most_one(n_min_ - 1)) --n_min_;
}

bool PowerLawSchedule::unit_coefficients() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](double k) { return k == 1.0; });
}

double PowerLawSchedule::log_radius(std::uint64_t n, std::size_t i) const {
  return std::log(coefficients_[i]) - alphas_[i] * std::log(static_cast<double>(n));
}

RadiusTuple PowerLawSchedule::radii(std::uint64_t n) const {
  if (n == 0) throw DomainError("schedule index starts at 1");
  std::vector<double> r(alphas_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::exp(log_radius(n, i));
  return RadiusTuple(std::move(r));
}

PowerLawSchedule PowerLawSchedule::scaled(double factor) const {
  std::vector<double> k = coefficients_;
  for (double& v : k) v *= factor;
  return PowerLawSchedule(alphas_, std::move(k));
}

PowerLawSchedule PowerLawSchedule::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != alphas_.size()) throw ContractViolation("permutation size mismatch");
  std::vector<double> a(order.size()), k(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    a[j] = alphas_.at(order[j]);
    k[j] = coefficients_.at(order[j]);
  }
  return PowerLawSchedule(std::move(a), std::move(k));
}

PowerLawSchedule PowerLawSchedule::without_last() const {
  if (alphas_.size() < 2) throw ContractViolation("cannot drop the only coordinate");
  return PowerLawSchedule(std::vector<double>(alphas_.begin(), alphas_.end() - 1),
                          std::vector<double>(coefficients_.begin(), coefficients_.end() - 1));
}

std::vector<std::size_t> PowerLawSchedule::asymptotic_order() const {
  std::vector<std::size_t> order(alphas_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    if (alphas_[a] != alphas_[b]) return alphas_[a] < alphas_[b];
    return coefficients_[a] > coefficients_[b];
  });
  return order;
}

std::optional<std::uint64_t> PowerLawSchedule::ordered_from() const {
  std::uint64_t from = 1;
  for (std::size_t i = 0; i + 1 < alphas_.size(); ++i) {
    const double da = alphas_[i + 1] - alphas_[i];
    const double dk = std::log(coefficients_[i + 1]) - std::log(coefficients_[i]);
    if (da < 0.0) return std::nullopt;
    if (da == 0.0) {
      if (dk > 0.0) return std::nullopt;
      continue;
    }
    double n = std::max(1.0, std::ceil(std::exp(dk / da)));
    if (!(n < kMaxIndex)) return std::nullopt;
    auto ordered = [&](double m) {
      return log_radius(static_cast<std::uint64_t>(m), i) >= log_radius(static_cast<std::uint64_t>(m), i + 1);
    };
    while (!ordered(n)) n += 1.0;
    while (n > 1.0 && ordered(n - 1.0)) n -= 1.0;
    from = std::max(from, static_cast<std::uint64_t>(n));
  }
  return from;
}

std::string PowerLawSchedule::descriptor() const {
  return "power:alphas=" + join_doubles(alphas_) + ";coefficients=" + join_doubles(coefficients_);
}

ExplicitSchedule::ExplicitSchedule(std::vector<RadiusTuple> tuples, ScheduleTail tail)
    : tuples_(std::move(tuples)), tail_(std::move(tail)) {
  if (tuples_.empty()) throw DomainError("explicit schedule needs at least one tuple");
  const std::size_t d = tuples_.front().size();
  for (const RadiusTuple& r : tuples_) {
    if (r.size() != d) throw DomainError("explicit schedule tuples have inconsistent dimensions");
    if (!r.standalone_valid()) throw DomainError("explicit schedule radii must lie in (0, 1]");
  }
  if (const auto* p = std::get_if<PowerLawSchedule>(&tail_); p && p->dimension() != d) {
    throw DomainError("power-law tail dimension does not match the tuples");
  }
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    if (c->radii.size() != d) throw DomainError("constant tail dimension does not match the tuples");
    if (!c->radii.standalone_valid()) throw DomainError("constant tail radii must lie in (0, 1]");
  }
}

double ExplicitSchedule::log_radius(std::uint64_t n, std::size_t i) const {
  if (n == 0) throw DomainError("schedule index starts at 1");
  if (n <= tuples_.size()) return std::log(tuples_[n - 1][i]);
  if (const auto* p = std::get_if<PowerLawSchedule>(&tail_)) return p->log_radius(n, i);
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) return std::log(c->radii[i]);
  throw DomainError("index " + std::to_string(n) + " is past the finite schedule and no tail is declared");
}

RadiusTuple ExplicitSchedule::radii(std::uint64_t n) const {
  if (n >= 1 && n <= tuples_.size()) return tuples_[n - 1];
  if (const auto* c = std::get_if<ConstantTail>(&tail_); c && n > tuples_.size()) return c->radii;
  std::vector<double> r(dimension());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::exp(log_radius(n, i));
  return RadiusTuple(std::move(r));
}

std::string ExplicitSchedule::descriptor() const {
  std::string out = "explicit:tuples=";
  for (std::size_t k = 0; k < tuples_.size(); ++k) {
    if (k) out += "|";
    out += join_doubles(tuples_[k].values());
  }
  out += ";tail=";
  if (const auto* p = std::get_if<PowerLawSchedule>(&tail_)) {
    out += "(" + p->descriptor() + ")";
  } else if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    out += "constant:" + join_doubles(c->radii.values());
  } else {
    out += "none";
  }
  return out;
}

std::size_t schedule_dimension(const RadiusSchedule& sched) {
  return std::visit([](const auto& s) { return s.dimension(); }, sched);
}

std::string schedule_descriptor(const RadiusSchedule& sched) {
  return std::visit([](const auto& s) { return s.descriptor(); }, sched);
}

RadiusTuple schedule_radii(const RadiusSchedule& sched, std::uint64_t n) {
  return std::visit([n](const auto& s) { return s.radii(n); }, sched);
}

void fill_log_radii(const RadiusSchedule& sched, std::uint64_t first, std::size_t count, double* out,
                    std::size_t stride) {
  if (const auto* p = std::get_if<PowerLawSchedule>(&sched)) {
    const std::size_t d = p->dimension();
    std::vector<double> log_k(d);
    for (std::size_t i = 0; i < d; ++i) log_k[i] = std::log(p->coefficients()[i]);
    for (std::size_t j = 0; j < count; ++j) {
      const double log_n = std::log(static_cast<double>(first + j));
      for (std::size_t i = 0; i < d; ++i) out[i * stride + j] = log_k[i] - p->alphas()[i] * log_n;
    }
    return;
  }
  const auto& e = std::get<ExplicitSchedule>(sched);
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i < e.dimension(); ++i) out[i * stride + j] = e.log_radius(first + j, i);
  }
}

}  // namespace limsup

namespace limsup {

namespace {

PowerLawSchedule parse_power(const std::string& body) {
  std::vector<double> alphas, coefficients;
  bool have_alphas = false;
  for (const std::string& part : split(body, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw DomainError("expected key=value in power schedule, got '" + part + "'");
    const std::string key = trim(part.substr(0, eq));
    const std::string value = part.substr(eq + 1);
    if (key == "alphas") {
      alphas = parse_double_list(value);
      have_alphas = true;
    } else if (key == "coefficients") {
      coefficients = parse_double_list(value);
    } else {
      throw DomainError("unknown power schedule field '" + key + "'");
    }
  }
  if (!have_alphas) throw DomainError("power schedule needs alphas=");
  return PowerLawSchedule(std::move(alphas), std::move(coefficients));
}

}  // namespace

RadiusSchedule parse_schedule(const std::string& descriptor) {
  const std::string d = trim(descriptor);
  if (d.rfind("power:", 0) == 0) return parse_power(d.substr(6));
  if (d.rfind("explicit:", 0) != 0) throw DomainError("schedule must start with power: or explicit:");
  const std::string body = d.substr(9);
  // the tail may itself contain ';' inside parentheses
  const auto tail_at = body.find(";tail=");
  const std::string tuples_part = body.substr(0, tail_at);
  if (tuples_part.rfind("tuples=", 0) != 0) throw DomainError("explicit schedule needs tuples=");
  std::vector<RadiusTuple> tuples;
  for (const std::string& t : split(tuples_part.substr(7), '|')) tuples.emplace_back(parse_double_list(t));
  ScheduleTail tail;
  if (tail_at != std::string::npos) {
    const std::string tail_text = trim(body.substr(tail_at + 6));
    if (tail_text == "none") {
      tail = std::monostate{};
    } else if (tail_text.rfind("constant:", 0) == 0) {
      tail = ConstantTail{RadiusTuple(parse_double_list(tail_text.substr(9)))};
    } else if (tail_text.size() > 2 && tail_text.front() == '(' && tail_text.back() == ')') {
      const std::string inner = trim(tail_text.substr(1, tail_text.size() - 2));
      if (inner.rfind("power:", 0) != 0) throw DomainError("tail schedule must be a power law");
      tail = parse_power(inner.substr(6));
    } else {
      throw DomainError("unknown tail '" + tail_text + "'");
    }
  }
  return ExplicitSchedule(std::move(tuples), std::move(tail));
}

}  // namespace limsup
