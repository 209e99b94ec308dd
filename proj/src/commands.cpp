#include "limsup/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "limsup/covers.hpp"
#include "limsup/dimension.hpp"
#include "limsup/ellipsoid.hpp"
#include "limsup/format.hpp"
#include "limsup/montecarlo.hpp"
#include "limsup/parse.hpp"
#include "limsup/schedule.hpp"
#include "limsup/spaces.hpp"
#include "limsup/summation.hpp"
#include "limsup/svf.hpp"

namespace limsup {

namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::string_view kManifestFormat = "limsup-manifest";

class Emitter {
 public:
  explicit Emitter(RunOutcome& out) : out_(out) {}

  void line(const std::vector<std::string>& cols) { out_.csv += csv_line(cols); }

  // key,N,statistic,reference,ratio
  void stat(const std::string& key, std::uint64_t n, double statistic, double reference) {
    const double ratio = reference != 0.0 && !std::isnan(reference) ? statistic / reference : kNaN;
    line({key, std::to_string(n), format_double(statistic), format_double(reference), format_double(ratio)});
    record(key, n, statistic, reference, ratio);
  }

  // quantity,value
  void quantity(const std::string& key, double value) {
    line({key, format_double(value)});
    record(key, 0, value, kNaN, kNaN);
  }

  void record(const std::string& key, std::uint64_t n, double statistic, double reference, double ratio) {
    out_.statistics.push_back({key, n, statistic, reference, ratio});
  }

  void note(const std::string& m) { out_.messages.push_back(m); }
  void fail(const std::string& m) {
    out_.messages.push_back("check failed: " + m);
    out_.status = kExitCheckFailed;
  }

 private:
  RunOutcome& out_;
};

Point point_from_coord(const RegularSpace& space, double coord) {
  if (!(coord >= 0.0 && coord <= 1.0)) throw DomainError("coordinate " + format_double(coord) + " outside [0, 1]");
  if (space.kind() != SpaceKind::cantor) return Point{space.periodic() && coord == 1.0 ? 0.0 : coord, 0};
  // nearest support point at or to the right
  const auto p = space.successor(coord);
  if (!p) throw DomainError("no Cantor point at or after " + format_double(coord));
  return *p;
}

std::vector<Point> points_from_coords(const ProductSpace& space, std::span<const double> coords,
                                      std::size_t factors) {
  if (coords.size() != factors) {
    throw DomainError("expected " + std::to_string(factors) + " coordinates, got " + std::to_string(coords.size()));
  }
  std::vector<Point> p;
  for (std::size_t i = 0; i < factors; ++i) p.push_back(point_from_coord(space.factor(i), coords[i]));
  return p;
}

std::vector<double> expectations_from(const std::string& spec) {
  if (spec.rfind("harmonic:", 0) == 0) {
    const std::uint64_t n = parse_uint(spec.substr(9));
    std::vector<double> p(n);
    for (std::uint64_t i = 0; i < n; ++i) p[i] = 1.0 / static_cast<double>(i + 1);
    return p;
  }
  if (spec.rfind("constant:", 0) == 0) {
    const std::vector<std::string> parts = split(spec.substr(9), ':');
    if (parts.size() != 2) throw DomainError("expected constant:p:N");
    return std::vector<double>(parse_uint(parts[1]), parse_double(parts[0]));
  }
  return parse_double_list(spec);
}

std::string keyed(std::string_view name, double v) { return std::string(name) + "=" + format_double(v); }

void require_dimension(const ProductSpace& space, const RadiusSchedule& sched) {
  if (schedule_dimension(sched) != space.dimension()) {
    throw DomainError("schedule has " + std::to_string(schedule_dimension(sched)) + " coordinates, space has " +
                      std::to_string(space.dimension()));
  }
}

void svf_eval(const RunConfig& c, Emitter& e) {
  const RadiusTuple r(c.reals("r"));
  if (!r.standalone_valid()) throw DomainError("radii must lie in (0, 1]");
  const RegularityVector s(c.reals("s"));
  if (s.size() != r.size()) throw DomainError("r and s differ in length");
  const SingularValueProfile prof = svf_profile(r, s);
  for (double t : c.reals("t")) {
    if (!(t >= 0.0) || t > s.total()) throw DomainError("t = " + format_double(t) + " outside [0, total(s)]");
    const double v = prof.value(t);
    e.line({format_double(v)});
    e.record(keyed("t", t), 0, v, kNaN, kNaN);
  }
}

void svf_profile_cmd(const RunConfig& c, Emitter& e) {
  const RadiusTuple r(c.reals("r"));
  if (!r.standalone_valid()) throw DomainError("radii must lie in (0, 1]");
  const RegularityVector s(c.reals("s"));
  if (s.size() != r.size()) throw DomainError("r and s differ in length");
  const SingularValueProfile prof = svf_profile(r, s);
  e.line({"piece", "coordinate", "t_start", "t_end", "slope", "log_value_start"});
  const auto& bp = prof.breakpoints();
  for (std::size_t k = 0; k < prof.pieces(); ++k) {
    e.line({std::to_string(k), std::to_string(prof.permutation()[k]), format_double(bp[k].t),
            format_double(bp[k + 1].t), format_double(prof.slope(k)), format_double(bp[k].log_value)});
    e.record("piece=" + std::to_string(k), 0, prof.slope(k), kNaN, kNaN);
  }
}

void dim_predict(const RunConfig& c, Emitter& e) {
  const RadiusSchedule sched = parse_schedule(c.text("schedule"));
  const std::size_t d = schedule_dimension(sched);
  const bool ellipsoid = c.has("body") && c.text("body") == "ellipsoid";
  std::vector<double> svals = c.has("s") ? c.reals("s") : std::vector<double>(d, 1.0);
  if (svals.size() != d) throw DomainError("s has " + std::to_string(svals.size()) + " entries, schedule has " +
                                           std::to_string(d) + " coordinates");
  if (ellipsoid && std::any_of(svals.begin(), svals.end(), [](double v) { return v != 1.0; })) {
    throw DomainError("convex bodies use s = (1, ..., 1)");
  }
  const RegularityVector s(svals);
  const double tol = c.real_or("tol", kDefaultBisectionTol);
  if (!(tol > 0.0)) throw DomainError("tol must be positive");

  std::set<std::string> methods;
  if (c.has("method")) {
    for (const std::string& m : split(c.text("method"), ',')) methods.insert(m);
  } else {
    methods = {"series"};
    if (std::holds_alternative<PowerLawSchedule>(sched)) methods.insert("closed-form");
  }
  const auto* power = std::get_if<PowerLawSchedule>(&sched);
  if (methods.count("closed-form") && power == nullptr) {
    throw DomainError("the closed form needs a power-law schedule");
  }

  std::optional<double> series, closed;
  if (ellipsoid) {
    if (power == nullptr) throw DomainError("body = ellipsoid needs a power-law semiaxis schedule");
    const EllipsoidSchedule body(*power);
    series = convex_body_dimension(body, tol);
    const double dilated = convex_body_dimension(EllipsoidSchedule(body.dilated()), tol);
    if (methods.count("closed-form")) closed = closed_form_dimension(*power, s);
    e.line({"quantity", "value"});
    e.quantity("predicted_dimension", *series);
    if (closed) e.quantity("closed_form", *closed);
    e.quantity("series", *series);
    e.quantity("dilated_series", dilated);
    if (dilated != *series) e.fail("dilated bodies give " + format_double(dilated));
  } else {
    if (methods.count("series")) series = critical_exponent_series(sched, s, tol);
    if (methods.count("closed-form")) closed = closed_form_dimension(*power, s);
    e.line({"quantity", "value"});
    e.quantity("predicted_dimension", series ? *series : *closed);
    if (closed) e.quantity("closed_form", *closed);
    if (series) e.quantity("series", *series);
  }
  if (series && closed) {
    const double gap = std::fabs(*series - *closed);
    e.quantity("agreement", gap);
    if (gap > 10.0 * tol) e.fail("closed form and series differ by " + format_double(gap));
  }
}

void report_cover(Emitter& e, const CoverReport& cover, const CoverCheck& check) {
  e.line({"quantity", "value"});
  e.quantity("count", cover.count);
  e.quantity("bound", cover.bound);
  e.quantity("radius", cover.radius);
  e.quantity("probes", static_cast<double>(check.probes));
  e.quantity("uncovered", static_cast<double>(check.uncovered));
  e.quantity("worst_gap", check.worst_gap);
  if (cover.count > cover.bound) e.fail("cover has " + format_double(cover.count) + " balls, bound " +
                                        format_double(cover.bound));
  if (!check.covered) e.fail(std::to_string(check.uncovered) + " probes left uncovered");
}

void cover_ball_cmd(const RunConfig& c, Emitter& e) {
  const ProductSpace space = parse_product_space(c.text("space"));
  const std::vector<Point> x = points_from_coords(space, c.reals("center"), space.dimension());
  const double radius = c.real("radius");
  const double r = c.real("spacing");
  const std::vector<double> radii(space.dimension(), radius);
  // in the max metric a ball of a product is the rectangle with equal radii
  const CoverReport cover = space.dimension() == 1 ? cover_ball(space.factor(0), x[0], radius, r)
                                                   : cover_rectangle(space, x, RadiusTuple(radii), r);
  report_cover(e, cover, verify_cover(space, cover, x, radii));
}

void cover_rect_cmd(const RunConfig& c, Emitter& e) {
  const ProductSpace space = parse_product_space(c.text("space"));
  const std::vector<Point> x = points_from_coords(space, c.reals("center"), space.dimension());
  const RadiusTuple radii(c.reals("radii"));
  if (radii.size() != space.dimension()) throw DomainError("radii and space differ in dimension");
  const CoverReport cover = cover_rectangle(space, x, radii, c.real("spacing"));
  report_cover(e, cover, verify_cover(space, cover, x, radii.values()));
}

void sparse_cmd(const RunConfig& c, Emitter& e) {
  const ProductSpace space = parse_product_space(c.text("space"));
  if (space.dimension() != 1) throw DomainError("sparse subsets are built in a single factor space");
  const RegularSpace& f = space.factor(0);
  const Point x = points_from_coords(space, c.reals("center"), 1)[0];
  const double radius = c.real("radius");
  const double r = c.real("spacing");
  std::optional<RandomStream> rng;
  if (c.has("seed")) rng.emplace(c.count("seed"), 0, StreamDomain::sparse);
  const std::vector<Point> pts = max_sparse_subset(f, x, radius, r, rng ? &*rng : nullptr);
  const SparseBounds b = sparse_count_bounds(f, radius, r);
  const bool sparse = is_sparse(f, pts, r);
  const double gap = max_probe_gap(f, pts, x, radius, r);
  const double n = static_cast<double>(pts.size());
  e.line({"quantity", "value"});
  e.quantity("count", n);
  e.quantity("lower", b.lower);
  e.quantity("upper", b.upper);
  e.quantity("sparse", sparse ? 1.0 : 0.0);
  e.quantity("max_probe_gap", gap);
  e.quantity("maximal", gap < r ? 1.0 : 0.0);
  if (!sparse) e.fail("two points closer than r");
  if (!(gap < r)) e.fail("a probe lies " + format_double(gap) + " from the set");
  if (n < b.lower || n > b.upper) e.fail("count outside the sparse-set bounds");
}

void mc_fiber_sum(const RunConfig& c, Emitter& e) {
  const ProductSpace space = parse_product_space(c.text("space"));
  const RadiusSchedule sched = parse_schedule(c.text("schedule"));
  require_dimension(space, sched);
  if (space.dimension() < 2) throw DomainError("fiber sums need at least two factors");
  const ProductSpace head = space.without_last();
  const std::vector<Point> anchor =
      c.has("anchor") ? points_from_coords(head, c.reals("anchor"), head.dimension()) : head.center();
  const OmegaStream stream(c.count("seed"), space);
  for (double u : c.reals("u")) {
    const FiberSumResult f = fiber_hit_sum(stream, sched, anchor, u, c.counts("checkpoints"));
    const std::string key = keyed("u", u);
    for (std::size_t i = 0; i < f.partials.size(); ++i) {
      e.stat(key, f.partials[i].n, f.partials[i].value, f.expectation_exact[i].value);
    }
    for (std::size_t i = 0; i < f.partials.size(); ++i) {
      e.stat(key + ":lower", f.partials[i].n, f.expectation_lower[i].value, f.expectation_exact[i].value);
      if (f.expectation_exact[i].value < f.expectation_lower[i].value * (1.0 - 1e-12)) {
        e.fail(key + ": exact expectation below the lower curve at N = " + std::to_string(f.partials[i].n));
      }
    }
    if (f.inconclusive()) e.note(key + ": no hits by the last checkpoint (inconclusive)");
  }
}

void mc_divergence(const RunConfig& c, Emitter& e) {
  const std::vector<double> p = expectations_from(c.text("expectations"));
  const std::vector<std::uint64_t> cps = c.has("checkpoints") ? c.counts("checkpoints") : std::vector<std::uint64_t>{};
  const TailBoundTable table = divergence_tail_bound_test(p, c.count("trials"), c.count("seed"), cps);
  for (const TailBoundEntry& row : table.entries) {
    e.stat("M=" + std::to_string(row.m), row.n, row.empirical, row.bound + 3.0 * row.sigma);
    if (!row.within()) {
      e.fail("N = " + std::to_string(row.n) + ", M = " + std::to_string(row.m) + ": " +
             format_double(row.empirical) + " > 2/M + 3 sigma");
    }
  }
  if (table.entries.empty()) e.note("no admissible M (half the expectation sum is below 1)");
}

void mc_density(const RunConfig& c, Emitter& e) {
  const ProductSpace space = parse_product_space(c.text("space"));
  const std::uint64_t horizon = c.count("horizon");
  std::vector<double> radii;
  if (c.has("schedule")) {
    const RadiusSchedule sched = parse_schedule(c.text("schedule"));
    require_dimension(space, sched);
    if (horizon > 100000) throw DomainError("ball hits are tracked up to a horizon of 100000");
    // the inscribed ball of the rectangle
    for (std::uint64_t n = 1; n <= horizon; ++n) {
      const RadiusTuple r = schedule_radii(sched, n);
      radii.push_back(*std::min_element(r.values().begin(), r.values().end()));
    }
  }
  const OmegaStream stream(c.count("seed"), space);
  const DensityReport rep = density_check(stream, radii, c.real("delta"), horizon);
  const double cells = static_cast<double>(rep.cells.size());
  const std::uint64_t half = horizon / 2;
  for (std::size_t k = 0; k < rep.cells.size(); ++k) {
    const DensityCell& cell = rep.cells[k];
    const std::string key = "cell=" + std::to_string(k);
    // cells carry equal mass
    e.stat(key, half, static_cast<double>(cell.count_half), static_cast<double>(half) / cells);
    e.stat(key, horizon, static_cast<double>(cell.count), static_cast<double>(horizon) / cells);
    if (!radii.empty()) e.stat("ball=" + std::to_string(k), horizon, static_cast<double>(cell.ball_hits), kNaN);
  }
  e.stat("min", half, static_cast<double>(rep.min_count_half), static_cast<double>(half) / cells);
  e.stat("min", horizon, static_cast<double>(rep.min_count), static_cast<double>(horizon) / cells);
  if (!rep.passed) {
    e.fail("occupancy: minimum cell count " + std::to_string(rep.min_count_half) + " at N/2, " +
           std::to_string(rep.min_count) + " at N");
  }
}

void mc_tail_cover(const RunConfig& c, Emitter& e) {
  const ProductSpace space = parse_product_space(c.text("space"));
  const RadiusSchedule sched = parse_schedule(c.text("schedule"));
  require_dimension(space, sched);
  const std::uint64_t first = c.counts("window")[0];
  const std::uint64_t last = c.counts("window")[1];
  if (first == 0 || first > last) throw DomainError("window must satisfy 1 <= N0 <= N1");
  std::vector<std::uint64_t> ends;
  if (c.has("checkpoints")) {
    ends = c.counts("checkpoints");
    for (std::size_t i = 0; i < ends.size(); ++i) {
      if (ends[i] < first || ends[i] > last || (i && ends[i] <= ends[i - 1])) {
        throw DomainError("checkpoints must increase strictly inside the window");
      }
    }
  } else {
    for (std::uint64_t n = 1; n < last; n *= 2) {
      if (n >= first) ends.push_back(n);
    }
    ends.push_back(last);
  }
  const OmegaStream stream(c.count("seed"), space);
  for (double t : c.reals("t")) {
    const TailCoverProfile prof = tail_cover_sum(stream, sched, t, first, last);
    const std::string key = keyed("t", t);
    CompensatedSum value, reference;
    std::size_t next = 0;
    for (const TailCoverRow& row : prof.rows) {
      value.add(row.term);
      reference.add(row.reference);
      if (row.term > row.reference) e.fail(key + ": cover term above 2^t C Phi at n = " + std::to_string(row.n));
      if (next < ends.size() && row.n == ends[next]) {
        e.stat(key, row.n, value.value(), reference.value());
        ++next;
      }
    }
    if (!prof.dominated()) e.fail(key + ": window sum above 2^t C sum Phi");
  }
}

void mc_verdict(const RunConfig& c, Emitter& e) {
  const ProductSpace space = parse_product_space(c.text("space"));
  const RadiusSchedule sched = parse_schedule(c.text("schedule"));
  require_dimension(space, sched);
  const auto* power = std::get_if<PowerLawSchedule>(&sched);
  if (power == nullptr) throw DomainError("verdicts need a power-law schedule");
  VerdictConfig vc;
  vc.tol = c.real_or("tol", vc.tol);
  vc.slope_tol = c.real_or("slope-tol", vc.slope_tol);
  vc.cover_window = c.count_or("cover-window", vc.cover_window);
  vc.fiber_horizon = c.count_or("fiber-horizon", vc.fiber_horizon);
  if (!(vc.tol > 0.0) || !(vc.slope_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (vc.cover_window < 8 || vc.fiber_horizon < 10) throw DomainError("cover-window >= 8 and fiber-horizon >= 10");
  const VerdictReport rep = dimension_verdict(*power, space, c.counts("seeds"), vc);
  e.line({"check", "status", "detail"});
  e.line({"predicted", format_double(rep.predicted), "closed_form=" + format_double(rep.closed_form)});
  e.record("predicted", 0, rep.predicted, kNaN, kNaN);
  for (const VerdictCheck& ch : rep.checks) {
    e.line({ch.name, std::string(status_name(ch.status)), ch.detail});
    if (ch.status == CheckStatus::fail) e.fail(ch.name + ": " + ch.detail);
  }
}

using Handler = void (*)(const RunConfig&, Emitter&);

Handler handler_for(const std::string& command) {
  static const std::map<std::string, Handler, std::less<>> table{
      {"svf eval", svf_eval},          {"svf profile", svf_profile_cmd}, {"dim predict", dim_predict},
      {"cover ball", cover_ball_cmd},  {"cover rect", cover_rect_cmd},   {"sparse", sparse_cmd},
      {"mc fiber-sum", mc_fiber_sum},  {"mc divergence", mc_divergence}, {"mc density", mc_density},
      {"mc tail-cover", mc_tail_cover}, {"mc verdict", mc_verdict},
  };
  const auto it = table.find(command);
  return it == table.end() ? nullptr : it->second;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& v) { return v.is_number() ? v.get<double>() : kNaN; }

std::string log_field(double v) { return v > 0.0 && std::isfinite(v) ? format_double(std::log(v)) : ""; }

}  // namespace

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  Emitter e(out);
  try {
    validate(config);
    Handler h = handler_for(config.command());
    if (h == nullptr) throw ConfigError(0, "unknown command '" + config.command() + "'");
    // the MC tables share one header
    if (config.command().rfind("mc ", 0) == 0 && config.command() != "mc verdict") {
      e.line({"key", "N", "statistic", "reference", "ratio"});
    }
    h(config, e);
  } catch (const Undecidable& ex) {
    out.status = kExitCheckFailed;
    out.messages.push_back(std::string("undecidable: ") + ex.what());
  } catch (const std::exception& ex) {
    // bad input of any kind; no partial table
    out = RunOutcome{};
    out.status = kExitInvalid;
    out.messages.push_back(std::string("invalid input: ") + ex.what());
  }
  return out;
}

std::string manifest_record(const RunConfig& config, const RunOutcome& outcome, double wall_seconds,
                            const std::string& timestamp) {
  json m;
  m["format"] = kManifestFormat;
  m["version"] = RunConfig::kVersion;
  m["operation"] = config.command();
  m["config"] = config.serialize();
  m["seed"] = config.has("seed") ? json(config.count("seed")) : json(nullptr);
  m["seeds"] = config.has("seeds") ? json(config.counts("seeds")) : json(nullptr);
  m["space"] = config.has("space") ? json(config.text("space")) : json(nullptr);
  m["schedule"] = config.has("schedule") ? json(config.text("schedule")) : json(nullptr);
  m["window"] = config.has("window") ? json(config.counts("window")) : json(nullptr);
  json constants = json::array();
  if (config.has("space")) {
    try {
      for (const RegularSpace& f : parse_product_space(config.text("space")).factors()) {
        constants.push_back({{"space", f.descriptor()}, {"c", f.c()}, {"s", f.s()}});
      }
    } catch (const DomainError&) {
      // invalid runs still get a manifest
    }
  }
  m["space_constants"] = constants;
  m["status"] = outcome.status;
  json stats = json::array();
  for (const StatRow& r : outcome.statistics) {
    stats.push_back({{"key", r.key},
                     {"n", r.n},
                     {"statistic", number_or_null(r.statistic)},
                     {"reference", number_or_null(r.reference)},
                     {"ratio", number_or_null(r.ratio)}});
  }
  m["statistics"] = stats;
  m["csv"] = outcome.csv;
  m["messages"] = outcome.messages;
  m["metadata"] = {{"wall_clock_seconds", wall_seconds}, {"timestamp", timestamp}};
  return m.dump();
}

ReportOutcome report(const std::vector<std::string>& manifest_lines) {
  ReportOutcome out;
  auto invalid = [&](const std::string& msg) {
    out = ReportOutcome{};
    out.status = kExitInvalid;
    out.messages.push_back("invalid input: " + msg);
    return out;
  };
  if (manifest_lines.empty()) return invalid("no manifests");

  struct Row {
    std::string schedule, key;
    std::uint64_t n;
    double reference = kNaN;
    std::map<std::uint64_t, double> by_seed;
  };
  std::vector<Row> rows;
  std::map<std::tuple<std::string, std::string, std::uint64_t>, std::size_t> index;
  std::vector<std::uint64_t> seeds;
  std::string operation, space;
  for (std::size_t i = 0; i < manifest_lines.size(); ++i) {
    const std::string where = "manifest " + std::to_string(i + 1) + ": ";
    json m;
    try {
      m = json::parse(manifest_lines[i]);
    } catch (const json::exception& ex) {
      return invalid(where + "not JSON (" + ex.what() + ")");
    }
    if (!m.is_object() || m.value("format", "") != kManifestFormat) return invalid(where + "not a run manifest");
    if (m.value("version", 0u) != RunConfig::kVersion) return invalid(where + "unsupported manifest version");
    const std::string op = m.value("operation", "");
    const std::string sp = m["space"].is_string() ? m["space"].get<std::string>() : "";
    if (i == 0) {
      operation = op;
      space = sp;
    } else if (op != operation) {
      return invalid(where + "operation '" + op + "' differs from '" + operation + "'");
    } else if (sp != space) {
      return invalid(where + "space '" + sp + "' differs from '" + space + "'");
    }
    if (!m["seed"].is_number_unsigned()) return invalid(where + "reports merge seeded runs only");
    const std::uint64_t seed = m["seed"].get<std::uint64_t>();
    if (std::find(seeds.begin(), seeds.end(), seed) != seeds.end()) {
      return invalid(where + "seed " + std::to_string(seed) + " appears twice");
    }
    seeds.push_back(seed);
    const std::string schedule = m["schedule"].is_string() ? m["schedule"].get<std::string>() : "";
    if (!m["statistics"].is_array()) return invalid(where + "missing statistics");
    for (const json& s : m["statistics"]) {
      const std::string key = s.value("key", "");
      const std::uint64_t n = s.value("n", std::uint64_t{0});
      const auto id = std::make_tuple(schedule, key, n);
      auto it = index.find(id);
      if (it == index.end()) {
        it = index.emplace(id, rows.size()).first;
        rows.push_back({schedule, key, n, kNaN, {}});
      }
      Row& row = rows[it->second];
      if (std::isnan(row.reference)) row.reference = number_or_nan(s["reference"]);
      row.by_seed[seed] = number_or_nan(s["statistic"]);
    }
  }

  std::vector<std::string> header{"schedule", "key", "N", "reference", "log_N", "log_reference"};
  for (std::uint64_t seed : seeds) {
    header.push_back("statistic_seed" + std::to_string(seed));
    header.push_back("log_statistic_seed" + std::to_string(seed));
  }
  out.csv += csv_line(header);
  for (const Row& row : rows) {
    std::vector<std::string> f{row.schedule, row.key, std::to_string(row.n),
                               std::isnan(row.reference) ? "" : format_double(row.reference),
                               log_field(static_cast<double>(row.n)), log_field(row.reference)};
    for (std::uint64_t seed : seeds) {
      const auto it = row.by_seed.find(seed);
      if (it == row.by_seed.end() || std::isnan(it->second)) {
        f.insert(f.end(), {"", ""});
      } else {
        f.push_back(format_double(it->second));
        f.push_back(log_field(it->second));
      }
    }
    out.csv += csv_line(f);
  }
  return out;
}

ReplayOutcome replay(const std::string& manifest_line) {
  ReplayOutcome out;
  try {
    const json m = json::parse(manifest_line);
    if (!m.is_object() || m.value("format", "") != kManifestFormat || !m["config"].is_string() ||
        !m["csv"].is_string()) {
      throw DomainError("not a run manifest");
    }
    out.recorded_csv = m["csv"].get<std::string>();
    out.rerun = run(parse_config(m["config"].get<std::string>()));
  } catch (const std::exception& ex) {
    out.status = kExitInvalid;
    out.messages.push_back(std::string("invalid input: ") + ex.what());
    return out;
  }
  if (out.rerun.csv != out.recorded_csv) {
    out.status = kExitCheckFailed;
    out.messages.push_back("CSV body differs from the recorded run");
  } else {
    out.messages.push_back("CSV body identical (" + std::to_string(out.recorded_csv.size()) + " bytes)");
  }
  return out;
}

}  // namespace limsup
