#include "limsup/config.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "limsup/format.hpp"
#include "limsup/parse.hpp"
#include "limsup/schedule.hpp"
#include "limsup/spaces.hpp"

namespace limsup {

namespace {

constexpr std::array<FieldSpec, 27> kSchema{{
    {"space", FieldType::text, "product space, e.g. circle,cantor:1/3"},
    {"schedule", FieldType::text, "radius schedule descriptor (power:... or explicit:...)"},
    {"body", FieldType::text, "documentation tag: rectangle or ellipsoid"},
    {"r", FieldType::reals, "radius tuple"},
    {"s", FieldType::reals, "regularity exponents"},
    {"t", FieldType::reals, "exponents t"},
    {"u", FieldType::reals, "fiber exponents u"},
    {"method", FieldType::text, "closed-form, series or closed-form,series"},
    {"tol", FieldType::real, "bisection tolerance"},
    {"center", FieldType::reals, "ball or rectangle center coordinates"},
    {"anchor", FieldType::reals, "fiber anchor x' (d - 1 coordinates)"},
    {"radius", FieldType::real, "ball radius R"},
    {"radii", FieldType::reals, "rectangle radii"},
    {"spacing", FieldType::real, "cover / sparse radius r"},
    {"expectations", FieldType::text, "harmonic:N, constant:p:N or a list p_1,p_2,..."},
    {"trials", FieldType::count, "number of trials"},
    {"delta", FieldType::real, "grid scale"},
    {"horizon", FieldType::count, "horizon N"},
    {"checkpoints", FieldType::counts, "strictly increasing N values"},
    {"window", FieldType::counts, "N0,N1"},
    {"seed", FieldType::count, "run seed"},
    {"seeds", FieldType::counts, "seeds for multi-seed runs"},
    {"slope-tol", FieldType::real, "growth slope tolerance"},
    {"cover-window", FieldType::count, "tail-cover window end for verdicts"},
    {"fiber-horizon", FieldType::count, "fiber-sum horizon for verdicts"},
    {"out", FieldType::text, "CSV output path"},
    {"manifest", FieldType::text, "manifest path (one JSON line appended per run)"},
}};

constexpr std::array<std::string_view, 11> kCommands{
    "svf eval",      "svf profile", "dim predict",   "cover ball", "cover rect", "sparse",
    "mc fiber-sum",  "mc divergence", "mc density", "mc tail-cover", "mc verdict"};

struct CommandKeys {
  std::string_view command;
  std::vector<std::string_view> required;
  std::vector<std::string_view> optional;
};

const std::vector<CommandKeys>& command_keys() {
  static const std::vector<CommandKeys> keys{
      {"svf eval", {"r", "s", "t"}, {}},
      {"svf profile", {"r", "s"}, {}},
      {"dim predict", {"schedule"}, {"s", "method", "tol", "body"}},
      {"cover ball", {"space", "center", "radius", "spacing"}, {}},
      {"cover rect", {"space", "center", "radii", "spacing"}, {}},
      {"sparse", {"space", "center", "radius", "spacing"}, {"seed"}},
      {"mc fiber-sum", {"space", "schedule", "u", "checkpoints", "seed"}, {"anchor"}},
      {"mc divergence", {"expectations", "trials", "seed"}, {"checkpoints"}},
      {"mc density", {"space", "delta", "horizon", "seed"}, {"schedule"}},
      {"mc tail-cover", {"space", "schedule", "t", "window", "seed"}, {"checkpoints"}},
      {"mc verdict", {"space", "schedule", "seeds"}, {"tol", "slope-tol", "cover-window", "fiber-horizon"}},
  };
  return keys;
}

std::string type_name(FieldType t) {
  switch (t) {
    case FieldType::text:
      return "text";
    case FieldType::real:
      return "number";
    case FieldType::count:
      return "non-negative integer";
    case FieldType::reals:
      return "list of numbers";
    case FieldType::counts:
      return "list of non-negative integers";
  }
  return "?";
}

bool type_matches(FieldType t, const FieldValue& v) {
  switch (t) {
    case FieldType::text:
      return std::holds_alternative<std::string>(v);
    case FieldType::real:
      return std::holds_alternative<double>(v);
    case FieldType::count:
      return std::holds_alternative<std::uint64_t>(v);
    case FieldType::reals:
      return std::holds_alternative<std::vector<double>>(v);
    case FieldType::counts:
      return std::holds_alternative<std::vector<std::uint64_t>>(v);
  }
  return false;
}

std::string render(const FieldValue& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(std::uint64_t n) const { return std::to_string(n); }
    std::string operator()(const std::vector<double>& xs) const { return join_doubles(xs); }
    std::string operator()(const std::vector<std::uint64_t>& xs) const {
      std::string out;
      for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
      return out;
    }
  };
  return std::visit(Visitor{}, v);
}

template <class T>
const T& get_as(const std::map<std::string, FieldValue>& fields, std::string_view key) {
  const auto it = fields.find(std::string(key));
  if (it == fields.end()) throw ConfigError(0, "missing '" + std::string(key) + "'");
  const T* p = std::get_if<T>(&it->second);
  if (p == nullptr) throw ContractViolation("config key '" + std::string(key) + "' read with the wrong type");
  return *p;
}

}  // namespace

std::span<const FieldSpec> config_schema() { return kSchema; }

const FieldSpec* find_field(std::string_view key) {
  for (const FieldSpec& f : kSchema) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

std::span<const std::string_view> command_names() { return kCommands; }

void RunConfig::set_raw(std::string_view key, std::string_view raw, int line) {
  const FieldSpec* spec = find_field(key);
  if (spec == nullptr) throw ConfigError(line, "unknown key '" + std::string(key) + "'");
  const std::string value = trim(raw);
  try {
    switch (spec->type) {
      case FieldType::text:
        if (value.empty()) throw DomainError("empty value");
        fields_[std::string(key)] = value;
        break;
      case FieldType::real:
        fields_[std::string(key)] = parse_double(value);
        break;
      case FieldType::count:
        fields_[std::string(key)] = parse_uint(value);
        break;
      case FieldType::reals: {
        std::vector<double> xs = parse_double_list(value);
        if (xs.empty()) throw DomainError("empty list");
        fields_[std::string(key)] = std::move(xs);
        break;
      }
      case FieldType::counts: {
        std::vector<std::uint64_t> xs = parse_uint_list(value);
        if (xs.empty()) throw DomainError("empty list");
        fields_[std::string(key)] = std::move(xs);
        break;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(line, "key '" + std::string(key) + "' expects a " + type_name(spec->type) + ": " + e.what());
  }
}

void RunConfig::set(std::string_view key, FieldValue value) {
  const FieldSpec* spec = find_field(key);
  if (spec == nullptr) throw ConfigError(0, "unknown key '" + std::string(key) + "'");
  if (!type_matches(spec->type, value)) {
    throw ConfigError(0, "key '" + std::string(key) + "' expects a " + type_name(spec->type));
  }
  fields_[std::string(key)] = std::move(value);
}

const std::string& RunConfig::text(std::string_view key) const { return get_as<std::string>(fields_, key); }
double RunConfig::real(std::string_view key) const { return get_as<double>(fields_, key); }
std::uint64_t RunConfig::count(std::string_view key) const { return get_as<std::uint64_t>(fields_, key); }
const std::vector<double>& RunConfig::reals(std::string_view key) const {
  return get_as<std::vector<double>>(fields_, key);
}
const std::vector<std::uint64_t>& RunConfig::counts(std::string_view key) const {
  return get_as<std::vector<std::uint64_t>>(fields_, key);
}

std::string RunConfig::serialize() const {
  std::string out = "version = " + std::to_string(kVersion) + "\n";
  out += "command = " + command_ + "\n";
  for (const FieldSpec& f : kSchema) {
    const auto it = fields_.find(std::string(f.key));
    if (it != fields_.end()) out += std::string(f.key) + " = " + render(it->second) + "\n";
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  bool have_version = false, have_command = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (!seen.insert(key).second) throw ConfigError(line_no, "duplicate key '" + key + "'");
    if (key == "version") {
      std::uint64_t v = 0;
      try {
        v = parse_uint(value);
      } catch (const DomainError&) {
        throw ConfigError(line_no, "version must be an integer");
      }
      if (v != RunConfig::kVersion) {
        throw ConfigError(line_no, "unsupported config version " + std::to_string(v) + " (expected " +
                                       std::to_string(RunConfig::kVersion) + ")");
      }
      have_version = true;
    } else if (key == "command") {
      if (std::find(kCommands.begin(), kCommands.end(), value) == kCommands.end()) {
        throw ConfigError(line_no, "unknown command '" + value + "'");
      }
      cfg.set_command(value);
      have_command = true;
    } else {
      cfg.set_raw(key, value, line_no);
    }
  }
  if (!have_version) throw ConfigError(0, "missing 'version'");
  if (!have_command) throw ConfigError(0, "missing 'command'");
  return cfg;
}

std::vector<std::string_view> permitted_keys(std::string_view command) {
  for (const CommandKeys& k : command_keys()) {
    if (k.command != command) continue;
    std::vector<std::string_view> out = k.required;
    out.insert(out.end(), k.optional.begin(), k.optional.end());
    out.push_back("out");
    out.push_back("manifest");
    return out;
  }
  return {};
}

bool is_required_key(std::string_view command, std::string_view key) {
  for (const CommandKeys& k : command_keys()) {
    if (k.command == command) return std::find(k.required.begin(), k.required.end(), key) != k.required.end();
  }
  return false;
}

void validate(const RunConfig& config) {
  const auto& table = command_keys();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const CommandKeys& k) { return k.command == config.command(); });
  if (it == table.end()) throw ConfigError(0, "unknown command '" + config.command() + "'");
  for (std::string_view key : it->required) {
    if (!config.has(key)) throw ConfigError(0, "command '" + config.command() + "' needs '" + std::string(key) + "'");
  }
  for (const auto& [key, value] : config.fields()) {
    if (key == "out" || key == "manifest") continue;
    const bool known = std::find(it->required.begin(), it->required.end(), key) != it->required.end() ||
                       std::find(it->optional.begin(), it->optional.end(), key) != it->optional.end();
    if (!known) throw ConfigError(0, "key '" + key + "' does not apply to '" + config.command() + "'");
  }
  try {
    if (config.has("space")) parse_product_space(config.text("space"));
    if (config.has("schedule")) parse_schedule(config.text("schedule"));
  } catch (const DomainError& e) {
    throw ConfigError(0, e.what());
  }
  if (config.has("method")) {
    for (const std::string& m : split(config.text("method"), ',')) {
      if (m != "closed-form" && m != "series") throw ConfigError(0, "unknown method '" + m + "'");
    }
  }
  if (config.has("body")) {
    const std::string& b = config.text("body");
    if (b != "rectangle" && b != "ellipsoid") throw ConfigError(0, "body must be rectangle or ellipsoid");
  }
  if (config.has("window") && config.counts("window").size() != 2) throw ConfigError(0, "window needs N0,N1");
}

}  // namespace limsup
