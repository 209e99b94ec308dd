#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "limsup/errors.hpp"

namespace limsup {

// Run configs are flat "key = value" text with '#' comments:
//
//   version = 1
//   command = mc fiber-sum
//   space = circle,circle
//   schedule = power:alphas=1,2
//   u = 0
//   checkpoints = 1000,100000
//   seed = 7

enum class FieldType { text, real, count, reals, counts };

using FieldValue = std::variant<std::string, double, std::uint64_t, std::vector<double>, std::vector<std::uint64_t>>;

struct FieldSpec {
  std::string_view key;
  FieldType type;
  std::string_view help;
};

// Every accepted key, in serialization order.
std::span<const FieldSpec> config_schema();
const FieldSpec* find_field(std::string_view key);

// Malformed config; line is 1-based, 0 when the problem is not tied to a line.
class ConfigError : public DomainError {
 public:
  ConfigError(int line, const std::string& what)
      : DomainError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class RunConfig {
 public:
  static constexpr std::uint64_t kVersion = 1;

  const std::string& command() const { return command_; }
  void set_command(std::string command) { command_ = std::move(command); }

  // Parses `raw` according to the key's schema type. ConfigError on unknown
  // keys or malformed values.
  void set_raw(std::string_view key, std::string_view raw, int line = 0);
  void set(std::string_view key, FieldValue value);
  void erase(std::string_view key) { fields_.erase(std::string(key)); }

  bool has(std::string_view key) const { return fields_.count(std::string(key)) != 0; }
  const std::map<std::string, FieldValue>& fields() const { return fields_; }

  const std::string& text(std::string_view key) const;
  double real(std::string_view key) const;
  std::uint64_t count(std::string_view key) const;
  const std::vector<double>& reals(std::string_view key) const;
  const std::vector<std::uint64_t>& counts(std::string_view key) const;

  double real_or(std::string_view key, double fallback) const { return has(key) ? real(key) : fallback; }
  std::uint64_t count_or(std::string_view key, std::uint64_t fallback) const {
    return has(key) ? count(key) : fallback;
  }

  // Canonical text; parse_config(serialize()) == *this.
  std::string serialize() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

 private:
  std::string command_;
  std::map<std::string, FieldValue> fields_;
};

RunConfig parse_config(std::string_view text);

// Subcommand names in the order the CLI lists them.
std::span<const std::string_view> command_names();

// Keys a command accepts: required ones first, then optional ones, then
// out and manifest.
std::vector<std::string_view> permitted_keys(std::string_view command);
bool is_required_key(std::string_view command, std::string_view key);

// Checks the key set against the command (required and permitted keys) and
// that descriptors parse. ConfigError naming the offending key.
void validate(const RunConfig& config);

}  // namespace limsup
