#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffprog/field.hpp"
#include "json.hpp"

namespace ffprog::harness {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum class OptType { Int, Real, Text, Flag };

struct OptionSpec {
  std::string name;
  OptType type = OptType::Text;
  nlohmann::json default_value;  // null means "unset"
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
};

/// Every experiment subcommand with its options and defaults.
const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(std::string_view name);

/// Defaults, then `file` (a JSON object), then `flags`. Unknown keys and
/// values of the wrong type throw Error(Usage). Numeric options also accept
/// numeric strings such as "1e8".
nlohmann::json resolve_config(const CommandSpec& spec, const nlohmann::json& file, const nlohmann::json& flags);

struct Outcome {
  std::vector<nlohmann::json> records;  // payloads in canonical cell order
  std::vector<std::string> failures;    // failed property or bound checks
  std::vector<std::string> warnings;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  std::uint64_t seed = 0;
};

struct RunOptions {
  unsigned jobs = 1;
  bool timing = false;  // adds wall-clock fields, which breaks bit-identical output
};

/// Runs one subcommand on a resolved config. A missing seed is drawn from
/// std::random_device and reported in Outcome::seed. Invalid inputs surface as
/// ffprog::Error.
Outcome run_command(std::string_view command, const nlohmann::json& config, const RunOptions& options);

/// {"schema":1,"version":..,"command":..,"seed":..,"config":{..}} merged with
/// the payload; the payload's own keys must not collide with these.
nlohmann::json envelope(std::string_view command, const nlohmann::json& config, std::uint64_t seed,
                        const nlohmann::json& payload);

/// Checks the envelope fields and their types. On failure `why` names the
/// first problem.
bool validate_record(const nlohmann::json& record, std::string* why = nullptr);

/// Set sources:  random:DENSITY[:seedN]  |  explicit:i,j,...  |  file:PATH  |  full  |  empty.
/// Files hold a JSON list (indices or coefficient tuples) or one element per
/// line as whitespace/comma separated coefficients c_0 .. c_{k-1}.
/// `seed` is used by random sources without their own seed. Returns sorted,
/// deduplicated element indices.
std::vector<std::uint64_t> load_set(std::string_view source, const FieldSpec& field, std::uint64_t seed);

/// Seed embedded in a random:..:seedN source, if any.
std::optional<std::uint64_t> embedded_seed(std::string_view source);

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

/// Comma separated, quoted when needed.
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace ffprog::harness
