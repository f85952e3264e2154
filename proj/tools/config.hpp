#pragma once

// Run configuration: one JSON document with nested sections. Each command
// starts from its defaults, then merges the config file, the SUMMAKIT_SEED
// environment variable and finally command-line flags, and echoes the result
// into its report.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "summakit/convergence.hpp"
#include "summakit/ideals.hpp"
#include "summakit/lacunary.hpp"
#include "summakit/orlicz.hpp"
#include "summakit/sequence_gen.hpp"
#include "summakit/theorem_lab.hpp"

namespace summakit::cli {

using Json = nlohmann::json;

/// Defaults for a command ("norm", "conjugate", "density", "converge",
/// "verify", "gen").
[[nodiscard]] Json default_config(const std::string& command);

/// Parses a config file; syntax errors become ConfigError.
[[nodiscard]] Json load_config_file(const std::string& path);

/// Sets the value at a dotted path ("converge.gamma"). The text is parsed as
/// JSON when possible and kept as a string otherwise.
void set_dotted(Json& config, const std::string& path, const std::string& text);

[[nodiscard]] std::int64_t horizon_of(const Json& config);
[[nodiscard]] std::uint64_t seed_of(const Json& config);

[[nodiscard]] orlicz::OrliczSpec build_spec(const Json& j);
[[nodiscard]] orlicz::MusielakFamily build_family(const Json& j);
[[nodiscard]] ideals::IdealOracle build_ideal(const Json& j, std::int64_t horizon);
[[nodiscard]] convergence::WindowLengthRule build_window_rule(const Json& j);
[[nodiscard]] lacunary::LacunaryTheta build_theta(const Json& j);
[[nodiscard]] convergence::WindowScheme build_scheme(const Json& windows, const Json& theta, std::int64_t horizon);
[[nodiscard]] gen::GeneratorSpec build_generator(const Json& j, std::uint64_t seed, std::int64_t horizon);
/// Reads a CSV file or runs the generator described by the "sequence" section.
[[nodiscard]] orlicz::SequencePrefix build_sequence(const Json& j, std::uint64_t seed, std::int64_t horizon);
[[nodiscard]] gen::Regime build_regime(const Json& j, double alpha, double beta);
[[nodiscard]] lab::TheoremCase build_theorem_case(const Json& config);

/// Typed accessors that turn JSON type errors into ConfigError naming the key.
[[nodiscard]] double get_double(const Json& j, const std::string& key);
[[nodiscard]] std::int64_t get_int(const Json& j, const std::string& key);
[[nodiscard]] std::string get_string(const Json& j, const std::string& key);
[[nodiscard]] bool get_bool(const Json& j, const std::string& key);

}  // namespace summakit::cli
