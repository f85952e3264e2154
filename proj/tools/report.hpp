#pragma once

// JSON serialization of results. Every report is an envelope
// {schema_version, version, command, config, result}; keys are emitted in
// sorted order, so equal inputs give byte-identical text.

#include <string>

#include "config.hpp"
#include "summakit/convergence.hpp"
#include "summakit/ideals.hpp"
#include "summakit/orlicz.hpp"
#include "summakit/sequence_gen.hpp"
#include "summakit/theorem_lab.hpp"

namespace summakit::cli {

inline constexpr int kSchemaVersion = 1;

[[nodiscard]] const char* toolkit_version() noexcept;

[[nodiscard]] Json envelope(const std::string& command, const Json& config, Json result);
[[nodiscard]] std::string render(const Json& report);

[[nodiscard]] Json to_json(const ideals::MembershipVerdict& v);
[[nodiscard]] Json to_json(const convergence::ConvergenceVerdict& v);
[[nodiscard]] Json to_json(const orlicz::LuxemburgResult& r);
[[nodiscard]] Json to_json(const orlicz::OrliczNormResult& r);
[[nodiscard]] Json to_json(const orlicz::ConjugateResult& r);
[[nodiscard]] Json to_json(const gen::PairCertificate& c);
[[nodiscard]] Json to_json(const lab::LabReport& r);

}  // namespace summakit::cli
