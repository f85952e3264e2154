#pragma once

// Empirical checks of the inclusion theorems at a finite horizon. For every
// generated instance the lab evaluates the theorem's antecedent and
// consequent testers and classifies the pair; a counterexample needs a
// confident In for the antecedent and a confident Out for the consequent.
//
// The theorems quantify over all thresholds, so a finite test has to pair a
// consequent threshold with an antecedent threshold. The lab derives that
// pairing from the window inequalities behind each inclusion, using the
// certificate values measured on the instance (tail liminf ratio b, tail
// excess e, term bound Mmax). Antecedent thresholds are never larger than the
// consequent ones.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "summakit/convergence.hpp"
#include "summakit/ideals.hpp"
#include "summakit/lacunary.hpp"
#include "summakit/orlicz.hpp"
#include "summakit/sequence_gen.hpp"

namespace summakit::lab {

enum class TheoremId { T1, T2, T3a, T3b, T4, T5, T6, T7, C1 };

[[nodiscard]] std::string_view to_string(TheoremId id) noexcept;
[[nodiscard]] TheoremId theorem_from_string(std::string_view text);
[[nodiscard]] const std::vector<TheoremId>& all_theorems();

/// A hypothesis certificate could not be established; the run is aborted.
class CertificateError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct TheoremCase {
    TheoremId id = TheoremId::T1;
    double alpha = 1.0;
    double beta = 1.0;
    /// Window pair regime; defaults to the theorem's hypothesis regime.
    std::optional<gen::Regime> regime;
    /// Defaults: Identity (power_ramp(2, 1) for C1).
    std::optional<orlicz::MusielakFamily> family;
    ideals::IdealKind ideal = ideals::DensityZero{0.01};
    /// Term threshold of the statistical testers.
    double gamma = 0.5;
    /// Window density threshold of the statistical testers.
    double xi = 0.1;
    /// Window mean threshold of the summation testers.
    double gamma_w = 0.25;
    std::int64_t instances = 200;
    std::int64_t horizon = 10000;
    std::uint64_t seed = 1;
    /// T5: theta and its refinement; default geometric(2) and its midpoints.
    std::optional<lacunary::LacunaryTheta> theta;
    std::optional<lacunary::LacunaryTheta> refined;
    /// Swap the roles of the two window families on crafted instances. A
    /// sound lab must report counterexamples here.
    bool negative_control = false;
};

/// The regime a theorem's hypothesis needs.
[[nodiscard]] gen::Regime default_regime(TheoremId id, double alpha, double beta);

enum class Classification { Consistent, Counterexample, Inconclusive, Strict };

[[nodiscard]] std::string_view to_string(Classification c) noexcept;

/// Thresholds and measured quantities that justify one instance.
struct InstanceCertificate {
    /// min lambda^alpha / mu^beta over the inspected range.
    double min_ratio = 0.0;
    /// max (mu - lambda) / mu^beta over the inspected range.
    double max_excess = 0.0;
    /// Largest term M_j(|x_j - Z| / rho_j).
    double term_bound = 0.0;
    /// sup |x_j|.
    double sup_abs = 0.0;
    double antecedent_gamma = 0.0;
    double antecedent_xi = 0.0;
    double consequent_gamma = 0.0;
    double consequent_xi = 0.0;
};

struct SideResult {
    std::string tester;
    std::string windows;
    ideals::VerdictState state = ideals::VerdictState::Inconclusive;
    double statistic = 0.0;
    std::int64_t tail_count = 0;
    std::int64_t tail_length = 0;
};

struct InstanceRecord {
    std::int64_t id = 0;
    std::string generator;
    double target = 0.0;
    InstanceCertificate certificate;
    SideResult antecedent;
    SideResult consequent;
    Classification classification = Classification::Inconclusive;
};

struct LabTotals {
    std::int64_t instances = 0;
    std::int64_t consistent = 0;
    std::int64_t counterexamples = 0;
    std::int64_t inconclusive = 0;
    std::int64_t strict = 0;
};

struct LabReport {
    TheoremCase config;
    std::string mode;  // "forward", "converse" or "negative_control"
    std::string statement;
    std::string family;
    std::string ideal;
    std::string lambda;
    std::string mu;
    gen::PairCertificate pair_certificate;
    std::vector<InstanceRecord> records;
    LabTotals totals;

    /// "0 confident counterexamples in N instances" style summary.
    [[nodiscard]] std::string summary() const;
};

/// Runs the forward check. jobs > 1 evaluates instances on that many threads;
/// records are always in instance order. Throws CertificateError when a
/// hypothesis certificate fails.
[[nodiscard]] LabReport verify_theorem(const TheoremCase& theorem, int jobs = 1);

/// Looks for instances with a confident In consequent and a confident Out
/// antecedent. These show the inclusion is strict; they are not failures.
[[nodiscard]] LabReport converse_probe(const TheoremCase& theorem, int jobs = 1);

}  // namespace summakit::lab
