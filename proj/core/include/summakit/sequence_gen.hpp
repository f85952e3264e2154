#pragma once

// Seeded generators for sequence prefixes, window-length pairs (lambda, mu)
// with checked regime certificates, and lacunary pairs (theta, theta!).
// Randomness comes from CounterRng, so element j depends only on
// (seed, stream, j).

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "summakit/convergence.hpp"
#include "summakit/lacunary.hpp"
#include "summakit/orlicz.hpp"

namespace summakit::gen {

using convergence::WindowLengthRule;

/// Index sets used by SpikeOnSet.
struct Support {
    enum class Kind { Squares, Cubes, PowersOfTwo, Evens, Odds, Multiples, Bernoulli, Prefix, All, None };
    Kind kind = Kind::Squares;
    /// k for Multiples, p for Bernoulli, n for Prefix.
    double parameter = 0.0;

    [[nodiscard]] bool contains(std::int64_t j, std::uint64_t seed) const;
    [[nodiscard]] std::string describe() const;
};

[[nodiscard]] Support support_from_string(const std::string& text);

/// x_j = spike on the support, base elsewhere.
struct SpikeOnSet {
    Support support;
    double spike = 1.0;
    double base = 0.0;
};

/// x_j = -1 on the first half of each period, +1 on the second.
struct Oscillating {
    std::int64_t period = 2;
};

/// x_j = limit + amplitude * j^-power.
struct ConvergentPlusNoise {
    double limit = 0.0;
    double amplitude = 1.0;
    double power = 1.0;
};

/// x_j uniform on [-bound, bound].
struct BoundedRandom {
    double bound = 1.0;
};

struct Custom {
    std::vector<double> values;
};

using GeneratorKind = std::variant<SpikeOnSet, Oscillating, ConvergentPlusNoise, BoundedRandom, Custom>;

struct GeneratorSpec {
    GeneratorKind kind = SpikeOnSet{};
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
};

[[nodiscard]] std::string describe(const GeneratorSpec& spec);

/// Throws ConfigError on horizon < 1 or bad parameters; a Custom spec must
/// supply at least horizon values (extra values are dropped).
[[nodiscard]] orlicz::SequencePrefix gen_sequence(const GeneratorSpec& spec);

/// lambda_i = ceil(i/k), mu_i = i when alpha = beta; for alpha < beta both are
/// capped, lambda_i = min(i, cap), mu_i = min(i, 2 cap).
struct LiminfPositive {
    double alpha = 1.0;
    double beta = 1.0;
    std::int64_t k = 2;
    std::int64_t cap = 16;
};

/// mu_i / lambda_i^beta -> 1. beta = 1: mu_i = i, lambda_i = max(1, i - floor(sqrt i)).
/// beta < 1 forces lambda = mu = 1.
struct LimRatioOne {
    double alpha = 1.0;
    double beta = 1.0;
};

/// lambda_i = ceil(sqrt i), mu_i = i: liminf lambda^alpha / mu^beta = 0.
struct ViolatingLiminf {
    double alpha = 1.0;
    double beta = 1.0;
};

/// Explicit rules, certified by direct evaluation.
struct ExplicitPair {
    WindowLengthRule lambda = WindowLengthRule::identity();
    WindowLengthRule mu = WindowLengthRule::identity();
    double alpha = 1.0;
    double beta = 1.0;
};

using Regime = std::variant<LiminfPositive, LimRatioOne, ViolatingLiminf, ExplicitPair>;

[[nodiscard]] std::string regime_name(const Regime& regime);

/// Quantities measured over a closed index range [first, last].
struct PairCertificate {
    std::int64_t first = 0;
    std::int64_t last = 0;
    /// Both rules are windows (non-decreasing, 1 <= value <= i) and
    /// lambda_i <= mu_i on 1..horizon.
    bool windows_ok = false;
    /// min lambda_i^alpha / mu_i^beta over the range.
    double min_ratio = 0.0;
    /// max (mu_i - lambda_i) / mu_i^beta over the range.
    double max_excess = 0.0;
    /// max lambda_i / mu_i^beta over the range.
    double max_lambda_ratio = 0.0;
    /// max |mu_i / lambda_i^beta - 1| over the range, and over its second half.
    double ratio_envelope = 0.0;
    double ratio_envelope_late = 0.0;
    /// Bound promised by the regime (liminf bound or envelope); 0 when none.
    double declared = 0.0;
    /// The regime's hypothesis holds on the range.
    bool passed = false;
    std::string detail;
};

struct LambdaMuPair {
    WindowLengthRule lambda = WindowLengthRule::identity();
    WindowLengthRule mu = WindowLengthRule::identity();
    double alpha = 1.0;
    double beta = 1.0;
    Regime regime = ExplicitPair{};
    PairCertificate certificate;
};

/// Builds the pair for a regime and certifies it over [first, last]
/// (default: [horizon/2 + 1, horizon]). Throws ConfigError when
/// 0 < alpha <= beta <= 1 fails or the regime cannot be realized.
[[nodiscard]] LambdaMuPair gen_lambda_mu_pair(const Regime& regime, std::int64_t horizon,
                                              std::optional<std::pair<std::int64_t, std::int64_t>> range = std::nullopt);

/// Recomputes the certificate of a pair from its rules.
[[nodiscard]] PairCertificate certify_pair(const WindowLengthRule& lambda, const WindowLengthRule& mu, double alpha,
                                           double beta, const Regime& regime, std::int64_t horizon, std::int64_t first,
                                           std::int64_t last);

struct ThetaPair {
    lacunary::LacunaryTheta theta;
    lacunary::LacunaryTheta refined;
};

/// theta = geometric(base) covering the horizon, refined with one midpoint
/// per block.
[[nodiscard]] ThetaPair gen_theta_pair(std::int64_t base, std::int64_t horizon);

/// Instance `index` of a seeded corpus: sparse or dense spikes, oscillating,
/// convergent or bounded random, with parameters drawn from (seed, index).
/// Every corpus sequence is bounded by 3 in absolute value.
[[nodiscard]] GeneratorSpec corpus_instance(std::uint64_t seed, std::uint64_t index, std::int64_t horizon);

inline constexpr double kCorpusBound = 3.0;

}  // namespace summakit::gen
