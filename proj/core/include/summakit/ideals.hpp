#pragma once

// Computable admissible ideals over the naturals. Membership of an infinite
// set cannot be decided from a prefix, so every verdict is three-valued and is
// computed from the tail window (horizon/2, horizon] with a 10x gap between
// the In and Out thresholds.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace summakit::ideals {

enum class VerdictState { In, Out, Inconclusive };

[[nodiscard]] std::string_view to_string(VerdictState state) noexcept;
[[nodiscard]] VerdictState verdict_from_string(std::string_view text);

/// Finite sets. In when the tail holds at most one member (a singleton must
/// be admitted), Out when members fill >= 10% of the tail.
struct Finite {};

/// Sets of natural density zero. In when the tail density is <= tol, Out when
/// it is >= 10 * tol.
struct DensityZero {
    double tol = 0.01;
};

/// Sets A with sum_{j in A} weight(j) <= bound. Decided on the whole prefix,
/// never Inconclusive.
struct Summable {
    std::function<double(std::int64_t)> weight;
    double bound = 1.0;
    std::string weight_description;
};

using IdealKind = std::variant<Finite, DensityZero, Summable>;

class IdealOracle {
public:
    IdealOracle(IdealKind kind, std::int64_t horizon);

    static IdealOracle finite(std::int64_t horizon) { return {Finite{}, horizon}; }
    static IdealOracle density_zero(double tol, std::int64_t horizon) { return {DensityZero{tol}, horizon}; }
    /// weight(j) = 1 / j^power.
    static IdealOracle summable_power(double power, double bound, std::int64_t horizon);

    [[nodiscard]] const IdealKind& kind() const noexcept { return kind_; }
    [[nodiscard]] std::int64_t horizon() const noexcept { return horizon_; }
    [[nodiscard]] IdealOracle at_horizon(std::int64_t horizon) const { return {kind_, horizon}; }
    [[nodiscard]] std::string describe() const;
    /// Closed index range [first, last] whose members can change a verdict.
    [[nodiscard]] std::pair<std::int64_t, std::int64_t> inspected_range() const noexcept;

private:
    IdealKind kind_;
    std::int64_t horizon_;
};

/// Subset of {1, ..., horizon}.
class IndexSet {
public:
    explicit IndexSet(std::int64_t horizon);

    static IndexSet from_predicate(std::int64_t horizon, const std::function<bool(std::int64_t)>& predicate);
    static IndexSet from_members(std::int64_t horizon, const std::vector<std::int64_t>& members);

    [[nodiscard]] std::int64_t horizon() const noexcept { return static_cast<std::int64_t>(bits_.size()); }
    [[nodiscard]] bool contains(std::int64_t j) const noexcept {
        return j >= 1 && j <= horizon() && bits_[static_cast<std::size_t>(j - 1)] != 0;
    }
    void insert(std::int64_t j);
    void erase(std::int64_t j);
    [[nodiscard]] std::int64_t count() const noexcept;
    /// Members in [lo, hi].
    [[nodiscard]] std::int64_t count_in(std::int64_t lo, std::int64_t hi) const noexcept;
    [[nodiscard]] std::vector<std::int64_t> members() const;
    [[nodiscard]] bool is_subset_of(const IndexSet& other) const noexcept;
    [[nodiscard]] IndexSet united(const IndexSet& other) const;

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

struct MembershipVerdict {
    VerdictState state = VerdictState::Inconclusive;
    /// Tail density (Finite, DensityZero) or weighted sum (Summable).
    double statistic = 0.0;
    /// Largest statistic still judged In.
    double threshold_used = 0.0;
    /// Smallest statistic judged Out.
    double out_threshold = 0.0;
    std::int64_t tail_count = 0;
    std::int64_t tail_length = 0;
};

/// Deterministic three-valued verdict. Throws ConfigError when the horizon is
/// below 10 or the set's horizon differs from the oracle's.
[[nodiscard]] MembershipVerdict membership(const IdealOracle& ideal, const IndexSet& set);
/// Indicator must be a deterministic, side-effect free predicate on 1..horizon.
[[nodiscard]] MembershipVerdict membership(const IdealOracle& ideal,
                                           const std::function<bool(std::int64_t)>& indicator);

struct AdmissibilityReport {
    std::int64_t samples = 0;
    std::int64_t singleton_violations = 0;
    std::int64_t hereditary_violations = 0;
    std::int64_t union_violations = 0;
    std::vector<std::string> examples;

    [[nodiscard]] std::int64_t violations() const noexcept {
        return singleton_violations + hereditary_violations + union_violations;
    }
    [[nodiscard]] bool ok() const noexcept { return violations() == 0; }
};

/// Finite evidence that the oracle behaves like an admissible ideal: sampled
/// singletons are In, subsets of In sets are not Out, unions of two In sets
/// are not Out.
[[nodiscard]] AdmissibilityReport admissibility_selfcheck(const IdealOracle& ideal, std::int64_t samples,
                                                          std::uint64_t seed = 0);

}  // namespace summakit::ideals
