#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "summakit/errors.hpp"
#include "summakit/exact.hpp"

namespace summakit::lacunary {

/// Finite evidence for h_r -> infinity: the final gap reaches a threshold.
/// This is evidence at the available length, not a proof of the limit.
struct LacunarityEvidence {
    std::int64_t final_gap = 0;
    std::int64_t threshold = 0;
    bool passed = false;
};

/// Block J_r = (lo, hi] of a lacunary sequence.
struct BlockView {
    std::int64_t r = 0;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t h = 0;
    /// j_r / j_{r-1}; absent for r = 1 because j_0 = 0.
    std::optional<Rational> phi;
};

class ThetaError : public ValidationError {
public:
    enum class Failure { Empty, FirstNotZero, NotIncreasing, LacunarityEvidence, BadInsertion };

    ThetaError(Failure failure, std::int64_t index, const std::string& what)
        : ValidationError(what), failure_(failure), index_(index) {}

    [[nodiscard]] Failure failure() const noexcept { return failure_; }
    /// Position in the boundary (or insertion) list that failed.
    [[nodiscard]] std::int64_t index() const noexcept { return index_; }

private:
    Failure failure_;
    std::int64_t index_;
};

/// Validated boundaries 0 = j_0 < j_1 < ... < j_R.
class LacunaryTheta {
public:
    /// Checks j_0 = 0, strict increase and lacunarity evidence
    /// (h_R >= min_final_gap, default R). Throws ThetaError.
    static LacunaryTheta validate(std::vector<std::int64_t> boundaries,
                                  std::optional<std::int64_t> min_final_gap = std::nullopt);
    /// Structural checks only; the lacunarity evidence is recorded, not enforced.
    static LacunaryTheta structural(std::vector<std::int64_t> boundaries,
                                    std::optional<std::int64_t> min_final_gap = std::nullopt);

    /// (0, scale*base, scale*base^2, ..., scale*base^count).
    static LacunaryTheta geometric(std::int64_t base, std::int64_t count, std::int64_t scale = 1);
    /// Longest geometric(base) sequence with j_R <= horizon.
    static LacunaryTheta geometric_within(std::int64_t base, std::int64_t horizon);
    /// Gaps h_r = r!.
    static LacunaryTheta factorial_gaps(std::int64_t count);

    [[nodiscard]] const std::vector<std::int64_t>& boundaries() const noexcept { return boundaries_; }
    [[nodiscard]] std::int64_t block_count() const noexcept {
        return static_cast<std::int64_t>(boundaries_.size()) - 1;
    }
    /// j_R.
    [[nodiscard]] std::int64_t end() const noexcept { return boundaries_.back(); }
    [[nodiscard]] const LacunarityEvidence& evidence() const noexcept { return evidence_; }

    [[nodiscard]] BlockView block(std::int64_t r) const;
    [[nodiscard]] std::vector<BlockView> blocks() const;
    /// Block index r with index in J_r; index must lie in (0, j_R].
    [[nodiscard]] std::int64_t block_of(std::int64_t index) const;
    /// Prefix of this sequence whose final boundary does not exceed limit.
    [[nodiscard]] LacunaryTheta truncated(std::int64_t limit) const;

    friend bool operator==(const LacunaryTheta& a, const LacunaryTheta& b) noexcept {
        return a.boundaries_ == b.boundaries_;
    }

private:
    explicit LacunaryTheta(std::vector<std::int64_t> boundaries, LacunarityEvidence evidence)
        : boundaries_(std::move(boundaries)), evidence_(evidence) {}

    std::vector<std::int64_t> boundaries_;
    LacunarityEvidence evidence_;
};

/// Inserts interior points into the blocks of theta. Every insertion must lie
/// strictly inside some block and not collide with an existing boundary.
[[nodiscard]] LacunaryTheta refine(const LacunaryTheta& theta, std::span<const std::int64_t> insertions);

/// Inserts the integer midpoint of every block of length >= 2.
[[nodiscard]] LacunaryTheta refine_midpoints(const LacunaryTheta& theta);

/// True iff every boundary of coarse up to min(fine.end(), coarse.end()) is a
/// boundary of fine.
[[nodiscard]] bool is_refinement(const LacunaryTheta& fine, const LacunaryTheta& coarse);

}  // namespace summakit::lacunary
