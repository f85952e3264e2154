#include "summakit/lacunary.hpp"

#include <algorithm>
#include <string>

namespace summakit::lacunary {

namespace {

LacunarityEvidence evidence_for(const std::vector<std::int64_t>& boundaries, std::optional<std::int64_t> min_gap) {
    const auto blocks = static_cast<std::int64_t>(boundaries.size()) - 1;
    LacunarityEvidence evidence;
    evidence.threshold = min_gap.value_or(blocks);
    evidence.final_gap = blocks > 0 ? boundaries[blocks] - boundaries[blocks - 1] : 0;
    evidence.passed = blocks > 0 && evidence.final_gap >= evidence.threshold;
    return evidence;
}

void check_structure(const std::vector<std::int64_t>& boundaries) {
    using Failure = ThetaError::Failure;
    if (boundaries.size() < 2) {
        throw ThetaError(Failure::Empty, 0, "lacunary sequence needs j_0 = 0 and at least one more boundary");
    }
    if (boundaries.front() != 0) {
        throw ThetaError(Failure::FirstNotZero, 0, "lacunary sequence must start with j_0 = 0");
    }
    for (std::size_t r = 1; r < boundaries.size(); ++r) {
        if (boundaries[r] <= boundaries[r - 1]) {
            throw ThetaError(Failure::NotIncreasing, static_cast<std::int64_t>(r),
                             "lacunary sequence is not strictly increasing at position " + std::to_string(r) + " (" +
                                 std::to_string(boundaries[r - 1]) + " then " + std::to_string(boundaries[r]) + ")");
        }
    }
}

}  // namespace

LacunaryTheta LacunaryTheta::validate(std::vector<std::int64_t> boundaries, std::optional<std::int64_t> min_final_gap) {
    check_structure(boundaries);
    const auto evidence = evidence_for(boundaries, min_final_gap);
    if (!evidence.passed) {
        throw ThetaError(ThetaError::Failure::LacunarityEvidence, static_cast<std::int64_t>(boundaries.size()) - 1,
                         "no lacunarity evidence: final gap " + std::to_string(evidence.final_gap) +
                             " is below threshold " + std::to_string(evidence.threshold));
    }
    return LacunaryTheta(std::move(boundaries), evidence);
}

LacunaryTheta LacunaryTheta::structural(std::vector<std::int64_t> boundaries,
                                        std::optional<std::int64_t> min_final_gap) {
    check_structure(boundaries);
    const auto evidence = evidence_for(boundaries, min_final_gap);
    return LacunaryTheta(std::move(boundaries), evidence);
}

LacunaryTheta LacunaryTheta::geometric(std::int64_t base, std::int64_t count, std::int64_t scale) {
    if (base < 2 || count < 1 || scale < 1) {
        throw ValidationError("geometric lacunary sequence needs base >= 2, count >= 1, scale >= 1");
    }
    std::vector<std::int64_t> boundaries{0};
    std::int64_t value = scale;
    for (std::int64_t r = 1; r <= count; ++r) {
        if (value > (std::int64_t{1} << 61) / base) {
            throw ValidationError("geometric lacunary sequence overflows");
        }
        value *= base;
        boundaries.push_back(value);
    }
    return validate(std::move(boundaries));
}

LacunaryTheta LacunaryTheta::geometric_within(std::int64_t base, std::int64_t horizon) {
    if (base < 2 || horizon < base) {
        throw ValidationError("geometric_within needs base >= 2 and horizon >= base");
    }
    std::int64_t count = 0;
    for (std::int64_t value = 1; value <= horizon / base; value *= base) ++count;
    return geometric(base, count);
}

LacunaryTheta LacunaryTheta::factorial_gaps(std::int64_t count) {
    if (count < 1 || count > 19) {
        throw ValidationError("factorial_gaps needs 1 <= count <= 19");
    }
    std::vector<std::int64_t> boundaries{0};
    std::int64_t factorial = 1;
    for (std::int64_t r = 1; r <= count; ++r) {
        factorial *= r;
        boundaries.push_back(boundaries.back() + factorial);
    }
    return validate(std::move(boundaries));
}

BlockView LacunaryTheta::block(std::int64_t r) const {
    if (r < 1 || r > block_count()) {
        throw ValidationError("block index " + std::to_string(r) + " out of range");
    }
    BlockView view;
    view.r = r;
    view.lo = boundaries_[static_cast<std::size_t>(r - 1)];
    view.hi = boundaries_[static_cast<std::size_t>(r)];
    view.h = view.hi - view.lo;
    if (view.lo > 0) view.phi = Rational(view.hi, view.lo);
    return view;
}

std::vector<BlockView> LacunaryTheta::blocks() const {
    std::vector<BlockView> out;
    out.reserve(static_cast<std::size_t>(block_count()));
    for (std::int64_t r = 1; r <= block_count(); ++r) out.push_back(block(r));
    return out;
}

std::int64_t LacunaryTheta::block_of(std::int64_t index) const {
    if (index <= 0 || index > end()) {
        throw ValidationError("index " + std::to_string(index) + " outside (0, " + std::to_string(end()) + "]");
    }
    const auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), index);
    return static_cast<std::int64_t>(it - boundaries_.begin());
}

LacunaryTheta LacunaryTheta::truncated(std::int64_t limit) const {
    std::vector<std::int64_t> kept;
    for (auto b : boundaries_) {
        if (b > limit) break;
        kept.push_back(b);
    }
    return structural(std::move(kept));
}

LacunaryTheta refine(const LacunaryTheta& theta, std::span<const std::int64_t> insertions) {
    using Failure = ThetaError::Failure;
    std::vector<std::int64_t> merged = theta.boundaries();
    for (std::size_t k = 0; k < insertions.size(); ++k) {
        const auto point = insertions[k];
        if (point <= 0 || point >= theta.end()) {
            throw ThetaError(Failure::BadInsertion, static_cast<std::int64_t>(k),
                             "insertion " + std::to_string(point) + " lies outside (0, " + std::to_string(theta.end()) +
                                 ")");
        }
        if (std::binary_search(merged.begin(), merged.end(), point)) {
            throw ThetaError(Failure::BadInsertion, static_cast<std::int64_t>(k),
                             "insertion " + std::to_string(point) + " collides with an existing boundary");
        }
        merged.insert(std::upper_bound(merged.begin(), merged.end(), point), point);
    }
    return LacunaryTheta::structural(std::move(merged));
}

LacunaryTheta refine_midpoints(const LacunaryTheta& theta) {
    std::vector<std::int64_t> insertions;
    for (const auto& b : theta.blocks()) {
        if (b.h >= 2) insertions.push_back(b.lo + b.h / 2);
    }
    return refine(theta, insertions);
}

bool is_refinement(const LacunaryTheta& fine, const LacunaryTheta& coarse) {
    const auto limit = std::min(fine.end(), coarse.end());
    const auto& fb = fine.boundaries();
    for (auto b : coarse.boundaries()) {
        if (b > limit) break;
        if (!std::binary_search(fb.begin(), fb.end(), b)) return false;
    }
    return true;
}

}  // namespace summakit::lacunary
