#include <random>
#include <set>

#include <gtest/gtest.h>

#include "summakit/lacunary.hpp"

using namespace summakit::lacunary;

namespace {

ThetaError::Failure failure_of(const std::vector<std::int64_t>& b) {
    try {
        (void)LacunaryTheta::validate(b);
    } catch (const ThetaError& e) {
        return e.failure();
    }
    ADD_FAILURE() << "no ThetaError";
    return ThetaError::Failure::Empty;
}

// Every coarse block equals the union of the fine blocks inside it.
bool blocks_are_unions(const LacunaryTheta& fine, const LacunaryTheta& coarse) {
    for (const auto& b : coarse.blocks()) {
        std::set<std::int64_t> covered;
        for (const auto& f : fine.blocks()) {
            if (f.lo >= b.lo && f.hi <= b.hi) {
                for (auto j = f.lo + 1; j <= f.hi; ++j) covered.insert(j);
            } else if (f.hi > b.lo && f.lo < b.hi) {
                return false;  // straddles a coarse boundary
            }
        }
        if (static_cast<std::int64_t>(covered.size()) != b.h) return false;
    }
    return true;
}

}  // namespace

TEST(Theta, ValidGeometric) {
    const auto t = LacunaryTheta::validate({0, 2, 4, 8, 16, 32});
    std::vector<std::int64_t> h;
    for (const auto& b : t.blocks()) h.push_back(b.h);
    EXPECT_EQ(h, (std::vector<std::int64_t>{2, 2, 4, 8, 16}));
    EXPECT_EQ(LacunaryTheta::geometric(2, 5), t);
    EXPECT_TRUE(t.evidence().passed);
}

TEST(Theta, RejectsConstantGaps) {
    EXPECT_EQ(failure_of({0, 1, 2, 3, 4}), ThetaError::Failure::LacunarityEvidence);
    EXPECT_NO_THROW(LacunaryTheta::structural({0, 1, 2, 3, 4}));
}

TEST(Theta, RejectsStructuralViolations) {
    EXPECT_EQ(failure_of({0, 3, 2}), ThetaError::Failure::NotIncreasing);
    EXPECT_EQ(failure_of({1, 2, 4}), ThetaError::Failure::FirstNotZero);
    EXPECT_EQ(failure_of({0}), ThetaError::Failure::Empty);
}

TEST(Blocks, Examples) {
    const auto t = LacunaryTheta::validate({0, 2, 4, 8});
    const auto b = t.blocks();
    ASSERT_EQ(b.size(), 3U);
    EXPECT_EQ(b[0].lo, 0);
    EXPECT_EQ(b[0].hi, 2);
    EXPECT_EQ(b[1].lo, 2);
    EXPECT_EQ(b[1].hi, 4);
    EXPECT_EQ(b[2].lo, 4);
    EXPECT_EQ(b[2].hi, 8);
    EXPECT_FALSE(b[0].phi.has_value());
    ASSERT_TRUE(b[2].phi.has_value());
    EXPECT_EQ(*b[2].phi, summakit::Rational(2, 1));
    EXPECT_EQ(t.block_of(5), 3);
    EXPECT_EQ(t.block_of(2), 1);

    const auto single = LacunaryTheta::structural({0, 1});
    ASSERT_EQ(single.blocks().size(), 1U);
    EXPECT_EQ(single.blocks()[0].h, 1);
}

TEST(Blocks, PartitionProperty) {
    const auto t = LacunaryTheta::factorial_gaps(7);
    std::vector<int> hits(static_cast<std::size_t>(t.end()) + 1, 0);
    for (const auto& b : t.blocks()) {
        for (auto j = b.lo + 1; j <= b.hi; ++j) ++hits[static_cast<std::size_t>(j)];
    }
    for (std::int64_t j = 1; j <= t.end(); ++j) {
        EXPECT_EQ(hits[static_cast<std::size_t>(j)], 1);
        const auto r = t.block_of(j);
        EXPECT_LT(t.block(r).lo, j);
        EXPECT_GE(t.block(r).hi, j);
    }
}

TEST(Refine, Examples) {
    const auto t = LacunaryTheta::validate({0, 2, 4, 8});
    const std::vector<std::int64_t> six{6};
    EXPECT_EQ(refine(t, six).boundaries(), (std::vector<std::int64_t>{0, 2, 4, 6, 8}));
    const std::vector<std::int64_t> four{4};
    EXPECT_THROW((void)refine(t, four), ThetaError);

    const auto coarse = LacunaryTheta::structural({0, 4, 16});
    const std::vector<std::int64_t> ins{2, 8};
    const auto fine = refine(coarse, ins);
    EXPECT_EQ(fine.boundaries(), (std::vector<std::int64_t>{0, 2, 4, 8, 16}));
    EXPECT_TRUE(blocks_are_unions(fine, coarse));
}

TEST(Refine, IsRefinementExamples) {
    const auto a = LacunaryTheta::structural({0, 2, 4, 6, 8});
    const auto b = LacunaryTheta::structural({0, 2, 4, 8});
    const auto c = LacunaryTheta::structural({0, 3, 8});
    EXPECT_TRUE(is_refinement(a, b));
    EXPECT_FALSE(is_refinement(b, c));
    EXPECT_TRUE(is_refinement(b, b));
}

TEST(Refine, RoundTripOnRandomInsertions) {
    std::mt19937_64 rng(5);
    const auto theta = LacunaryTheta::geometric(3, 8);
    for (int trial = 0; trial < 100; ++trial) {
        std::set<std::int64_t> picks;
        const auto& bounds = theta.boundaries();
        for (int k = 0; k < 6; ++k) {
            const auto p = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(theta.end() - 1));
            if (!std::binary_search(bounds.begin(), bounds.end(), p)) picks.insert(p);
        }
        const std::vector<std::int64_t> ins(picks.begin(), picks.end());
        const auto fine = refine(theta, ins);
        EXPECT_TRUE(is_refinement(fine, theta));
        EXPECT_TRUE(blocks_are_unions(fine, theta));
    }
    EXPECT_TRUE(is_refinement(refine_midpoints(theta), theta));
}

TEST(Theta, GeometricWithinAndTruncation) {
    const auto t = LacunaryTheta::geometric_within(2, 10000);
    EXPECT_EQ(t.end(), 8192);
    EXPECT_LE(t.truncated(100).end(), 100);
    EXPECT_EQ(LacunaryTheta::factorial_gaps(4).boundaries(), (std::vector<std::int64_t>{0, 1, 3, 9, 33}));
}
