#include <gtest/gtest.h>

#include "summakit/errors.hpp"
#include "summakit/theorem_lab.hpp"

using namespace summakit::lab;
using summakit::ideals::VerdictState;

namespace {

TheoremCase small_case(TheoremId id) {
    TheoremCase c;
    c.id = id;
    c.instances = 40;
    c.horizon = 2000;
    c.seed = 5;
    return c;
}

void expect_sound(const LabReport& r) {
    for (const auto& rec : r.records) {
        if (rec.classification == Classification::Counterexample) {
            EXPECT_EQ(rec.antecedent.state, VerdictState::In);
            EXPECT_EQ(rec.consequent.state, VerdictState::Out);
        }
    }
}

}  // namespace

TEST(Lab, TheoremIdsRoundTrip) {
    for (auto id : all_theorems()) EXPECT_EQ(theorem_from_string(to_string(id)), id);
    EXPECT_THROW((void)theorem_from_string("T9"), summakit::ConfigError);
}

class EveryTheorem : public ::testing::TestWithParam<TheoremId> {};

TEST_P(EveryTheorem, NoConfidentCounterexamples) {
    const auto r = verify_theorem(small_case(GetParam()));
    EXPECT_EQ(r.totals.counterexamples, 0) << r.summary();
    EXPECT_EQ(r.totals.instances, 40);
    EXPECT_EQ(r.totals.consistent + r.totals.inconclusive + r.totals.counterexamples, 40);
    EXPECT_TRUE(r.pair_certificate.passed);
    expect_sound(r);
}

INSTANTIATE_TEST_SUITE_P(All, EveryTheorem, ::testing::ValuesIn(all_theorems()),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Lab, IdenticalWindowsGiveIdenticalVerdicts) {
    auto c = small_case(TheoremId::T1);
    c.regime = summakit::gen::ExplicitPair{};
    c.xi = 0.1;
    const auto r = verify_theorem(c);
    EXPECT_EQ(r.totals.counterexamples, 0);
    const auto converse = converse_probe(c);
    EXPECT_EQ(converse.totals.strict, 0);
}

TEST(Lab, NegativeControlFindsCounterexamples) {
    auto c = small_case(TheoremId::T1);
    c.negative_control = true;
    c.instances = 10;
    const auto r = verify_theorem(c);
    EXPECT_GE(r.totals.counterexamples, 1) << r.summary();
    EXPECT_EQ(r.mode, "negative_control");
    expect_sound(r);
}

TEST(Lab, T5NeedsRefinement) {
    auto c = small_case(TheoremId::T5);
    c.theta = summakit::lacunary::LacunaryTheta::geometric(2, 11);
    c.refined = summakit::lacunary::LacunaryTheta::structural({0, 3, 8, 2048});
    EXPECT_THROW((void)verify_theorem(c), CertificateError);
}

TEST(Lab, FailedPairCertificateIsRejected) {
    auto c = small_case(TheoremId::T1);
    c.regime = summakit::gen::ExplicitPair{summakit::gen::WindowLengthRule::identity(),
                                           summakit::gen::WindowLengthRule::ceil_div(2), 1.0, 1.0};
    EXPECT_THROW((void)verify_theorem(c), CertificateError);
    auto v = small_case(TheoremId::T1);
    v.regime = summakit::gen::ViolatingLiminf{1.0, 1.0};
    EXPECT_THROW((void)verify_theorem(v), CertificateError);
}

TEST(Lab, EmptyInstanceSet) {
    auto c = small_case(TheoremId::T2);
    c.instances = 0;
    const auto r = converse_probe(c);
    EXPECT_TRUE(r.records.empty());
    EXPECT_EQ(r.totals.instances, 0);
}

TEST(Lab, ParallelRunsMatchSerial) {
    auto c = small_case(TheoremId::T4);
    c.instances = 24;
    const auto a = verify_theorem(c, 1);
    const auto b = verify_theorem(c, 3);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        EXPECT_EQ(a.records[k].id, static_cast<std::int64_t>(k));
        EXPECT_EQ(a.records[k].id, b.records[k].id);
        EXPECT_EQ(a.records[k].generator, b.records[k].generator);
        EXPECT_EQ(a.records[k].classification, b.records[k].classification);
        EXPECT_EQ(a.records[k].antecedent.statistic, b.records[k].antecedent.statistic);
        EXPECT_EQ(a.records[k].consequent.tail_count, b.records[k].consequent.tail_count);
    }
    EXPECT_EQ(a.summary(), b.summary());
}

TEST(Lab, FiniteIdealSuite) {
    auto c = small_case(TheoremId::T1);
    c.ideal = summakit::ideals::Finite{};
    EXPECT_EQ(verify_theorem(c).totals.counterexamples, 0);
}
