#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "summakit/errors.hpp"
#include "summakit/orlicz.hpp"

using namespace summakit::orlicz;

namespace {

MusielakFamily uniform(OrliczSpec spec) { return MusielakFamily::uniform(std::move(spec)); }

double lp_norm(const std::vector<double>& x, double p) {
    double s = 0.0;
    for (double v : x) s += std::pow(std::fabs(v), p);
    return std::pow(s, 1.0 / p);
}

// Orlicz norm by log-spaced grid search over k.
double grid_orlicz_norm(const MusielakFamily& family, const SequencePrefix& x, int points) {
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n < points; ++n) {
        const double k = std::pow(10.0, -6.0 + 12.0 * n / (points - 1));
        const auto m = try_modular(family, x, k);
        if (m) best = std::min(best, (1.0 + *m) / k);
    }
    return best;
}

}  // namespace

TEST(OrliczSpec, EvaluatesBuiltins) {
    EXPECT_EQ(OrliczSpec::identity()(3.5), 3.5);
    EXPECT_EQ(OrliczSpec::power(2)(3.0), 9.0);
    EXPECT_NEAR(OrliczSpec::exp_minus_one()(1.0), std::exp(1.0) - 1.0, 1e-15);
    EXPECT_NEAR(OrliczSpec::exp_minus_one()(1.0), 1.718281828, 1e-9);
    EXPECT_NEAR(OrliczSpec::power_over_p(3)(2.0), 8.0 / 3.0, 1e-15);
}

TEST(OrliczSpec, RejectsArgumentsOutsideDomain) {
    EXPECT_THROW((void)OrliczSpec::power(2, 10.0)(11.0), summakit::DomainError);
    EXPECT_THROW((void)OrliczSpec::identity()(-1.0), summakit::DomainError);
    EXPECT_THROW(OrliczSpec::power(0.5), summakit::ValidationError);
    EXPECT_THROW(OrliczSpec::power_over_p(1.0), summakit::ValidationError);
}

TEST(OrliczSpec, TabulatedInterpolates) {
    const auto spec = OrliczSpec::tabulated({{0, 0}, {1, 1}, {2, 4}});
    EXPECT_EQ(spec(0.5), 0.5);
    EXPECT_EQ(spec(1.5), 2.5);
    EXPECT_THROW((void)spec(2.5), summakit::DomainError);
    EXPECT_THROW(OrliczSpec::tabulated({{0, 0}}), summakit::ValidationError);
    EXPECT_THROW(OrliczSpec::tabulated({{1, 0}, {2, 1}}), summakit::ValidationError);
}

TEST(ValidateOrlicz, AcceptsBuiltins) {
    EXPECT_TRUE(validate_orlicz(OrliczSpec::power(2)).ok());
    EXPECT_TRUE(validate_orlicz(OrliczSpec::identity()).ok());
    EXPECT_TRUE(validate_orlicz(OrliczSpec::exp_minus_one()).ok());
    EXPECT_TRUE(validate_orlicz(OrliczSpec::power_over_p(1.5)).ok());
}

TEST(ValidateOrlicz, FlagsDecreasingTable) {
    const auto report = validate_orlicz(OrliczSpec::tabulated({{0, 0}, {1, 2}, {2, 1}}));
    EXPECT_FALSE(report.ok());
    ASSERT_NE(report.find("monotone"), nullptr);
    EXPECT_FALSE(report.find("monotone")->passed);
    EXPECT_FALSE(report.find("convex")->passed);
    EXPECT_THROW(validate_orlicz(OrliczSpec::identity(), 2), summakit::ValidationError);
}

TEST(ValidateOrlicz, FlagsNonConvexTable) {
    const auto report = validate_orlicz(OrliczSpec::tabulated({{0, 0}, {1, 2}, {2, 3}}));
    EXPECT_TRUE(report.find("monotone")->passed);
    EXPECT_FALSE(report.find("convex")->passed);
}

TEST(Conjugate, Examples) {
    EXPECT_NEAR(conjugate_eval(OrliczSpec::identity(), 0.5, 100, 1e-9).value, 0.0, 1e-12);
    EXPECT_NEAR(conjugate_eval(OrliczSpec::power_over_p(2), 1.0, 100, 1e-9).value, 0.5, 1e-9);
    EXPECT_NEAR(conjugate_eval(OrliczSpec::power_over_p(3), 2.0, 100, 1e-9).value,
                std::pow(2.0, 1.5) * 2.0 / 3.0, 1e-9);
}

TEST(Conjugate, MatchesDenseGridOracle) {
    for (double p : {1.5, 2.0, 3.0}) {
        const auto spec = OrliczSpec::power_over_p(p);
        for (double v : {0.3, 1.0, 2.0, 4.5}) {
            const double grid = oracle::grid_conjugate([&](double u) { return std::pow(u, p) / p; }, v, 40.0, 800000);
            const double got = conjugate_eval(spec, v, 100, 1e-9).value;
            EXPECT_GE(got, grid - 1e-12);
            EXPECT_NEAR(got, grid, 1e-6 * std::max(1.0, grid));
        }
    }
}

TEST(Conjugate, IdentityBeyondSlopeHitsCap) {
    const auto r = conjugate_eval(OrliczSpec::identity(), 2.0, 100, 1e-9);
    EXPECT_TRUE(r.hit_cap);
    EXPECT_NEAR(r.value, 100.0, 1e-6);
}

TEST(Conjugate, RejectsNegativeArgument) {
    EXPECT_THROW((void)conjugate_eval(OrliczSpec::power(2), -1.0, 100, 1e-9), summakit::DomainError);
    EXPECT_THROW((void)conjugate_eval(OrliczSpec::tabulated({{0, 0}, {1, 2}, {2, 1}}), 1.0, 100, 1e-9),
                 summakit::ValidationError);
}

TEST(Conjugate, TabulatedUsesKnots) {
    const auto spec = OrliczSpec::tabulated({{0, 0}, {1, 1}, {2, 4}});
    // sup of 2u - M(u) over the knots: u = 1 gives 1, u = 2 gives 0.
    EXPECT_EQ(conjugate_eval(spec, 2.0, 100, 1e-9).value, 1.0);
}

TEST(Young, HoldsOnGridForEveryBuiltin) {
    const std::vector<OrliczSpec> specs{OrliczSpec::identity(), OrliczSpec::power(1.5), OrliczSpec::power(3),
                                        OrliczSpec::power_over_p(2), OrliczSpec::exp_minus_one(),
                                        OrliczSpec::tabulated({{0, 0}, {1, 0.5}, {4, 8}, {20, 200}})};
    for (const auto& spec : specs) {
        for (int b = 0; b <= 20; ++b) {
            const double v = 0.5 * b;
            const double n = conjugate_eval(spec, v, 100, 1e-9).value;
            for (int a = 0; a <= 20; ++a) {
                const double u = 0.5 * a;
                EXPECT_LE(u * v, spec(u) + n + 1e-8) << spec.describe() << " u=" << u << " v=" << v;
            }
        }
    }
}

TEST(Modular, Examples) {
    EXPECT_EQ(modular(uniform(OrliczSpec::identity()), SequencePrefix({1, 2, 3}), 1.0), 6.0);
    EXPECT_EQ(modular(uniform(OrliczSpec::power(2)), SequencePrefix({3, 4}), 1.0), 25.0);
    EXPECT_EQ(modular(uniform(OrliczSpec::power(2)), SequencePrefix({3, 4}), 0.5), 1.5 * 1.5 + 2.0 * 2.0);
    EXPECT_THROW((void)modular(uniform(OrliczSpec::power(2, 10)), SequencePrefix({30}), 1.0), summakit::DomainError);
    EXPECT_FALSE(try_modular(uniform(OrliczSpec::power(2, 10)), SequencePrefix({30}), 1.0).has_value());
}

TEST(Luxemburg, Examples) {
    const auto r = luxemburg_norm(uniform(OrliczSpec::power(2)), SequencePrefix({3, 4, 0}), 1e-9);
    EXPECT_NEAR(r.norm, 5.0, 1e-8);
    EXPECT_LE(r.achieved_modular, 1.0);
    EXPECT_LE(r.bracket_width, 1e-9);
    EXPECT_NEAR(luxemburg_norm(uniform(OrliczSpec::identity()), SequencePrefix({1, 0, 0}), 1e-9).norm, 1.0, 1e-8);
    EXPECT_EQ(luxemburg_norm(uniform(OrliczSpec::power(2)), SequencePrefix({0, 0}), 1e-9).norm, 0.0);
}

TEST(OrliczNorm, Examples) {
    EXPECT_NEAR(orlicz_norm(uniform(OrliczSpec::power(2)), SequencePrefix({3, 4}), 1e-9).norm, 10.0, 1e-8);
    const auto id = orlicz_norm(uniform(OrliczSpec::identity()), SequencePrefix({1, 0}), 1e-9);
    EXPECT_NEAR(id.norm, 1.0, 1e-8);
    EXPECT_TRUE(id.boundary_minimizer);
    EXPECT_EQ(orlicz_norm(uniform(OrliczSpec::power(2)), SequencePrefix({0}), 1e-9).norm, 0.0);
}

TEST(Norms, ClosedFormsGridAndSandwich) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    for (int trial = 0; trial < 60; ++trial) {
        const double p = std::vector<double>{1.0, 1.5, 2.0, 3.0}[trial % 4];
        std::vector<double> x(1 + rng() % 50);
        for (auto& v : x) v = value(rng);
        const auto family = uniform(OrliczSpec::power(p));
        const SequencePrefix prefix(x);
        const double lux = luxemburg_norm(family, prefix, 1e-12).norm;
        const double orl = orlicz_norm(family, prefix, 1e-12).norm;
        EXPECT_NEAR(lux, lp_norm(x, p), 1e-8 * std::max(1.0, lux)) << "p=" << p;
        const double grid = grid_orlicz_norm(family, prefix, 20000);
        EXPECT_LE(orl, grid * (1 + 1e-12));
        EXPECT_NEAR(orl, grid, 1e-4 * std::max(1.0, grid));
        EXPECT_LE(lux, orl + 1e-9);
        EXPECT_LE(orl, 2.0 * lux + 1e-6);
    }
}

TEST(Norms, PowerClosedFormOrlicz) {
    // inf_k (1 + k^p S)/k = p/(p-1) * ((p-1) S)^(1/p) for p > 1.
    for (double p : {1.5, 2.0, 3.0}) {
        const SequencePrefix x({1.0, -2.0, 0.5});
        double s = 0.0;
        for (double v : x.values()) s += std::pow(std::fabs(v), p);
        const double expected = p / (p - 1.0) * std::pow((p - 1.0) * s, 1.0 / p);
        EXPECT_NEAR(orlicz_norm(uniform(OrliczSpec::power(p)), x, 1e-12).norm, expected, 1e-9 * expected);
    }
}

TEST(Norms, NonUniformFamilies) {
    const auto alt = MusielakFamily::alternating(OrliczSpec::identity(), OrliczSpec::power(2));
    EXPECT_EQ(modular(alt, SequencePrefix({3, 3}), 1.0), 12.0);
    const auto ramp = MusielakFamily::power_ramp(2.0, 1.0);
    EXPECT_NEAR(ramp.term(1, 2.0), 8.0, 1e-12);
    EXPECT_NEAR(ramp.term(2, 2.0), std::pow(2.0, 2.5), 1e-12);
    EXPECT_TRUE(ramp.validate_sample(16).ok());
    const auto lux = luxemburg_norm(alt, SequencePrefix({1, 1}), 1e-12);
    // 1/k + 1/k^2 = 1 at k = golden ratio.
    EXPECT_NEAR(lux.norm, (1.0 + std::sqrt(5.0)) / 2.0, 1e-9);
}

TEST(Family, RhoScalesArguments) {
    const auto f = MusielakFamily::uniform(OrliczSpec::power(2), 2.0);
    EXPECT_EQ(f.term(1, -4.0), 4.0);
    EXPECT_THROW(MusielakFamily::uniform(OrliczSpec::power(2), 0.0), summakit::ValidationError);
}

TEST(SequencePrefix, RejectsNonFinite) {
    EXPECT_THROW(SequencePrefix({1.0, std::nan("")}), summakit::ValidationError);
    const SequencePrefix x({-3, 2});
    EXPECT_EQ(x.sup_abs(), 3.0);
    EXPECT_EQ(x.at(2), 2.0);
}
