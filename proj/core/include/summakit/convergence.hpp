#pragma once

// Summability and convergence testers over finite prefixes: statistical,
// N_theta (lacunary strong Cesaro), the order-alpha lambda-window statistical
// test S and its summable counterpart w over a Musielak-Orlicz family, and
// the neighborhood form used for topological groups.
//
// Every tester reduces a query to a witness set of window indices and asks an
// IdealOracle for a three-valued verdict on it. Window counts are integers and
// window sums are accumulated exactly, so every threshold decision is exact
// with respect to the computed terms.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "summakit/exact.hpp"
#include "summakit/ideals.hpp"
#include "summakit/lacunary.hpp"
#include "summakit/orlicz.hpp"

namespace summakit::convergence {

using ideals::IdealOracle;
using ideals::IndexSet;
using ideals::MembershipVerdict;
using ideals::VerdictState;
using lacunary::LacunaryTheta;
using orlicz::MusielakFamily;
using orlicz::SequencePrefix;

/// Window lengths lambda_i: a non-decreasing sequence of positive integers
/// with lambda_i <= i, so that I_i = [i - lambda_i + 1, i].
class WindowLengthRule {
public:
    enum class Kind {
        Identity,    // lambda_i = i
        CeilDiv,     // ceil(i / k)
        Capped,      // min(i, c)
        MinusSqrt,   // max(1, i - floor(sqrt(i)))
        CeilSqrt,    // ceil(sqrt(i))
        Table,       // explicit values
    };

    static WindowLengthRule identity() { return WindowLengthRule(Kind::Identity, 0, {}); }
    static WindowLengthRule ceil_div(std::int64_t k);
    static WindowLengthRule capped(std::int64_t c);
    static WindowLengthRule minus_sqrt() { return WindowLengthRule(Kind::MinusSqrt, 0, {}); }
    static WindowLengthRule ceil_sqrt() { return WindowLengthRule(Kind::CeilSqrt, 0, {}); }
    static WindowLengthRule table(std::vector<std::int64_t> values);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::int64_t parameter() const noexcept { return parameter_; }
    [[nodiscard]] const std::vector<std::int64_t>& values() const noexcept { return table_; }

    /// lambda_i for i >= 1.
    [[nodiscard]] std::int64_t operator()(std::int64_t i) const;
    /// lambda_1..lambda_horizon; throws ValidationError naming the first index
    /// that breaks monotonicity or 1 <= lambda_i <= i.
    [[nodiscard]] std::vector<std::int64_t> realize(std::int64_t horizon) const;
    [[nodiscard]] std::string describe() const;

    friend bool operator==(const WindowLengthRule&, const WindowLengthRule&) = default;

private:
    WindowLengthRule(Kind kind, std::int64_t parameter, std::vector<std::int64_t> table)
        : kind_(kind), parameter_(parameter), table_(std::move(table)) {}

    Kind kind_;
    std::int64_t parameter_;
    std::vector<std::int64_t> table_;
};

struct LambdaWindows {
    WindowLengthRule lengths = WindowLengthRule::identity();
    double alpha = 1.0;
};

/// Windows are the blocks J_r of theta, normalized by h_r^alpha; witness sets
/// are indexed by block.
struct LacunaryBlocks {
    LacunaryTheta theta;
    double alpha = 1.0;
};

using WindowScheme = std::variant<LambdaWindows, LacunaryBlocks>;

[[nodiscard]] double scheme_alpha(const WindowScheme& scheme) noexcept;

/// One window of a scheme: index i (or block r), the index range [lo, hi] and
/// the length whose alpha-th power normalizes the window statistic.
struct WindowSpan {
    std::int64_t index = 0;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t length = 0;
};

/// Windows of the scheme that fit inside 1..horizon, in index order.
[[nodiscard]] std::vector<WindowSpan> windows_for(const WindowScheme& scheme, std::int64_t horizon);

/// Canonical counts {j in I_i : term_j >= gamma} normalized by lambda_i^alpha,
/// following the quantities manipulated in the inclusion proofs. Literal
/// evaluates the displayed set as written, where the inner count collapses to
/// i or 0.
enum class Reading { Canonical, Literal };

[[nodiscard]] std::string_view to_string(Reading reading) noexcept;

struct ConvergenceQuery {
    SequencePrefix x;
    double target = 0.0;
    MusielakFamily family = MusielakFamily::uniform(orlicz::OrliczSpec::identity());
    WindowScheme scheme = LambdaWindows{};
    IdealOracle ideal = IdealOracle::density_zero(0.01, 10);
    double gamma = 0.01;
    double xi = 0.01;
    Reading reading = Reading::Canonical;
    /// Block lengths h used by the Literal reading's 1/h normalization;
    /// defaults to geometric base 2 covering the horizon.
    std::optional<LacunaryTheta> theta;
};

/// Throws ConfigError/ValidationError when gamma or xi is not positive, alpha
/// leaves (0, 1], the window lengths are malformed, or the horizons of the
/// prefix and the ideal disagree.
void validate_query(const ConvergenceQuery& query);

struct WindowStat {
    std::int64_t index = 0;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t length = 0;
    /// Terms counted in the window (Canonical) or the collapsed count i / 0
    /// (Literal). Zero for summation tests.
    std::int64_t count = 0;
    /// Window sum of terms; for Literal the block-normalized mean.
    double sum = 0.0;
    /// D_i = count / length^alpha, or S_i = sum / length^alpha.
    double statistic = 0.0;
    bool witness = false;
};

struct ConvergenceVerdict {
    VerdictState state = VerdictState::Inconclusive;
    std::string tester;
    std::vector<WindowStat> windows;
    IndexSet witness{0};
    /// Absent for ntheta_test, which thresholds block means directly.
    std::optional<MembershipVerdict> ideal_verdict;
};

/// Exact |{j <= n : indicator(j)}| / n.
[[nodiscard]] Rational natural_density_prefix(const std::function<bool(std::int64_t)>& indicator, std::int64_t n);

/// K(eps) = {j : |x_j - Z| >= eps}; verdict of the ideal on K(eps).
[[nodiscard]] ConvergenceVerdict statistical_test(const SequencePrefix& x, double target, double eps,
                                                  const IdealOracle& ideal);

enum class NThetaNormalization { ByH, ByJ };

/// Block means m_r = (1/h_r) sum_{J_r} |x_j - Z| (ByH) or (1/j_r) sum (ByJ)
/// over blocks inside the horizon. In when every last-quartile block has
/// m_r <= tol, Out when every one has m_r >= 10 tol.
[[nodiscard]] ConvergenceVerdict ntheta_test(const SequencePrefix& x, double target, const LacunaryTheta& theta,
                                             NThetaNormalization normalization, double tol);

/// Order-alpha lambda statistical test over the Musielak family.
[[nodiscard]] ConvergenceVerdict slambda_alpha_test(const ConvergenceQuery& query);

/// S_i = (1/lambda_i^alpha) sum_{j in I_i} M_j(|x_j - Z| / rho_j); W = {S_i >= gamma}.
[[nodiscard]] ConvergenceVerdict wlambda_alpha_test(const ConvergenceQuery& query);

/// A neighborhood V of 0 in the reals. Terms outside V count as escapes.
class Neighborhood {
public:
    /// Open ball {t : |t| < radius}.
    static Neighborhood ball(double radius);
    /// User predicate; must contain 0 and be symmetric (checked on a sample
    /// grid, ValidationError otherwise).
    static Neighborhood custom(std::function<bool(double)> contains, std::string description);
    /// The whole line.
    static Neighborhood everything();

    [[nodiscard]] bool contains(double t) const { return contains_(t); }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }
    [[nodiscard]] std::optional<double> radius() const noexcept { return radius_; }

private:
    Neighborhood(std::function<bool(double)> contains, std::string description, std::optional<double> radius)
        : contains_(std::move(contains)), description_(std::move(description)), radius_(radius) {}

    std::function<bool(double)> contains_;
    std::string description_;
    std::optional<double> radius_;
};

/// As slambda_alpha_test with "term not in V" in place of "term >= gamma".
[[nodiscard]] ConvergenceVerdict neighborhood_test(const ConvergenceQuery& query, const Neighborhood& nbhd);

/// The five reductions of the order-alpha definition:
///  1 one Orlicz function for every index (M_1 everywhere)
///  2 lambda_i = i
///  3 alpha = 1
///  4 theta = (2^r) and alpha = 1
///  5 identity family, theta = (2^r), lambda_i = i, alpha = 1
[[nodiscard]] ConvergenceQuery specialize(int case_id, const ConvergenceQuery& base);

/// Terms M_j(|x_j - Z| / rho_j) for j = 1..horizon. Throws DomainError naming
/// the index whose argument leaves the domain.
[[nodiscard]] std::vector<double> modular_terms(const SequencePrefix& x, double target, const MusielakFamily& family);

}  // namespace summakit::convergence
