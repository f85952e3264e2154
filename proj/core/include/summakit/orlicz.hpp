#pragma once

// Orlicz and Musielak-Orlicz functions: evaluation, validation, the
// complementary (convex-conjugate) function, the modular and the Luxemburg and
// Orlicz norms of finite sequence prefixes.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace summakit::orlicz {

/// Largest argument evaluated by default for the polynomial families.
inline constexpr double kDefaultPolynomialCap = 1e12;
/// Largest argument evaluated by default for e^u - 1 (e^700 ~ 1e304).
inline constexpr double kDefaultExpCap = 700.0;

struct Identity {};
/// u^p, p >= 1.
struct Power {
    double p = 2.0;
};
/// u^p / p, p > 1. Its conjugate is v^q / q with 1/p + 1/q = 1.
struct PowerOverP {
    double p = 2.0;
};
/// e^u - 1.
struct ExpMinusOne {};

struct GridPoint {
    double u = 0.0;
    double value = 0.0;
};

/// Piecewise-linear interpolation of (u, M(u)) samples. The first sample must
/// sit at u = 0; evaluation past the last sample is a domain error.
struct Tabulated {
    std::shared_ptr<const std::vector<GridPoint>> grid;
};

using Family = std::variant<Identity, Power, PowerOverP, ExpMinusOne, Tabulated>;

/// A scalar Orlicz function together with the largest argument it may be
/// evaluated at. Construction checks family parameters only; the Orlicz
/// properties themselves are checked by validate_orlicz().
class OrliczSpec {
public:
    OrliczSpec(Family family, double domain_cap);

    static OrliczSpec identity(double cap = kDefaultPolynomialCap);
    static OrliczSpec power(double p, double cap = kDefaultPolynomialCap);
    static OrliczSpec power_over_p(double p, double cap = kDefaultPolynomialCap);
    static OrliczSpec exp_minus_one(double cap = kDefaultExpCap);
    static OrliczSpec tabulated(std::vector<GridPoint> grid);
    static OrliczSpec tabulated(std::vector<GridPoint> grid, double cap);

    [[nodiscard]] const Family& family() const noexcept { return family_; }
    [[nodiscard]] double domain_cap() const noexcept { return domain_cap_; }
    /// Largest admissible argument: domain_cap, further limited by the last
    /// sample of a tabulated function.
    [[nodiscard]] double effective_cap() const noexcept { return effective_cap_; }

    /// M(u). Throws DomainError outside [0, effective_cap()].
    [[nodiscard]] double operator()(double u) const;
    /// M(u) with the same formula but no domain check; u must be admissible.
    [[nodiscard]] double eval_unchecked(double u) const noexcept;

    [[nodiscard]] std::string describe() const;

private:
    Family family_;
    double domain_cap_;
    double effective_cap_;
};

[[nodiscard]] double eval_orlicz(const OrliczSpec& spec, double u);

struct PropertyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<PropertyCheck> checks;

    [[nodiscard]] bool ok() const noexcept;
    [[nodiscard]] const PropertyCheck* find(std::string_view name) const noexcept;
    [[nodiscard]] std::string failures() const;
};

/// Checks zero_at_zero, positivity, monotone, convex and unbounded_trend on a
/// uniform grid over [0, effective_cap] (plus the knots of a tabulated
/// function). Failures are reported, never thrown, except grid_size < 3.
[[nodiscard]] ValidationReport validate_orlicz(const OrliczSpec& spec, int grid_size = 257);

struct ConjugateResult {
    double value = 0.0;
    double maximizer = 0.0;
    /// The maximizer sits at the search bound; the true complementary value
    /// may be larger or infinite.
    bool hit_cap = false;
};

/// sup { v*u - M(u) : 0 <= u <= min(search_cap, effective_cap) }.
[[nodiscard]] ConjugateResult conjugate_eval(const OrliczSpec& spec, double v, double search_cap, double tol);

/// Indexed family (M_j) with positive scales rho(j), j >= 1.
class MusielakFamily {
public:
    using Rule = std::function<OrliczSpec(std::int64_t)>;
    using Scale = std::function<double(std::int64_t)>;

    MusielakFamily(Rule rule, Scale rho, std::string description);

    /// Same M and the same constant scale at every index.
    static MusielakFamily uniform(OrliczSpec spec, double rho = 1.0);
    /// M_j = odd for odd j, even for even j.
    static MusielakFamily alternating(OrliczSpec odd, OrliczSpec even, double rho = 1.0);
    /// M_j(u) = u^(p_inf + amplitude / j): pointwise convergent to u^p_inf.
    static MusielakFamily power_ramp(double p_inf, double amplitude, double rho = 1.0);

    [[nodiscard]] OrliczSpec at(std::int64_t j) const;
    [[nodiscard]] double rho(std::int64_t j) const;
    [[nodiscard]] const std::string& description() const noexcept { return description_; }
    [[nodiscard]] const std::optional<OrliczSpec>& uniform_spec() const noexcept { return uniform_; }
    [[nodiscard]] bool has_constant_rho() const noexcept { return constant_rho_.has_value(); }

    /// M_j(|value| / rho(j)).
    [[nodiscard]] double term(std::int64_t j, double value) const;

    /// Checks rho(j) > 0 and validate_orlicz(rule(j)) for j = 1..samples.
    [[nodiscard]] ValidationReport validate_sample(std::int64_t samples, int grid_size = 65) const;

private:
    Rule rule_;
    Scale rho_;
    std::string description_;
    std::optional<OrliczSpec> uniform_;
    std::optional<double> constant_rho_;
};

/// Finite prefix x_1..x_n of a real sequence. Indices are 1-based.
class SequencePrefix {
public:
    SequencePrefix() = default;
    explicit SequencePrefix(std::vector<double> values);

    [[nodiscard]] std::int64_t horizon() const noexcept { return static_cast<std::int64_t>(values_.size()); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double at(std::int64_t j) const { return values_.at(static_cast<std::size_t>(j - 1)); }
    [[nodiscard]] bool all_zero() const noexcept;
    [[nodiscard]] double sup_abs() const noexcept;

    friend bool operator==(const SequencePrefix&, const SequencePrefix&) = default;

private:
    std::vector<double> values_;
};

/// sum_k M_k(scale * |x_k|), compensated, left to right. Throws DomainError
/// naming the first index whose argument leaves the domain.
[[nodiscard]] double modular(const MusielakFamily& family, const SequencePrefix& x, double scale);

/// As modular(), but an argument past the domain yields nullopt (treated as
/// an infinite modular by the norm solvers).
[[nodiscard]] std::optional<double> try_modular(const MusielakFamily& family, const SequencePrefix& x,
                                                double scale);

struct LuxemburgResult {
    double norm = 0.0;
    /// modular(x / norm); always <= 1 by construction.
    double achieved_modular = 0.0;
    double bracket_width = 0.0;
    int doublings = 0;
    int bisections = 0;
};

/// inf { k > 0 : modular(x / k) <= 1 } by doubling then bisection on k.
[[nodiscard]] LuxemburgResult luxemburg_norm(const MusielakFamily& family, const SequencePrefix& x, double tol);

struct OrliczNormResult {
    double norm = 0.0;
    double minimizer = 0.0;
    double bracket_width = 0.0;
    /// The minimum was found at the largest admissible k (the infimum is
    /// approached but not attained).
    bool boundary_minimizer = false;
};

/// inf over k > 0 of (1 + modular(k x)) / k by a power-of-two scan followed by
/// golden-section search on the bracketing octaves.
[[nodiscard]] OrliczNormResult orlicz_norm(const MusielakFamily& family, const SequencePrefix& x, double tol);

}  // namespace summakit::orlicz
