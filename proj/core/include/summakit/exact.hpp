#pragma once

// Exact arithmetic helpers used wherever a threshold decision must not depend
// on rounding: rationals for counts and densities, an exact comparison of a
// double against a product, and a fixed-point accumulator that sums doubles
// without error.

#include <array>
#include <compare>
#include <cstdint>
#include <string>

namespace summakit {

/// Reduced fraction with a positive denominator.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den);

    [[nodiscard]] std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] std::int64_t den() const noexcept { return den_; }
    [[nodiscard]] double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// True iff lhs >= a * b in exact real arithmetic (finite inputs, no underflow
/// of the product's rounding error).
[[nodiscard]] bool geq_product(double lhs, double a, double b) noexcept;

/// True iff lhs <= a * b in exact real arithmetic.
[[nodiscard]] bool leq_product(double lhs, double a, double b) noexcept;

/// Fixed-point two's-complement accumulator covering every finite double
/// (2^-1074 .. 2^1024) with headroom for 2^60 terms. Addition is exact, so a
/// window sum taken as a difference of two prefix accumulators equals the
/// exact sum of the window's terms.
class ExactAccumulator {
public:
    static constexpr int kLimbs = 34;

    void add(double x) noexcept;
    void subtract(double x) noexcept { add(-x); }
    ExactAccumulator& operator+=(const ExactAccumulator& other) noexcept;
    ExactAccumulator& operator-=(const ExactAccumulator& other) noexcept;

    [[nodiscard]] bool is_negative() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept;
    /// Correctly rounded (nearest, ties to even) value.
    [[nodiscard]] double to_double() const noexcept;
    /// Exact comparison of the accumulated value with a * b.
    [[nodiscard]] std::strong_ordering compare_product(double a, double b) const noexcept;
    [[nodiscard]] bool geq_product(double a, double b) const noexcept { return compare_product(a, b) >= 0; }
    [[nodiscard]] bool leq_product(double a, double b) const noexcept { return compare_product(a, b) <= 0; }

    friend bool operator==(const ExactAccumulator&, const ExactAccumulator&) = default;

private:
    void add_shifted(std::uint64_t mantissa, int bit, bool negative) noexcept;
    void negate() noexcept;

    std::array<std::uint64_t, kLimbs> limbs_{};
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace summakit
