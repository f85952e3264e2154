#include "summakit/exact.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace summakit {

namespace {

// Bit 0 of the accumulator carries weight 2^-1074, the smallest subnormal.
constexpr int kBias = 1074;

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw std::invalid_argument("Rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::string Rational::str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool geq_product(double lhs, double a, double b) noexcept {
    // a*b == p + e exactly. If lhs - p rounds, lhs and p differ by more than a
    // factor of two, so the rounded difference still dominates |e|.
    const double p = a * b;
    const double e = std::fma(a, b, -p);
    const double d = lhs - p;
    return d >= e;
}

bool leq_product(double lhs, double a, double b) noexcept {
    return geq_product(-lhs, -a, b);
}

void ExactAccumulator::add(double x) noexcept {
    if (x == 0.0 || !std::isfinite(x)) {
        return;
    }
    const bool negative = x < 0.0;
    int exponent = 0;
    const double fraction = std::frexp(std::fabs(x), &exponent);
    auto mantissa = static_cast<std::uint64_t>(std::ldexp(fraction, 53));
    int bit = exponent - 53 + kBias;
    if (bit < 0) {
        mantissa >>= -bit;  // subnormal: the shifted-out bits are zero
        bit = 0;
    }
    add_shifted(mantissa, bit, negative);
}

void ExactAccumulator::add_shifted(std::uint64_t mantissa, int bit, bool negative) noexcept {
    const int limb = bit / 64;
    const int offset = bit % 64;
    const unsigned __int128 wide = static_cast<unsigned __int128>(mantissa) << offset;
    std::uint64_t parts[2] = {static_cast<std::uint64_t>(wide), static_cast<std::uint64_t>(wide >> 64)};

    if (!negative) {
        std::uint64_t carry = 0;
        for (int k = limb; k < kLimbs; ++k) {
            const std::uint64_t addend = (k - limb < 2) ? parts[k - limb] : 0;
            if (addend == 0 && carry == 0 && k - limb >= 2) break;
            const unsigned __int128 s = static_cast<unsigned __int128>(limbs_[k]) + addend + carry;
            limbs_[k] = static_cast<std::uint64_t>(s);
            carry = static_cast<std::uint64_t>(s >> 64);
        }
    } else {
        std::uint64_t borrow = 0;
        for (int k = limb; k < kLimbs; ++k) {
            const std::uint64_t subtrahend = (k - limb < 2) ? parts[k - limb] : 0;
            if (subtrahend == 0 && borrow == 0 && k - limb >= 2) break;
            const std::uint64_t before = limbs_[k];
            const std::uint64_t after = before - subtrahend - borrow;
            borrow = (static_cast<unsigned __int128>(subtrahend) + borrow > before) ? 1 : 0;
            limbs_[k] = after;
        }
    }
}

ExactAccumulator& ExactAccumulator::operator+=(const ExactAccumulator& other) noexcept {
    std::uint64_t carry = 0;
    for (int k = 0; k < kLimbs; ++k) {
        const unsigned __int128 s = static_cast<unsigned __int128>(limbs_[k]) + other.limbs_[k] + carry;
        limbs_[k] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
    }
    return *this;
}

ExactAccumulator& ExactAccumulator::operator-=(const ExactAccumulator& other) noexcept {
    std::uint64_t borrow = 0;
    for (int k = 0; k < kLimbs; ++k) {
        const std::uint64_t before = limbs_[k];
        const std::uint64_t subtrahend = other.limbs_[k];
        limbs_[k] = before - subtrahend - borrow;
        borrow = (static_cast<unsigned __int128>(subtrahend) + borrow > before) ? 1 : 0;
    }
    return *this;
}

void ExactAccumulator::negate() noexcept {
    std::uint64_t carry = 1;
    for (auto& limb : limbs_) {
        const unsigned __int128 s = static_cast<unsigned __int128>(~limb) + carry;
        limb = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
    }
}

bool ExactAccumulator::is_negative() const noexcept {
    return (limbs_[kLimbs - 1] >> 63) != 0;
}

bool ExactAccumulator::is_zero() const noexcept {
    for (auto limb : limbs_) {
        if (limb != 0) return false;
    }
    return true;
}

double ExactAccumulator::to_double() const noexcept {
    if (is_negative()) {
        ExactAccumulator magnitude = *this;
        magnitude.negate();
        return -magnitude.to_double();
    }
    int top_limb = kLimbs - 1;
    while (top_limb >= 0 && limbs_[top_limb] == 0) --top_limb;
    if (top_limb < 0) {
        return 0.0;
    }
    const int top = 64 * top_limb + 63 - std::countl_zero(limbs_[top_limb]);
    if (top <= 52) {
        return std::ldexp(static_cast<double>(limbs_[0]), -kBias);
    }

    auto bit_at = [this](int pos) -> std::uint64_t { return (limbs_[pos / 64] >> (pos % 64)) & 1U; };
    auto bits_from = [this](int pos) -> std::uint64_t {
        const int limb = pos / 64;
        const int offset = pos % 64;
        std::uint64_t value = limbs_[limb] >> offset;
        if (offset != 0 && limb + 1 < kLimbs) {
            value |= limbs_[limb + 1] << (64 - offset);
        }
        return value;
    };

    const int low = top - 52;
    std::uint64_t mantissa = bits_from(low) & ((std::uint64_t{1} << 53) - 1);
    const bool round_bit = bit_at(low - 1) != 0;
    bool sticky = false;
    const int sticky_top = low - 2;  // bits [0, sticky_top]
    if (sticky_top >= 0) {
        const int limb = sticky_top / 64;
        for (int k = 0; k < limb && !sticky; ++k) sticky = limbs_[k] != 0;
        const int width = sticky_top % 64 + 1;
        const std::uint64_t mask = width == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
        sticky = sticky || (limbs_[limb] & mask) != 0;
    }
    int exponent = low;
    if (round_bit && (sticky || (mantissa & 1U) != 0)) {
        ++mantissa;
        if (mantissa == (std::uint64_t{1} << 53)) {
            mantissa >>= 1;
            ++exponent;
        }
    }
    return std::ldexp(static_cast<double>(mantissa), exponent - kBias);
}

std::strong_ordering ExactAccumulator::compare_product(double a, double b) const noexcept {
    const double p = a * b;
    const double e = std::fma(a, b, -p);
    ExactAccumulator difference = *this;
    difference.subtract(p);
    difference.subtract(e);
    if (difference.is_negative()) return std::strong_ordering::less;
    if (difference.is_zero()) return std::strong_ordering::equal;
    return std::strong_ordering::greater;
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

}  // namespace summakit
