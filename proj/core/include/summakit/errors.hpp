#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace summakit {

/// Base of every error raised by the toolkit. The CLI maps the category onto
/// its exit-code contract: InvalidInput -> 2, Numeric -> 1.
class Error : public std::runtime_error {
public:
    enum class Category { InvalidInput, Numeric };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    [[nodiscard]] Category category() const noexcept { return category_; }

private:
    Category category_;
};

/// Argument outside the domain an Orlicz function is evaluated on.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what, std::int64_t index = 0)
        : Error(Category::InvalidInput, what), index_(index) {}

    /// 1-based sequence index that triggered the error, 0 when not applicable.
    [[nodiscard]] std::int64_t index() const noexcept { return index_; }

private:
    std::int64_t index_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(Category::InvalidInput, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(Category::InvalidInput, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(Category::Numeric, what) {}
};

}  // namespace summakit
