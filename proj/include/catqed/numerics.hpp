#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace catqed {

using Complex = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter set or argument outside its documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two states (or a state and an index range) with incompatible sizes.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Normalizing, projecting onto or collapsing a state whose weight vanishes.
class DegenerateState : public Error {
public:
    using Error::Error;
};

/// Neumaier compensated accumulator. Error stays O(eps) independent of the
/// number of terms, which keeps normalization at 1e-12 for a few hundred levels.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(Complex z) noexcept {
        re_.add(z.real());
        im_.add(z.imag());
    }
    CompensatedComplexSum& operator+=(Complex z) noexcept {
        add(z);
        return *this;
    }
    [[nodiscard]] Complex value() const noexcept { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace catqed
