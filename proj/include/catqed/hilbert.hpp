#pragma once

// Truncated Fock-space foundation.
//
// The composite space is |m>_v (x) |n>_c (x) |q>_ion with m in [0, M), n in {0, 1}
// and q in {g, e}. The cavity is kept at n <= 1 without loss of generality: the
// initial state |alpha>|0>|e> carries one excitation, the carrier interaction
// conserves the excitation number (sigma_- b^dag + sigma_+ b), and the only jump
// operator b removes photons. Hence no amplitude ever reaches n = 2, and the
// {0, 1} cavity truncation is exact rather than approximate.
//
// Basis ordering is m-major, then n, then q (g = 0, e = 1):
//     index(m, n, q) = 4 m + 2 n + q

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "catqed/numerics.hpp"

namespace catqed {

enum class Level : int { g = 0, e = 1 };

inline constexpr std::size_t kCavityLevels = 2;
inline constexpr std::size_t kInternalLevels = 2;
inline constexpr std::size_t kBlockSize = kCavityLevels * kInternalLevels;

/// What to do when the vibrational cutoff M is below the recommended size for alpha.
enum class TruncationPolicy { Enforce, Warn };

/// Dimensionless physical parameters. hbar = 1, time in units of 1/g (tau = g t).
class SystemParams {
public:
    /// Paper working point: Gamma = 1, eta = 0.05, alpha = 2, M = 40.
    SystemParams();
    SystemParams(double eta, double gamma, Complex alpha, std::size_t truncation,
                 TruncationPolicy policy = TruncationPolicy::Enforce, double g = 1.0);

    [[nodiscard]] double g() const noexcept { return g_; }
    [[nodiscard]] double eta() const noexcept { return eta_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] Complex alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t truncation() const noexcept { return truncation_; }

    /// kappa = Gamma g.
    [[nodiscard]] double kappa() const noexcept { return gamma_ * g_; }
    /// omega_eta = g (1 - eta^2 / 2), the carrier Rabi scale of the cat-state decomposition.
    [[nodiscard]] double omega_eta() const noexcept { return g_ * (1.0 - 0.5 * eta_ * eta_); }

    /// Non-fatal validation messages (only populated under TruncationPolicy::Warn).
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    SystemParams with_gamma(double gamma) const;
    SystemParams with_truncation(std::size_t truncation) const;

    /// Smallest M keeping the coherent-state tail below 1e-12.
    static std::size_t recommended_truncation(Complex alpha);
    /// eta^2 (|alpha|^2 + 6|alpha| + 9): must stay below 0.5 so lambda_LD(m) > 0 over the occupied tail.
    static double lamb_dicke_load(double eta, Complex alpha);

private:
    double g_;
    double eta_;
    double gamma_;
    Complex alpha_;
    std::size_t truncation_;
    TruncationPolicy policy_;
    std::vector<std::string> warnings_;
};

/// Amplitudes over vibrational Fock states |m>, m in [0, M).
class MotionalState {
public:
    MotionalState() = default;
    explicit MotionalState(std::size_t levels) : amps_(levels) {}
    explicit MotionalState(std::vector<Complex> amps) : amps_(std::move(amps)) {}

    static MotionalState fock(std::size_t m, std::size_t levels);

    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] Complex operator[](std::size_t m) const { return amps_[m]; }
    Complex& operator[](std::size_t m) { return amps_[m]; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }

private:
    std::vector<Complex> amps_;
};

/// Amplitudes over |m, n, q> with n in {0, 1}; see the layout note at the top of this header.
class CompositeState {
public:
    CompositeState() = default;
    explicit CompositeState(std::size_t vib_levels) : amps_(vib_levels * kBlockSize) {}

    /// |motion> (x) |n>_c (x) |q>.
    static CompositeState product(const MotionalState& motion, int n, Level q);

    [[nodiscard]] static constexpr std::size_t index(std::size_t m, int n, Level q) noexcept {
        return kBlockSize * m + kInternalLevels * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(q);
    }

    [[nodiscard]] std::size_t vib_levels() const noexcept { return amps_.size() / kBlockSize; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

    [[nodiscard]] Complex at(std::size_t m, int n, Level q) const { return amps_[index(m, n, q)]; }
    Complex& at(std::size_t m, int n, Level q) { return amps_[index(m, n, q)]; }

    /// Motional amplitudes of the fixed (n, q) sector.
    [[nodiscard]] MotionalState sector(int n, Level q) const;
    void set_sector(int n, Level q, const MotionalState& motion);

    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }

private:
    std::vector<Complex> amps_;
};

/// c_m = e^{-|alpha|^2/2} alpha^m / sqrt(m!) for m < M, by the recurrence c_m = c_{m-1} alpha / sqrt(m).
MotionalState coherent_amplitudes(Complex alpha, std::size_t levels);

/// 1 - sum_m |c_m|^2 for the truncated coherent state (>= 0 up to rounding).
double truncation_tail(Complex alpha, std::size_t levels);

/// Cavity annihilation b: |m,1,q> -> |m,0,q>, |m,0,q> -> 0. The result is not normalized.
CompositeState annihilate_cavity(const CompositeState& state);

// Inner products are conjugate-linear in the first argument: <x|y> = sum conj(x_i) y_i.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
Complex inner(const MotionalState& x, const MotionalState& y);
Complex inner(const CompositeState& x, const CompositeState& y);

double norm_sq(std::span<const Complex> x);
double norm_sq(const MotionalState& x);
double norm_sq(const CompositeState& x);

/// Throws DegenerateState when norm_sq <= 1e-300.
MotionalState normalize(const MotionalState& x);
CompositeState normalize(const CompositeState& x);

/// |<x|y>|^2 / (|x|^2 |y|^2); global-phase insensitive. Throws DegenerateState on a zero vector.
double fidelity(const MotionalState& x, const MotionalState& y);

}  // namespace catqed
