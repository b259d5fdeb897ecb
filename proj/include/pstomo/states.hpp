#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pstomo {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr double kNormTolerance = 1e-12;

double norm(std::span<const Complex> v);

// <a|b> (conjugate-linear in the first argument).
Complex inner(std::span<const Complex> a, std::span<const Complex> b);

// Multiplies v by the global phase that makes its largest-modulus entry real and non-negative.
// Ties are broken by the lowest index.
void canonicalize_global_phase(CVector& v);

// Unit-norm complex amplitude vector over the canonical basis |1>..|d>.
class PureState {
  public:
    // Throws ValueError unless |norm(amplitudes) - 1| <= tolerance.
    explicit PureState(CVector amplitudes, double tolerance = kNormTolerance);

    // Scales `amplitudes` to unit norm. Throws ValueError on a zero or non-finite vector.
    static PureState normalized(CVector amplitudes);

    // Computational basis state |label>, label in 1..d.
    static PureState basis_state(std::size_t dim, std::size_t label);

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    // Copy with the global-phase convention applied.
    PureState canonical() const;

  private:
    CVector amplitudes_;
};

// rho = (1 - lambda)|psi><psi| + (lambda / d) I, kept in factored form.
class NoisyState {
  public:
    explicit NoisyState(PureState pure, double lambda = 0.0);

    const PureState& pure() const noexcept { return pure_; }
    double lambda() const noexcept { return lambda_; }
    std::size_t dim() const noexcept { return pure_.dim(); }

  private:
    PureState pure_;
    double lambda_;
};

// Normalized complex Gaussian vector; Haar distributed. Deterministic in (dim, seed).
PureState haar_random_state(std::size_t dim, std::uint64_t seed);

// Unit-norm Haar vector as a raw amplitude array.
CVector haar_random_vector(std::size_t dim, std::uint64_t seed);

// 1 - |<a|b>|^2, clamped into [0, 1].
double infidelity(const PureState& a, const PureState& b);

} // namespace pstomo
