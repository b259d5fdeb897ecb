#include "pstomo/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pstomo/error.hpp"
#include "pstomo/rng.hpp"

namespace pstomo {

double norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw DimensionError("inner: length mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void canonicalize_global_phase(CVector& v) {
    if (v.empty()) return;
    std::size_t best = 0;
    double best_mod = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mod = std::abs(v[i]);
        if (mod > best_mod) {
            best_mod = mod;
            best = i;
        }
    }
    if (best_mod <= 0.0) return;
    const Complex rot = std::conj(v[best]) / best_mod;
    for (Complex& z : v) z *= rot;
    v[best] = Complex{std::abs(v[best]), 0.0};
}

PureState::PureState(CVector amplitudes, double tolerance) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) throw DimensionError("PureState: dimension must be at least 1");
    const double n = norm(amplitudes_);
    if (!std::isfinite(n) || std::abs(n - 1.0) > tolerance) {
        throw ValueError("PureState: amplitude vector is not normalized (norm " + std::to_string(n) + ")");
    }
}

PureState PureState::normalized(CVector amplitudes) {
    if (amplitudes.empty()) throw DimensionError("PureState: dimension must be at least 1");
    const double n = norm(amplitudes);
    if (!std::isfinite(n) || n == 0.0) throw ValueError("PureState: cannot normalize a zero or non-finite vector");
    for (Complex& z : amplitudes) z /= n;
    return PureState(std::move(amplitudes));
}

PureState PureState::basis_state(std::size_t dim, std::size_t label) {
    if (dim == 0) throw DimensionError("basis_state: dimension must be at least 1");
    if (label < 1 || label > dim) throw DimensionError("basis_state: label out of range");
    CVector v(dim, Complex{0.0, 0.0});
    v[label - 1] = 1.0;
    return PureState(std::move(v));
}

PureState PureState::canonical() const {
    CVector v = amplitudes_;
    canonicalize_global_phase(v);
    return PureState(std::move(v), 1e-10);
}

NoisyState::NoisyState(PureState pure, double lambda) : pure_(std::move(pure)), lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValueError("NoisyState: lambda must lie in [0, 1]");
}

CVector haar_random_vector(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw DimensionError("haar_random_state: dimension must be at least 1");
    Rng rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(dim);
    for (;;) {
        for (Complex& z : v) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            z = Complex{re, im};
        }
        const double n = norm(v);
        if (n > 0.0) {
            for (Complex& z : v) z /= n;
            return v;
        }
    }
}

PureState haar_random_state(std::size_t dim, std::uint64_t seed) {
    return PureState(haar_random_vector(dim, seed));
}

double infidelity(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw DimensionError("infidelity: dimension mismatch");
    const double overlap = std::norm(inner(a.amplitudes(), b.amplitudes()));
    return std::clamp(1.0 - overlap, 0.0, 1.0);
}

} // namespace pstomo
