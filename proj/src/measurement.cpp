#include "pstomo/measurement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "pstomo/error.hpp"
#include "pstomo/rng.hpp"

namespace pstomo {

Shots Shots::finite(std::uint64_t n) {
    if (n == 0) throw ValueError("shots must be positive");
    Shots s;
    s.count_ = n;
    return s;
}

Shots Shots::parse(const std::string& text) {
    if (text == "exact") return exact();
    std::uint64_t n = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, n);
    if (ec != std::errc{} || ptr != end || n == 0) {
        throw ValueError("invalid shot count '" + text + "' (expected a positive integer or 'exact')");
    }
    return finite(n);
}

std::uint64_t Shots::count() const {
    if (!count_) throw ValueError("exact shots have no finite count");
    return *count_;
}

std::string Shots::to_string() const { return count_ ? std::to_string(*count_) : std::string("exact"); }

ProbabilityVector born_probabilities(const NoisyState& state, const OrthonormalBasis& basis, int basis_id) {
    const std::size_t d = state.dim();
    if (basis.dim() != d) throw DimensionError("born_probabilities: state and basis dimensions differ");
    const double lambda = state.lambda();
    const double mixed = lambda / static_cast<double>(d);
    ProbabilityVector out{basis_id, std::vector<double>(d)};
    for (std::size_t j = 0; j < d; ++j) {
        const double pure = std::norm(inner(basis.vector(j), state.pure().amplitudes()));
        out.probs[j] = lambda == 0.0 ? pure : (1.0 - lambda) * pure + mixed;
    }
    return out;
}

OutcomeCounts sample_counts(const ProbabilityVector& p, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw ValueError("sample_counts: shots must be positive");
    if (p.probs.empty()) throw DimensionError("sample_counts: empty probability vector");
    double total = 0.0;
    for (double x : p.probs) {
        if (!std::isfinite(x) || x < 0.0) throw ValueError("sample_counts: probabilities must be finite and non-negative");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValueError("sample_counts: probabilities do not sum to one");

    Rng rng = make_rng(seed);
    OutcomeCounts c;
    c.basis_id = p.basis_id;
    c.shots = Shots::finite(shots);
    c.counts.assign(p.dim(), 0);
    std::uint64_t remaining = shots;
    double mass = total;
    for (std::size_t j = 0; j + 1 < p.dim() && remaining > 0; ++j) {
        const double q = mass > 0.0 ? std::clamp(p.probs[j] / mass, 0.0, 1.0) : 0.0;
        std::uint64_t k = 0;
        if (q >= 1.0) {
            k = remaining;
        } else if (q > 0.0) {
            std::binomial_distribution<std::uint64_t> binom(remaining, q);
            k = binom(rng);
        }
        c.counts[j] = k;
        remaining -= k;
        mass -= p.probs[j];
    }
    c.counts.back() += remaining;
    return c;
}

OutcomeCounts measure(const ProbabilityVector& p, Shots shots, std::uint64_t seed) {
    if (!shots.is_exact()) return sample_counts(p, shots.count(), seed);
    OutcomeCounts c;
    c.basis_id = p.basis_id;
    c.shots = Shots::exact();
    c.exact_probs = p.probs;
    return c;
}

ProbabilityVector frequencies(const OutcomeCounts& c) {
    if (c.shots.is_exact()) return ProbabilityVector{c.basis_id, c.exact_probs};
    std::uint64_t sum = 0;
    for (std::uint64_t k : c.counts) sum += k;
    if (sum == 0) throw ValueError("frequencies: zero shots");
    if (sum != c.shots.count()) throw ValueError("frequencies: counts do not sum to the shot total");
    ProbabilityVector f{c.basis_id, std::vector<double>(c.counts.size())};
    const double n = static_cast<double>(sum);
    for (std::size_t j = 0; j < c.counts.size(); ++j) f.probs[j] = static_cast<double>(c.counts[j]) / n;
    return f;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw DimensionError("total_variation: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

} // namespace pstomo
