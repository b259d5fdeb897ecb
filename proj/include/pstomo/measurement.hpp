#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pstomo/bases.hpp"
#include "pstomo/states.hpp"

namespace pstomo {

// Shots per basis, or the infinite-shot limit.
class Shots {
  public:
    static constexpr Shots exact() noexcept { return Shots{}; }
    static Shots finite(std::uint64_t n);
    // Parses a positive integer or the literal "exact".
    static Shots parse(const std::string& text);

    bool is_exact() const noexcept { return !count_.has_value(); }
    std::uint64_t count() const;
    std::string to_string() const;

    friend bool operator==(const Shots&, const Shots&) = default;

  private:
    constexpr Shots() = default;
    std::optional<std::uint64_t> count_;
};

struct ProbabilityVector {
    int basis_id = 0;
    std::vector<double> probs;

    std::size_t dim() const noexcept { return probs.size(); }
    double operator[](std::size_t j) const { return probs[j]; }
};

struct OutcomeCounts {
    int basis_id = 0;
    Shots shots = Shots::exact();
    // Finite mode: histogram summing to shots. Exact mode: empty.
    std::vector<std::uint64_t> counts;
    // Exact mode: Born probabilities passed through unchanged. Finite mode: empty.
    std::vector<double> exact_probs;
};

// p_j = (1 - lambda) |<b_j|psi>|^2 + lambda / d.
ProbabilityVector born_probabilities(const NoisyState& state, const OrthonormalBasis& basis, int basis_id = 0);

// Multinomial histogram of `shots` outcomes by sequential conditional binomials.
OutcomeCounts sample_counts(const ProbabilityVector& p, std::uint64_t shots, std::uint64_t seed);

// Finite shots draw counts; exact shots wrap the probabilities.
OutcomeCounts measure(const ProbabilityVector& p, Shots shots, std::uint64_t seed);

ProbabilityVector frequencies(const OutcomeCounts& c);

double total_variation(std::span<const double> p, std::span<const double> q);

} // namespace pstomo
