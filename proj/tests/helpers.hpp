#pragma once

#include <vector>

#include "pstomo/bases.hpp"
#include "pstomo/measurement.hpp"
#include "pstomo/states.hpp"

namespace pstomo::testing {

inline std::vector<ProbabilityVector> exact_freqs(const NoisyState& s, const std::vector<OrthonormalBasis>& bases) {
    std::vector<ProbabilityVector> out;
    for (std::size_t b = 0; b < bases.size(); ++b) out.push_back(born_probabilities(s, bases[b], static_cast<int>(b)));
    return out;
}

inline std::vector<ProbabilityVector> sampled_freqs(const NoisyState& s, const std::vector<OrthonormalBasis>& bases,
                                                    std::uint64_t shots, std::uint64_t seed) {
    std::vector<ProbabilityVector> out;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        out.push_back(frequencies(sample_counts(born_probabilities(s, bases[b], static_cast<int>(b)), shots, seed * 131 + b)));
    }
    return out;
}

} // namespace pstomo::testing
