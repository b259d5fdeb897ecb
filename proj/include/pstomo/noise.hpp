#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pstomo/bases.hpp"
#include "pstomo/measurement.hpp"
#include "pstomo/reconstruction.hpp"
#include "pstomo/tree.hpp"

namespace pstomo {

// One projector a|k> + b e^{i phase}|k+1> on a leaf-pair node:
//   ptilde = (p - p_k |a|^2 - p_{k+1} |b|^2) / (|a| |b|).
struct LambdaRow {
    double phase = 0.0;
    double ptilde = 0.0;
};

// Least-squares solution of [cos phase_j, sin phase_j] x = ptilde_j, not normalized.
// Its modulus is 2 (1 - lambda) c_k c_{k+1}. Empty when fewer than two rows have distinct
// phases modulo pi.
std::optional<Complex> solve_unnormalized_node(std::span<const LambdaRow> rows);

struct LambdaNodeValue {
    double lambda_hat = 0.0;
    bool clamped = false;
};

// (d/2) [p_k + p_{k+1} - sqrt((p_k - p_{k+1})^2 + |Lambda|^2)], clamped into [0, 1].
LambdaNodeValue estimate_lambda_node(double p_k, double p_k1, double lambda_abs, std::size_t dim);

struct NodeLambdaEstimate {
    std::size_t m = 0;
    double lambda_abs = 0.0;
    double lambda_hat = 0.0;
    bool clamped = false;
};

struct LambdaEstimate {
    double lambda_hat = 0.0;    // median over usable nodes
    double spread = 0.0;        // max - min over usable nodes
    std::vector<NodeLambdaEstimate> per_node;
    std::vector<std::size_t> skipped_nodes;
};

// Runs the leaf-pair pipeline over every internal node with two leaf children.
// Throws ValueError when no node has a usable row set.
LambdaEstimate estimate_lambda(const TreeLayout& tree, std::span<const OrthonormalBasis> bases,
                               std::span<const ProbabilityVector> freqs);

struct CorrectedAmplitudes {
    std::vector<double> amplitudes;
    std::size_t clamped = 0;
};

// |c_k|^2 = (f_k - lambda/d) / (1 - lambda), negatives zeroed, renormalized.
CorrectedAmplitudes correct_amplitudes(const ProbabilityVector& f, double lambda_hat, std::size_t dim);

// Same affine inversion applied to any basis' frequencies; sums to one.
ProbabilityVector correct_frequencies(const ProbabilityVector& f, double lambda_hat, std::size_t* clamped = nullptr);

struct NoiseCorrectedReport {
    ReconstructionReport reconstruction;
    LambdaEstimate lambda;
    std::size_t clamped_amplitudes = 0;
};

// Estimates lambda, de-mixes every basis' frequencies and reconstructs from those.
NoiseCorrectedReport reconstruct_noise_corrected(const TreeLayout& tree, std::span<const OrthonormalBasis> bases,
                                                 std::span<const ProbabilityVector> freqs,
                                                 const ReconstructionOptions& options = {});

} // namespace pstomo
