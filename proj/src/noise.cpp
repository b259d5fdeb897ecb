#include "pstomo/noise.hpp"

#include <algorithm>
#include <cmath>

#include "pstomo/error.hpp"

namespace pstomo {

namespace {

constexpr double kDistinctPhaseTol = 1e-10;

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::optional<Complex> solve_unnormalized_node(std::span<const LambdaRow> rows) {
    if (rows.size() < 2) return std::nullopt;
    bool independent = false;
    for (std::size_t j = 0; j < rows.size() && !independent; ++j) {
        for (std::size_t k = j + 1; k < rows.size(); ++k) {
            if (std::abs(std::sin(rows[j].phase - rows[k].phase)) > kDistinctPhaseTol) {
                independent = true;
                break;
            }
        }
    }
    if (!independent) return std::nullopt;

    double s11 = 0.0, s12 = 0.0, s22 = 0.0, t1 = 0.0, t2 = 0.0;
    for (const LambdaRow& r : rows) {
        const double c = std::cos(r.phase);
        const double s = std::sin(r.phase);
        s11 += c * c;
        s12 += c * s;
        s22 += s * s;
        t1 += c * r.ptilde;
        t2 += s * r.ptilde;
    }
    const double det = s11 * s22 - s12 * s12;
    return Complex{(s22 * t1 - s12 * t2) / det, (s11 * t2 - s12 * t1) / det};
}

LambdaNodeValue estimate_lambda_node(double p_k, double p_k1, double lambda_abs, std::size_t dim) {
    if (dim == 0) throw DimensionError("estimate_lambda_node: dimension must be at least 1");
    LambdaNodeValue out;
    double arg = (p_k - p_k1) * (p_k - p_k1) + lambda_abs * lambda_abs;
    if (arg < 0.0) {
        arg = 0.0;
        out.clamped = true;
    }
    const double raw = 0.5 * static_cast<double>(dim) * (p_k + p_k1 - std::sqrt(arg));
    out.lambda_hat = std::clamp(raw, 0.0, 1.0);
    if (out.lambda_hat != raw) out.clamped = true;
    return out;
}

LambdaEstimate estimate_lambda(const TreeLayout& tree, std::span<const OrthonormalBasis> bases,
                               std::span<const ProbabilityVector> freqs) {
    const std::size_t d = tree.dim();
    if (bases.size() < 3 || bases[0].kind() != BasisKind::canonical) {
        throw ValueError("estimate_lambda: expected the canonical basis followed by at least two structured bases");
    }
    if (freqs.size() != bases.size()) throw DimensionError("estimate_lambda: one frequency vector per basis is required");

    const ProbabilityVector& canon = freqs[0];
    LambdaEstimate out;
    std::vector<LambdaRow> rows;
    for (std::size_t m : tree.leaf_pair_nodes()) {
        const std::size_t k = tree.leaf_label(TreeLayout::left(m));
        const std::size_t k1 = tree.leaf_label(TreeLayout::right(m));
        const double pk = canon[k - 1];
        const double pk1 = canon[k1 - 1];
        rows.clear();
        for (std::size_t b = 1; b < bases.size(); ++b) {
            if (bases[b].dim() != d || freqs[b].dim() != d) throw DimensionError("estimate_lambda: dimension mismatch");
            const std::size_t j = bases[b].node_index(m);
            const auto v = bases[b].vector(j);
            const double amod = std::abs(v[k - 1]);
            const double bmod = std::abs(v[k1 - 1]);
            if (amod * bmod < 1e-12) continue;
            LambdaRow r;
            r.phase = std::arg(v[k1 - 1]) - std::arg(v[k - 1]);
            r.ptilde = (freqs[b][j] - pk * amod * amod - pk1 * bmod * bmod) / (amod * bmod);
            rows.push_back(r);
        }
        const auto solved = solve_unnormalized_node(rows);
        if (!solved) {
            out.skipped_nodes.push_back(m);
            continue;
        }
        NodeLambdaEstimate e;
        e.m = m;
        e.lambda_abs = std::abs(*solved);
        const LambdaNodeValue v = estimate_lambda_node(pk, pk1, e.lambda_abs, d);
        e.lambda_hat = v.lambda_hat;
        e.clamped = v.clamped;
        out.per_node.push_back(e);
    }
    if (out.per_node.empty()) throw ValueError("estimate_lambda: no leaf-pair node has a usable row set");

    std::vector<double> values;
    values.reserve(out.per_node.size());
    for (const auto& e : out.per_node) values.push_back(e.lambda_hat);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    out.spread = *hi - *lo;
    out.lambda_hat = median_of(std::move(values));
    return out;
}

ProbabilityVector correct_frequencies(const ProbabilityVector& f, double lambda_hat, std::size_t* clamped) {
    if (!(lambda_hat >= 0.0 && lambda_hat < 1.0)) throw ValueError("noise correction needs lambda_hat in [0, 1)");
    const double d = static_cast<double>(f.dim());
    ProbabilityVector out{f.basis_id, std::vector<double>(f.dim())};
    std::size_t n_clamped = 0;
    double total = 0.0;
    for (std::size_t j = 0; j < f.dim(); ++j) {
        double q = (f[j] - lambda_hat / d) / (1.0 - lambda_hat);
        if (q < 0.0) {
            q = 0.0;
            ++n_clamped;
        }
        out.probs[j] = q;
        total += q;
    }
    if (total <= 0.0) throw ValueError("noise correction removed all probability mass");
    for (double& q : out.probs) q /= total;
    if (clamped) *clamped = n_clamped;
    return out;
}

CorrectedAmplitudes correct_amplitudes(const ProbabilityVector& f, double lambda_hat, std::size_t dim) {
    if (f.dim() != dim) throw DimensionError("correct_amplitudes: frequency vector has the wrong length");
    CorrectedAmplitudes out;
    const ProbabilityVector q = correct_frequencies(f, lambda_hat, &out.clamped);
    out.amplitudes.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) out.amplitudes[k] = std::sqrt(q[k]);
    return out;
}

NoiseCorrectedReport reconstruct_noise_corrected(const TreeLayout& tree, std::span<const OrthonormalBasis> bases,
                                                 std::span<const ProbabilityVector> freqs,
                                                 const ReconstructionOptions& options) {
    NoiseCorrectedReport out;
    out.lambda = estimate_lambda(tree, bases, freqs);
    const double lambda = out.lambda.lambda_hat;
    std::vector<ProbabilityVector> corrected;
    corrected.reserve(freqs.size());
    for (std::size_t b = 0; b < freqs.size(); ++b) {
        std::size_t clamped = 0;
        corrected.push_back(correct_frequencies(freqs[b], lambda, &clamped));
        if (b == 0) out.clamped_amplitudes = clamped;
    }
    out.reconstruction = reconstruct(tree, bases, corrected, options);
    return out;
}

} // namespace pstomo
