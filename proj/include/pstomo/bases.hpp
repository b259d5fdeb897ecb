#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pstomo/states.hpp"
#include "pstomo/tree.hpp"

namespace pstomo {

enum class BasisKind { canonical, tree, random_subspace };

std::string_view to_string(BasisKind kind) noexcept;
BasisKind basis_kind_from_string(std::string_view name);

// Fixed parameters shared by every node of one tree basis.
struct TreeBasisParams {
    double a = 0.70710678118654752440;
    double b = 0.70710678118654752440;
    double phi = 0.0;

    // Throws ValueError unless a^2 + b^2 = 1 within 1e-12 and phi is finite.
    void validate() const;
};

class OrthonormalBasis {
  public:
    OrthonormalBasis(BasisKind kind, std::vector<CVector> vectors, std::vector<std::size_t> node_map,
                     std::optional<TreeBasisParams> params = std::nullopt);

    std::size_t dim() const noexcept { return vectors_.size(); }
    BasisKind kind() const noexcept { return kind_; }
    const std::optional<TreeBasisParams>& params() const noexcept { return params_; }

    std::span<const Complex> vector(std::size_t j) const { return vectors_.at(j); }
    const std::vector<CVector>& vectors() const noexcept { return vectors_; }

    bool has_node_map() const noexcept { return !node_map_.empty(); }
    // Index of the basis vector assigned to internal node m. Throws for the canonical basis.
    std::size_t node_index(std::size_t m) const;
    std::span<const Complex> node_vector(std::size_t m) const { return vector(node_index(m)); }
    // node_map()[m] for m in 1..d-1; slot 0 unused. Empty for the canonical basis.
    std::span<const std::size_t> node_map() const noexcept { return node_map_; }

  private:
    BasisKind kind_;
    std::vector<CVector> vectors_;
    std::vector<std::size_t> node_map_;
    std::optional<TreeBasisParams> params_;
};

OrthonormalBasis canonical_basis(std::size_t dim);

// r_m = a s_{2m} + b e^{i phi} s_{2m+1},  s_m = b s_{2m} - a e^{i phi} s_{2m+1}, leaves s = |k>.
// Output vectors are {r_1, ..., r_{d-1}, s_1}; node m maps to vector m - 1.
OrthonormalBasis tree_basis(const TreeLayout& tree, const TreeBasisParams& params);

// One Haar vector per internal node support, Gram-Schmidt in descending node
// order, completed by a vector orthogonal to all of them.
OrthonormalBasis random_subspace_basis(const TreeLayout& tree, std::uint64_t seed);

// Largest |G_ij - delta_ij| over the Gram matrix.
double gram_deviation(const OrthonormalBasis& basis);

// Checks that each node-mapped vector lives on the node's support and touches both children.
bool node_supports_exact(const OrthonormalBasis& basis, const TreeLayout& tree, double zero_tol = 0.0);

enum class BasisMode { tree, random_subspace };

std::string_view to_string(BasisMode mode) noexcept;
BasisMode basis_mode_from_string(std::string_view name);

// Canonical basis followed by n_bases - 1 structured bases. Tree bases use a = b = 1/sqrt(2)
// and an independent uniform phi in [0, 2 pi) per basis.
std::vector<OrthonormalBasis> experiment_bases(const TreeLayout& tree, std::size_t n_bases, BasisMode mode,
                                               std::uint64_t seed);

// The k-th structured basis of experiment_bases (k >= 1). Lets callers append one more basis
// consistent with an existing set.
OrthonormalBasis experiment_basis(const TreeLayout& tree, std::size_t k, BasisMode mode, std::uint64_t seed);

} // namespace pstomo
