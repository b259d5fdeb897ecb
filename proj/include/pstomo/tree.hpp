#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pstomo {

// Heap-indexed complete full binary tree with `dim` leaves.
//
// Nodes are numbered 1..2d-1. Node m has children 2m and 2m+1 and parent m/2.
// Internal nodes are 1..d-1, leaves are d..2d-1, and leaf m carries the
// canonical label k = m - d + 1. The support of a node is the sorted set of
// labels of the leaves below it; it spans the subspace the node lives in.
class TreeLayout {
  public:
    explicit TreeLayout(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t node_count() const noexcept { return 2 * dim_ - 1; }
    std::size_t internal_count() const noexcept { return dim_ - 1; }

    bool is_leaf(std::size_t m) const;
    bool is_internal(std::size_t m) const;

    static constexpr std::size_t left(std::size_t m) noexcept { return 2 * m; }
    static constexpr std::size_t right(std::size_t m) noexcept { return 2 * m + 1; }
    static constexpr std::size_t parent(std::size_t m) noexcept { return m / 2; }

    // Canonical label of leaf m. Throws for internal nodes.
    std::size_t leaf_label(std::size_t m) const;
    // Leaf node holding canonical label k.
    std::size_t leaf_of(std::size_t label) const;

    std::size_t node_dim(std::size_t m) const;
    std::size_t depth(std::size_t m) const;

    // Sorted canonical labels (1-based) spanning the node's subspace.
    std::span<const std::size_t> support(std::size_t m) const;

    // Internal nodes whose two children are both leaves.
    std::vector<std::size_t> leaf_pair_nodes() const;

  private:
    void check(std::size_t m) const;

    std::size_t dim_;
    std::vector<std::size_t> node_dims_;                // indexed by m, slot 0 unused
    std::vector<std::vector<std::size_t>> supports_;    // indexed by m, slot 0 unused
};

TreeLayout build_tree(std::size_t dim);

inline std::span<const std::size_t> node_support(const TreeLayout& t, std::size_t m) { return t.support(m); }

} // namespace pstomo
