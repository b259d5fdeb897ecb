#include "pstomo/tree.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "pstomo/error.hpp"

namespace pstomo {

TreeLayout::TreeLayout(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw DimensionError("build_tree: dimension must be at least 1");
    const std::size_t n = node_count();
    node_dims_.assign(n + 1, 0);
    supports_.assign(n + 1, {});
    for (std::size_t m = n; m >= dim_; --m) {
        node_dims_[m] = 1;
        supports_[m] = {m - dim_ + 1};
        if (m == dim_) break;
    }
    for (std::size_t m = dim_ - 1; m >= 1; --m) {
        node_dims_[m] = node_dims_[left(m)] + node_dims_[right(m)];
        auto& s = supports_[m];
        const auto& l = supports_[left(m)];
        const auto& r = supports_[right(m)];
        s.reserve(l.size() + r.size());
        std::merge(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(s));
    }
}

void TreeLayout::check(std::size_t m) const {
    if (m < 1 || m > node_count()) {
        throw DimensionError("tree node " + std::to_string(m) + " out of range 1.." + std::to_string(node_count()));
    }
}

bool TreeLayout::is_leaf(std::size_t m) const {
    check(m);
    return m >= dim_;
}

bool TreeLayout::is_internal(std::size_t m) const {
    check(m);
    return m < dim_;
}

std::size_t TreeLayout::leaf_label(std::size_t m) const {
    if (!is_leaf(m)) throw DimensionError("leaf_label: node " + std::to_string(m) + " is internal");
    return m - dim_ + 1;
}

std::size_t TreeLayout::leaf_of(std::size_t label) const {
    if (label < 1 || label > dim_) throw DimensionError("leaf_of: label out of range");
    return label + dim_ - 1;
}

std::size_t TreeLayout::node_dim(std::size_t m) const {
    check(m);
    return node_dims_[m];
}

std::size_t TreeLayout::depth(std::size_t m) const {
    check(m);
    std::size_t d = 0;
    while (m > 1) {
        m = parent(m);
        ++d;
    }
    return d;
}

std::span<const std::size_t> TreeLayout::support(std::size_t m) const {
    check(m);
    return supports_[m];
}

std::vector<std::size_t> TreeLayout::leaf_pair_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t m = 1; m < dim_; ++m) {
        if (left(m) >= dim_ && right(m) >= dim_) out.push_back(m);
    }
    return out;
}

TreeLayout build_tree(std::size_t dim) { return TreeLayout(dim); }

} // namespace pstomo
