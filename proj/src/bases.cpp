#include "pstomo/bases.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pstomo/error.hpp"
#include "pstomo/rng.hpp"

namespace pstomo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRankTolerance = 1e-8;
constexpr int kMaxResamples = 64;

// Haar vector living on `support` (1-based labels), embedded in dimension `dim`.
CVector haar_on_support(std::size_t dim, std::span<const std::size_t> support, std::uint64_t seed) {
    const CVector local = haar_random_vector(support.size(), seed);
    CVector v(dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < support.size(); ++i) v[support[i] - 1] = local[i];
    return v;
}

// Two passes of classical Gram-Schmidt against an orthonormal set; returns the residual norm.
double orthogonalize(CVector& v, const std::vector<const CVector*>& against) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const CVector* u : against) {
            const Complex c = inner(*u, v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * (*u)[i];
        }
    }
    return norm(v);
}

double weight_on(std::span<const Complex> v, std::span<const std::size_t> labels) {
    double s = 0.0;
    for (std::size_t k : labels) s += std::norm(v[k - 1]);
    return std::sqrt(s);
}

} // namespace

std::string_view to_string(BasisKind kind) noexcept {
    switch (kind) {
    case BasisKind::canonical: return "canonical";
    case BasisKind::tree: return "tree";
    case BasisKind::random_subspace: return "random-subspace";
    }
    return "unknown";
}

BasisKind basis_kind_from_string(std::string_view name) {
    if (name == "canonical") return BasisKind::canonical;
    if (name == "tree") return BasisKind::tree;
    if (name == "random-subspace" || name == "random") return BasisKind::random_subspace;
    throw ValueError("unknown basis kind '" + std::string(name) + "'");
}

std::string_view to_string(BasisMode mode) noexcept {
    return mode == BasisMode::tree ? "tree" : "random";
}

BasisMode basis_mode_from_string(std::string_view name) {
    if (name == "tree") return BasisMode::tree;
    if (name == "random" || name == "random-subspace") return BasisMode::random_subspace;
    throw ValueError("unknown basis mode '" + std::string(name) + "' (expected tree or random)");
}

void TreeBasisParams::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(phi)) {
        throw ValueError("tree basis parameters must be finite");
    }
    if (std::abs(a * a + b * b - 1.0) > 1e-12) throw ValueError("tree basis parameters need a^2 + b^2 = 1");
}

OrthonormalBasis::OrthonormalBasis(BasisKind kind, std::vector<CVector> vectors, std::vector<std::size_t> node_map,
                                   std::optional<TreeBasisParams> params)
    : kind_(kind), vectors_(std::move(vectors)), node_map_(std::move(node_map)), params_(params) {
    const std::size_t d = vectors_.size();
    if (d == 0) throw DimensionError("basis must contain at least one vector");
    for (const CVector& v : vectors_) {
        if (v.size() != d) throw DimensionError("basis vectors must have length equal to the basis size");
    }
    if (kind_ != BasisKind::canonical) {
        if (node_map_.size() != d) throw DimensionError("node map must have one slot per internal node plus slot 0");
        for (std::size_t m = 1; m < d; ++m) {
            if (node_map_[m] >= d) throw DimensionError("node map entry out of range");
        }
    }
}

std::size_t OrthonormalBasis::node_index(std::size_t m) const {
    if (node_map_.empty()) throw DimensionError("basis of kind " + std::string(to_string(kind_)) + " has no node map");
    if (m < 1 || m >= node_map_.size()) throw DimensionError("node " + std::to_string(m) + " is not internal");
    return node_map_[m];
}

OrthonormalBasis canonical_basis(std::size_t dim) {
    if (dim == 0) throw DimensionError("canonical_basis: dimension must be at least 1");
    std::vector<CVector> vs(dim, CVector(dim, Complex{0.0, 0.0}));
    for (std::size_t j = 0; j < dim; ++j) vs[j][j] = 1.0;
    return OrthonormalBasis(BasisKind::canonical, std::move(vs), {});
}

OrthonormalBasis tree_basis(const TreeLayout& tree, const TreeBasisParams& params) {
    params.validate();
    const std::size_t d = tree.dim();
    TreeBasisParams p = params;
    p.phi = std::fmod(p.phi, kTwoPi);
    if (p.phi < 0.0) p.phi += kTwoPi;
    const Complex bphase = p.b * std::polar(1.0, p.phi);
    const Complex aphase = p.a * std::polar(1.0, p.phi);

    // s[m] for every node; r[m] for internal nodes.
    std::vector<CVector> s(tree.node_count() + 1);
    std::vector<CVector> r(d);
    for (std::size_t m = d; m <= tree.node_count(); ++m) {
        s[m].assign(d, Complex{0.0, 0.0});
        s[m][tree.leaf_label(m) - 1] = 1.0;
    }
    for (std::size_t m = d - 1; m >= 1; --m) {
        const CVector& sl = s[TreeLayout::left(m)];
        const CVector& sr = s[TreeLayout::right(m)];
        r[m].resize(d);
        s[m].resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            r[m][i] = p.a * sl[i] + bphase * sr[i];
            s[m][i] = p.b * sl[i] - aphase * sr[i];
        }
    }

    std::vector<CVector> vectors;
    vectors.reserve(d);
    std::vector<std::size_t> node_map(d, 0);
    for (std::size_t m = 1; m < d; ++m) {
        node_map[m] = vectors.size();
        vectors.push_back(std::move(r[m]));
    }
    vectors.push_back(std::move(s[1]));
    return OrthonormalBasis(BasisKind::tree, std::move(vectors), std::move(node_map), p);
}

OrthonormalBasis random_subspace_basis(const TreeLayout& tree, std::uint64_t seed) {
    const std::size_t d = tree.dim();
    if (d < 2) throw DimensionError("random_subspace_basis: dimension must be at least 2");

    std::vector<CVector> by_node(d);
    std::vector<const CVector*> done;
    done.reserve(d);
    for (std::size_t m = d - 1; m >= 1; --m) {
        const auto supp = tree.support(m);
        const auto ls = tree.support(TreeLayout::left(m));
        const auto rs = tree.support(TreeLayout::right(m));
        bool accepted = false;
        for (int attempt = 0; attempt < kMaxResamples && !accepted; ++attempt) {
            CVector v = haar_on_support(d, supp, derive_seed(seed, {m, static_cast<std::uint64_t>(attempt)}));
            const double n = orthogonalize(v, done);
            if (n < kRankTolerance) continue;
            for (Complex& z : v) z /= n;
            // Orthogonalization against descendants cannot leave supp(m); clear round-off there.
            std::vector<bool> inside(d, false);
            for (std::size_t k : supp) inside[k - 1] = true;
            for (std::size_t i = 0; i < d; ++i) {
                if (!inside[i]) v[i] = 0.0;
            }
            if (weight_on(v, ls) < kRankTolerance || weight_on(v, rs) < kRankTolerance) continue;
            const double n2 = norm(v);
            for (Complex& z : v) z /= n2;
            by_node[m] = std::move(v);
            accepted = true;
        }
        if (!accepted) throw InfeasibleError("random_subspace_basis: could not draw a full-rank vector");
        done.push_back(&by_node[m]);
    }

    CVector completion;
    for (int attempt = 0;; ++attempt) {
        if (attempt == kMaxResamples) throw InfeasibleError("random_subspace_basis: completion failed");
        completion = haar_random_vector(d, derive_seed(seed, {0ULL, static_cast<std::uint64_t>(attempt)}));
        const double n = orthogonalize(completion, done);
        if (n >= kRankTolerance) {
            for (Complex& z : completion) z /= n;
            break;
        }
    }

    std::vector<CVector> vectors;
    vectors.reserve(d);
    std::vector<std::size_t> node_map(d, 0);
    for (std::size_t m = 1; m < d; ++m) {
        node_map[m] = vectors.size();
        vectors.push_back(std::move(by_node[m]));
    }
    vectors.push_back(std::move(completion));
    return OrthonormalBasis(BasisKind::random_subspace, std::move(vectors), std::move(node_map));
}

double gram_deviation(const OrthonormalBasis& basis) {
    const auto& vs = basis.vectors();
    double worst = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i; j < vs.size(); ++j) {
            const Complex g = inner(vs[i], vs[j]);
            worst = std::max(worst, std::abs(g - Complex(i == j ? 1.0 : 0.0, 0.0)));
        }
    }
    return worst;
}

bool node_supports_exact(const OrthonormalBasis& basis, const TreeLayout& tree, double zero_tol) {
    if (!basis.has_node_map() || basis.dim() != tree.dim()) return false;
    const std::size_t d = tree.dim();
    for (std::size_t m = 1; m < d; ++m) {
        const auto v = basis.node_vector(m);
        std::vector<bool> inside(d, false);
        for (std::size_t k : tree.support(m)) inside[k - 1] = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (!inside[i] && std::abs(v[i]) > zero_tol) return false;
        }
        if (weight_on(v, tree.support(TreeLayout::left(m))) <= zero_tol) return false;
        if (weight_on(v, tree.support(TreeLayout::right(m))) <= zero_tol) return false;
    }
    return true;
}

OrthonormalBasis experiment_basis(const TreeLayout& tree, std::size_t k, BasisMode mode, std::uint64_t seed) {
    if (k == 0) return canonical_basis(tree.dim());
    const std::uint64_t s = derive_seed(seed, {k});
    if (mode == BasisMode::random_subspace) return random_subspace_basis(tree, s);
    Rng rng = make_rng(s);
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    TreeBasisParams params;
    params.phi = uniform(rng);
    return tree_basis(tree, params);
}

std::vector<OrthonormalBasis> experiment_bases(const TreeLayout& tree, std::size_t n_bases, BasisMode mode,
                                               std::uint64_t seed) {
    std::vector<OrthonormalBasis> out;
    out.reserve(n_bases);
    for (std::size_t k = 0; k < n_bases; ++k) out.push_back(experiment_basis(tree, k, mode, seed));
    return out;
}

} // namespace pstomo
