#include "pstomo/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <string>

#include "pstomo/error.hpp"

namespace pstomo {

namespace {

// <v|psi> with v restricted to the labels of `est`.
Complex project(std::span<const Complex> v, const NodeEstimate& est) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < est.support.size(); ++i) s += std::conj(v[est.support[i] - 1]) * est.values[i];
    return s;
}

double pair_sine(const Complex& g1, const Complex& g2) {
    return std::abs((g1 * std::conj(g2)).imag()) / (std::abs(g1) * std::abs(g2));
}

double rms_residual(std::span<const PhaseRow> rows, const Complex& z) {
    if (rows.empty()) return 0.0;
    double s = 0.0;
    for (const PhaseRow& r : rows) {
        const double e = (r.gamma * z).real() - r.ptilde;
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(rows.size()));
}

NodeEstimate merge(std::size_t m, const NodeEstimate& lhs, const NodeEstimate& rhs, const Complex& phase) {
    NodeEstimate out;
    out.node = m;
    out.support.reserve(lhs.support.size() + rhs.support.size());
    out.values.reserve(lhs.support.size() + rhs.support.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < lhs.support.size() || j < rhs.support.size()) {
        if (j == rhs.support.size() || (i < lhs.support.size() && lhs.support[i] < rhs.support[j])) {
            out.support.push_back(lhs.support[i]);
            out.values.push_back(lhs.values[i]);
            ++i;
        } else {
            out.support.push_back(rhs.support[j]);
            out.values.push_back(phase * rhs.values[j]);
            ++j;
        }
    }
    return out;
}

} // namespace

double NodeEstimate::norm() const { return pstomo::norm(values); }

std::string_view to_string(NodeStatus s) noexcept {
    switch (s) {
    case NodeStatus::ok: return "ok";
    case NodeStatus::degenerate_fallback: return "degenerate-fallback";
    case NodeStatus::ambiguous: return "ambiguous";
    }
    return "unknown";
}

std::vector<NodeEstimate> amplitudes_from_canonical(const TreeLayout& tree, const ProbabilityVector& f) {
    const std::size_t d = tree.dim();
    if (f.dim() != d) throw DimensionError("amplitudes_from_canonical: frequency vector has the wrong length");
    std::vector<NodeEstimate> est(tree.node_count() + 1);
    for (std::size_t m = d; m <= tree.node_count(); ++m) {
        const std::size_t k = tree.leaf_label(m);
        est[m].node = m;
        est[m].support = {k};
        est[m].values = {Complex{std::sqrt(std::max(f[k - 1], 0.0)), 0.0}};
    }
    return est;
}

PhaseRow gamma_ptilde(const TreeLayout& tree, std::size_t m, const NodeEstimate& alpha, const NodeEstimate& beta,
                      std::span<const Complex> projector, double p_measured) {
    if (!tree.is_internal(m)) throw DimensionError("gamma_ptilde: node " + std::to_string(m) + " is not internal");
    if (projector.size() != tree.dim()) throw DimensionError("gamma_ptilde: projector has the wrong length");
    const auto ls = tree.support(TreeLayout::left(m));
    const auto rs = tree.support(TreeLayout::right(m));
    if (!std::equal(ls.begin(), ls.end(), alpha.support.begin(), alpha.support.end()) ||
        !std::equal(rs.begin(), rs.end(), beta.support.begin(), beta.support.end())) {
        throw DimensionError("gamma_ptilde: child estimates do not match the children's supports");
    }
    double outside = 0.0;
    std::vector<bool> inside(tree.dim(), false);
    for (std::size_t k : tree.support(m)) inside[k - 1] = true;
    for (std::size_t i = 0; i < projector.size(); ++i) {
        if (!inside[i]) outside += std::norm(projector[i]);
    }
    if (outside > 1e-20) {
        throw DimensionError("gamma_ptilde: projector is not supported on node " + std::to_string(m));
    }

    const Complex a = project(projector, alpha);    // <alpha_j|psi_alpha>
    const Complex b = project(projector, beta);     // <beta_j|psi_beta>
    PhaseRow row;
    row.gamma = std::conj(a) * b;
    row.ptilde = 0.5 * (p_measured - std::norm(a) - std::norm(b));
    return row;
}

Complex two_row_closed_form(const PhaseRow& r1, const PhaseRow& r2) {
    const double det = (r1.gamma * std::conj(r2.gamma)).imag();
    const Complex num = r2.ptilde * std::conj(r1.gamma) - r1.ptilde * std::conj(r2.gamma);
    return Complex{0.0, 1.0} * num / det;
}

namespace {

// Applies the Householder reflector that zeroes x[k+1..] to x and to each column in `others`;
// returns the new x[k].
double householder_step(std::vector<double>& x, std::size_t k, std::initializer_list<std::vector<double>*> others) {
    double alpha = 0.0;
    for (std::size_t i = k; i < x.size(); ++i) alpha += x[i] * x[i];
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) return 0.0;
    if (x[k] > 0.0) alpha = -alpha;
    std::vector<double> v(x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
    v[0] -= alpha;
    double vv = 0.0;
    for (double e : v) vv += e * e;
    if (vv == 0.0) return alpha;
    for (std::vector<double>* col : others) {
        double dot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * (*col)[k + i];
        const double f = 2.0 * dot / vv;
        for (std::size_t i = 0; i < v.size(); ++i) (*col)[k + i] -= f * v[i];
    }
    return alpha;
}

} // namespace

Complex least_squares_phase(std::span<const PhaseRow> rows) {
    // Columns (Re G, -Im G); unknowns (cos phi, sin phi). Solved by Householder QR.
    std::vector<double> c1, c2, rhs;
    for (const PhaseRow& r : rows) {
        c1.push_back(r.gamma.real());
        c2.push_back(-r.gamma.imag());
        rhs.push_back(r.ptilde);
    }
    if (rows.size() < 2) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
    }
    const double r11 = householder_step(c1, 0, {&c2, &rhs});
    const double r12 = c2[0];
    const double r22 = householder_step(c2, 1, {&rhs});
    const double y = rhs[1] / r22;
    return Complex{(rhs[0] - r12 * y) / r11, y};
}

PhaseSolution solve_phase(std::span<const PhaseRow> rows, double tol_degenerate) {
    if (rows.empty()) throw ValueError("solve_phase: at least one row is required");
    std::vector<PhaseRow> usable;
    usable.reserve(rows.size());
    for (const PhaseRow& r : rows) {
        if (std::abs(r.gamma) >= kGammaFloor) usable.push_back(r);
    }

    PhaseSolution sol;
    sol.usable_rows = usable.size();
    if (usable.empty()) {
        sol.status = NodeStatus::degenerate_fallback;
        sol.solution = Complex{1.0, 0.0};
        sol.candidates = {sol.solution};
        return sol;
    }

    for (std::size_t j = 0; j < usable.size(); ++j) {
        for (std::size_t k = j + 1; k < usable.size(); ++k) {
            sol.degeneracy_metric = std::max(sol.degeneracy_metric, pair_sine(usable[j].gamma, usable[k].gamma));
        }
    }

    if (usable.size() >= 2 && sol.degeneracy_metric > tol_degenerate) {
        const Complex z = least_squares_phase(usable);
        const double n = std::abs(z);
        if (std::isfinite(n) && n > 0.0) {
            sol.solution = z / n;
            sol.status = NodeStatus::ok;
            sol.candidates = {sol.solution};
            sol.residual = rms_residual(usable, sol.solution);
            return sol;
        }
    }

    // Every pair is degenerate: one equation Re[G e^{i phi}] = p with |e^{i phi}| = 1.
    const auto strongest = std::max_element(usable.begin(), usable.end(), [](const PhaseRow& x, const PhaseRow& y) {
        return std::abs(x.gamma) < std::abs(y.gamma);
    });
    const double g2 = std::norm(strongest->gamma);
    double disc = g2 - strongest->ptilde * strongest->ptilde;
    if (disc < 0.0) {
        disc = 0.0;
        sol.clamped = true;
    }
    const double root = std::sqrt(disc);
    Complex plus = Complex{strongest->ptilde, root} / strongest->gamma;
    Complex minus = Complex{strongest->ptilde, -root} / strongest->gamma;
    plus /= std::abs(plus);
    minus /= std::abs(minus);
    sol.status = NodeStatus::ambiguous;
    sol.candidates = {plus, minus};

    // Remaining near-parallel rows still carry a little information; use it when it discriminates.
    const double rp = rms_residual(usable, plus);
    const double rm = rms_residual(usable, minus);
    const double scale = std::sqrt(g2) + std::abs(strongest->ptilde);
    if (std::abs(rp - rm) > 1e-12 * scale) {
        sol.solution = rp < rm ? plus : minus;
    } else {
        sol.solution = plus.real() >= minus.real() ? plus : minus;
    }
    sol.residual = std::min(rp, rm);
    return sol;
}

ReconstructionOptions ReconstructionOptions::for_shots(Shots shots) {
    ReconstructionOptions o;
    o.tol_degenerate =
        shots.is_exact() ? kExactDegeneracyTol : 10.0 / std::sqrt(static_cast<double>(shots.count()));
    return o;
}

std::size_t ReconstructionReport::count(NodeStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [s](const NodeReport& n) { return n.status == s; }));
}

const NodeReport& ReconstructionReport::node(std::size_t m) const {
    for (const NodeReport& n : nodes) {
        if (n.m == m) return n;
    }
    throw DimensionError("report has no entry for node " + std::to_string(m));
}

ReconstructionReport reconstruct(const TreeLayout& tree, std::span<const OrthonormalBasis> bases,
                                 std::span<const ProbabilityVector> freqs, const ReconstructionOptions& options) {
    const std::size_t d = tree.dim();
    if (bases.empty() || bases[0].kind() != BasisKind::canonical) {
        throw ValueError("reconstruct: the first basis must be the canonical basis");
    }
    if (d > 1 && bases.size() < 3) throw ValueError("reconstruct: at least two bases beyond the canonical one are required");
    if (freqs.size() != bases.size()) throw DimensionError("reconstruct: one frequency vector per basis is required");
    for (std::size_t b = 0; b < bases.size(); ++b) {
        if (bases[b].dim() != d || freqs[b].dim() != d) throw DimensionError("reconstruct: dimension mismatch");
        if (b > 0 && !bases[b].has_node_map()) throw ValueError("reconstruct: structured bases need a node map");
    }

    std::vector<NodeEstimate> est = amplitudes_from_canonical(tree, freqs[0]);
    ReconstructionReport report;
    report.nodes.reserve(d > 0 ? d - 1 : 0);
    std::vector<PhaseRow> rows;
    rows.reserve(bases.size());

    for (std::size_t m = d - 1; m >= 1; --m) {
        NodeEstimate& lhs = est[TreeLayout::left(m)];
        NodeEstimate& rhs = est[TreeLayout::right(m)];
        NodeReport nr;
        nr.m = m;
        Complex phase{1.0, 0.0};
        if (lhs.norm() < kNullChildNorm || rhs.norm() < kNullChildNorm) {
            nr.status = NodeStatus::degenerate_fallback;
            nr.candidates = {phase};
        } else {
            rows.clear();
            for (std::size_t b = 1; b < bases.size(); ++b) {
                const std::size_t j = bases[b].node_index(m);
                rows.push_back(gamma_ptilde(tree, m, lhs, rhs, bases[b].vector(j), freqs[b][j]));
            }
            PhaseSolution sol = solve_phase(rows, options.tol_degenerate);
            phase = sol.solution;
            nr.status = sol.status;
            nr.residual = sol.residual;
            nr.degeneracy_metric = sol.degeneracy_metric;
            nr.rows = sol.usable_rows;
            nr.clamped = sol.clamped;
            nr.candidates = std::move(sol.candidates);
        }
        est[m] = merge(m, lhs, rhs, phase);
        lhs = {};
        rhs = {};
        report.nodes.push_back(std::move(nr));
    }

    // support(1) = 1..d in order, so the root values are the dense amplitude vector.
    report.state = PureState::normalized(std::move(est[1].values)).canonical();
    return report;
}

PureState make_degenerate_state(const TreeLayout& tree, std::span<const OrthonormalBasis> bases, std::size_t m,
                                std::uint64_t seed, bool allow_zero_amplitude) {
    if (!tree.is_internal(m)) throw DimensionError("make_degenerate_state: node " + std::to_string(m) + " is not internal");
    if (bases.size() < 3 || bases[0].kind() != BasisKind::canonical) {
        throw ValueError("make_degenerate_state: expected the canonical basis followed by at least two structured bases");
    }
    const OrthonormalBasis& first = bases[1];
    if (first.dim() != tree.dim()) throw DimensionError("make_degenerate_state: dimension mismatch");

    CVector psi = haar_random_vector(tree.dim(), seed);
    const std::size_t lc = TreeLayout::left(m);
    const std::size_t rc = TreeLayout::right(m);
    std::size_t side = 0;
    if (tree.node_dim(lc) >= 2) {
        side = lc;
    } else if (tree.node_dim(rc) >= 2) {
        side = rc;
    }

    if (side == 0) {
        if (!allow_zero_amplitude) {
            throw InfeasibleError("make_degenerate_state: both children of node " + std::to_string(m) +
                                  " are leaves; gamma = 0 needs a zero amplitude");
        }
        psi[tree.leaf_label(lc) - 1] = 0.0;
    } else {
        // Remove the component of psi along the first basis' projector part on the chosen child.
        const auto v = first.node_vector(m);
        const auto supp = tree.support(side);
        Complex overlap{0.0, 0.0};
        double weight = 0.0;
        for (std::size_t k : supp) {
            overlap += std::conj(v[k - 1]) * psi[k - 1];
            weight += std::norm(v[k - 1]);
        }
        if (weight > 0.0) {
            for (std::size_t k : supp) psi[k - 1] -= overlap / weight * v[k - 1];
        }
    }
    return PureState::normalized(std::move(psi)).canonical();
}

} // namespace pstomo
