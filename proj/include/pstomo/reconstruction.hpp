#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pstomo/bases.hpp"
#include "pstomo/measurement.hpp"
#include "pstomo/states.hpp"
#include "pstomo/tree.hpp"

namespace pstomo {

// Unnormalized |psi~_m>, stored sparsely: values[i] is the amplitude of label support[i].
struct NodeEstimate {
    std::size_t node = 0;
    std::vector<std::size_t> support;
    CVector values;

    double norm() const;
};

// One projector's equation Re[gamma e^{i phi}] = ptilde.
struct PhaseRow {
    Complex gamma;
    double ptilde = 0.0;
};

enum class NodeStatus { ok, degenerate_fallback, ambiguous };

std::string_view to_string(NodeStatus s) noexcept;

struct PhaseSolution {
    Complex solution{1.0, 0.0};
    NodeStatus status = NodeStatus::ok;
    std::vector<Complex> candidates;
    // RMS of Re[gamma_j solution] - ptilde_j over the usable rows.
    double residual = 0.0;
    // Largest |Im[G_j G_k*]| / (|G_j| |G_k|) over usable row pairs; 0 when fewer than two rows.
    double degeneracy_metric = 0.0;
    std::size_t usable_rows = 0;
    // The single-row branch met |gamma|^2 < ptilde^2 and clamped the root.
    bool clamped = false;
};

inline constexpr double kGammaFloor = 1e-14;
inline constexpr double kExactDegeneracyTol = 1e-10;
inline constexpr double kNullChildNorm = 1e-9;

// c_k = sqrt(f_k) on each leaf.
std::vector<NodeEstimate> amplitudes_from_canonical(const TreeLayout& tree, const ProbabilityVector& f);

// Splits `projector` over the supports of node m's children and forms
//   ptilde = (p - |<alpha|psi_alpha>|^2 - |<beta|psi_beta>|^2) / 2,
//   gamma  = <psi_alpha|alpha> <beta|psi_beta>.
// Throws DimensionError if the projector has weight outside supports(m).
PhaseRow gamma_ptilde(const TreeLayout& tree, std::size_t m, const NodeEstimate& alpha, const NodeEstimate& beta,
                      std::span<const Complex> projector, double p_measured);

// Solves the N x 2 real system for e^{i phi}. Rows with |gamma| < kGammaFloor are dropped.
PhaseSolution solve_phase(std::span<const PhaseRow> rows, double tol_degenerate);

// Closed form for two non-degenerate rows: i (p2 G1* - p1 G2*) / Im[G1 G2*]. Not normalized.
Complex two_row_closed_form(const PhaseRow& r1, const PhaseRow& r2);

// Unnormalized least-squares solution (cos phi, sin phi) packed as a complex number.
Complex least_squares_phase(std::span<const PhaseRow> rows);

struct ReconstructionOptions {
    double tol_degenerate = kExactDegeneracyTol;

    // 1e-10 in the exact limit, 10 / sqrt(shots) otherwise.
    static ReconstructionOptions for_shots(Shots shots);
};

struct NodeReport {
    std::size_t m = 0;
    NodeStatus status = NodeStatus::ok;
    double residual = 0.0;
    double degeneracy_metric = 0.0;
    std::size_t rows = 0;
    bool clamped = false;
    std::vector<Complex> candidates;
};

struct ReconstructionReport {
    PureState state = PureState::basis_state(1, 1);
    std::vector<NodeReport> nodes;    // in solve order, m = d-1 down to 1

    std::size_t count(NodeStatus s) const;
    bool all_ok() const { return count(NodeStatus::ok) == nodes.size(); }
    const NodeReport& node(std::size_t m) const;
};

// bases[0] must be canonical, followed by at least two node-mapped bases;
// freqs[i] holds the measured frequencies of bases[i].
ReconstructionReport reconstruct(const TreeLayout& tree, std::span<const OrthonormalBasis> bases,
                                 std::span<const ProbabilityVector> freqs,
                                 const ReconstructionOptions& options = {});

// A valid state for which the first structured basis gives gamma = 0 at node m: the component
// on one child of m (the left one if it has dimension >= 2) is made orthogonal to that basis'
// projector part there. When both children of m are leaves this needs a zero amplitude, which
// throws InfeasibleError unless allow_zero_amplitude is set. Such zero-amplitude states stay
// degenerate at the parent of m for any number of tree bases, since every tree basis then
// produces parallel rows there.
PureState make_degenerate_state(const TreeLayout& tree, std::span<const OrthonormalBasis> bases, std::size_t m,
                                std::uint64_t seed, bool allow_zero_amplitude = false);

} // namespace pstomo
