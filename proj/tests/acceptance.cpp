// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance <path to pstomo CLI> <scratch directory>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pstomo/bases.hpp"
#include "pstomo/bench.hpp"
#include "pstomo/measurement.hpp"
#include "pstomo/noise.hpp"
#include "pstomo/reconstruction.hpp"
#include "pstomo/rng.hpp"
#include "pstomo/states.hpp"
#include "pstomo/tree.hpp"

namespace fs = std::filesystem;
using namespace pstomo;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<ProbabilityVector> exact_freqs(const NoisyState& s, const std::vector<OrthonormalBasis>& bases) {
    std::vector<ProbabilityVector> out;
    for (std::size_t b = 0; b < bases.size(); ++b) out.push_back(born_probabilities(s, bases[b], static_cast<int>(b)));
    return out;
}

std::vector<ProbabilityVector> sampled_freqs(const NoisyState& s, const std::vector<OrthonormalBasis>& bases,
                                             std::uint64_t shots, std::uint64_t seed) {
    std::vector<ProbabilityVector> out;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const auto p = born_probabilities(s, bases[b], static_cast<int>(b));
        out.push_back(frequencies(sample_counts(p, shots, derive_seed(seed, {3, b}))));
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, 0.5);
}

ExperimentConfig cell_config(std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.trials = 100;
    cfg.seed = seed;
    return cfg;
}

void exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t total = 0, good = 0, unflagged_failures = 0;
    for (std::size_t d : {2, 3, 4, 5, 8, 16, 32}) {
        const TreeLayout tree = build_tree(d);
        for (std::uint64_t s = 0; s < 200; ++s) {
            const std::uint64_t seed = derive_seed(101, {d, s});
            const PureState psi = haar_random_state(d, derive_seed(seed, {1}));
            const auto bases = experiment_bases(tree, 3, BasisMode::tree, derive_seed(seed, {2}));
            const auto rep = reconstruct(tree, bases, exact_freqs(NoisyState(psi), bases));
            ++total;
            if (infidelity(psi, rep.state) < 1e-8) {
                ++good;
            } else if (rep.all_ok()) {
                ++unflagged_failures;
            }
        }
    }
    const double secs = seconds_since(t0);
    const double rate = static_cast<double>(good) / static_cast<double>(total);
    report(1, rate >= 0.999 && unflagged_failures == 0 && secs < 60.0,
           fmt("%zu/%zu exact (%.4f), %zu unflagged failures, %.2f s", good, total, rate, unflagged_failures, secs));
}

void order_of_magnitude() {
    const auto t0 = std::chrono::steady_clock::now();
    const CellResult r = run_cell({30, 3, Shots::finite(1u << 19)}, cell_config(42));
    const double secs = seconds_since(t0);
    report(2, r.median_infidelity >= 1e-3 && r.median_infidelity <= 5e-2 && secs < 300.0,
           fmt("d=30, 3 bases, 2^19 shots: median infidelity %.4g, %.2f s", r.median_infidelity, secs));
}

void bases_beat_shots() {
    const CellResult many = run_cell({30, 9, Shots::finite(1u << 13)}, cell_config(42));
    const CellResult few = run_cell({30, 3, Shots::finite(1u << 19)}, cell_config(42));
    report(3, many.median_infidelity < few.median_infidelity,
           fmt("d=30: 9 bases x 2^13 median %.4g vs 3 bases x 2^19 median %.4g", many.median_infidelity,
               few.median_infidelity));
}

void monotonicity() {
    std::size_t ok = 0, total = 0;
    std::string worst;
    double worst_ratio = 0.0;
    for (std::size_t d : {5, 10, 20, 30}) {
        for (std::size_t n : {3, 5, 9}) {
            const double lo = run_cell({d, n, Shots::finite(1u << 13)}, cell_config(42)).median_infidelity;
            const double hi = run_cell({d, n, Shots::finite(1u << 19)}, cell_config(42)).median_infidelity;
            ++total;
            if (hi < lo) ++ok;
            if (hi / lo > worst_ratio) {
                worst_ratio = hi / lo;
                worst = fmt("d=%zu n=%zu: %.3g vs %.3g", d, n, hi, lo);
            }
        }
    }
    report(4, ok == total, fmt("%zu/%zu cells improve with shots; closest %s", ok, total, worst.c_str()));
}

void phase_solver() {
    Rng rng = make_rng(5);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    double max_diff = 0.0, max_sub = 0.0, max_amb = 0.0, max_unit = 0.0;
    bool candidates_ok = true;
    for (int i = 0; i < 1000; ++i) {
        const Complex z = std::polar(1.0, angle(rng));
        PhaseRow rows[2];
        for (auto& r : rows) {
            r.gamma = {gauss(rng), gauss(rng)};
            r.ptilde = (r.gamma * z).real();
        }
        const Complex cf = two_row_closed_form(rows[0], rows[1]);
        const Complex ls = least_squares_phase(rows);
        max_diff = std::max(max_diff, std::abs(cf - ls));
        for (const auto& r : rows) max_sub = std::max(max_sub, std::abs((r.gamma * cf).real() - r.ptilde));

        // Single equation: p~ drawn inside the feasible range |p~| <= |gamma|.
        PhaseRow one{Complex(gauss(rng), gauss(rng)), 0.0};
        one.ptilde = (one.gamma * z).real();
        const PhaseSolution sol = solve_phase(std::span<const PhaseRow>(&one, 1), kExactDegeneracyTol);
        if (sol.status != NodeStatus::ambiguous || sol.candidates.size() != 2) {
            candidates_ok = false;
            continue;
        }
        for (const Complex& c : sol.candidates) {
            max_unit = std::max(max_unit, std::abs(std::abs(c) - 1.0));
            max_amb = std::max(max_amb, std::abs((one.gamma * c).real() - one.ptilde));
        }
    }
    report(5, candidates_ok && max_diff < 1e-12 && max_sub < 1e-10 && max_amb < 1e-12 && max_unit < 1e-12,
           fmt("closed form vs least squares %.2g, substitution %.2g, ambiguity residual %.2g, |z|-1 %.2g", max_diff,
               max_sub, max_amb, max_unit));
}

void basis_validity() {
    Rng rng = make_rng(6);
    std::uniform_int_distribution<std::size_t> dim(2, 64);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    double worst = 0.0;
    std::size_t support_failures = 0;
    for (int i = 0; i < 100; ++i) {
        const TreeLayout tree = build_tree(dim(rng));
        const double theta = angle(rng);
        const auto basis = tree_basis(tree, {std::cos(theta), std::sin(theta), angle(rng)});
        worst = std::max(worst, gram_deviation(basis));
        if (!node_supports_exact(basis, tree)) ++support_failures;
    }
    for (int i = 0; i < 100; ++i) {
        const TreeLayout tree = build_tree(dim(rng));
        const auto basis = random_subspace_basis(tree, rng());
        worst = std::max(worst, gram_deviation(basis));
        if (!node_supports_exact(basis, tree)) ++support_failures;
    }
    report(6, worst < 1e-10 && support_failures == 0,
           fmt("max Gram deviation %.2g over 200 bases, %zu support violations", worst, support_failures));
}

void degeneracy() {
    // Targets whose children are not both leaves; a leaf pair can only be made degenerate with a
    // zero amplitude, which make_degenerate_state rejects.
    struct Target {
        std::size_t d, m;
    };
    std::vector<Target> targets;
    for (std::size_t d : {4, 5, 6, 9, 12, 17, 24, 32}) {
        const TreeLayout tree = build_tree(d);
        for (std::size_t m = 1; m < d; ++m) {
            if (tree.node_dim(2 * m) > 1 || tree.node_dim(2 * m + 1) > 1) targets.push_back({d, m});
        }
    }
    std::size_t flagged = 0, restored = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        const Target tg = targets[i % targets.size()];
        const TreeLayout tree = build_tree(tg.d);
        const std::uint64_t seed = derive_seed(707, {i});
        auto bases = experiment_bases(tree, 3, BasisMode::tree, seed);
        const PureState psi = make_degenerate_state(tree, bases, tg.m, derive_seed(seed, {7}));
        const auto rep = reconstruct(tree, bases, exact_freqs(NoisyState(psi), bases));
        if (rep.node(tg.m).status != NodeStatus::ok) ++flagged;
        bases.push_back(experiment_basis(tree, 3, BasisMode::tree, seed));
        const auto fixed = reconstruct(tree, bases, exact_freqs(NoisyState(psi), bases));
        if (infidelity(psi, fixed.state) < 1e-8) ++restored;
    }

    std::size_t haar_flags = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const std::size_t d = 2 + s % 31;
        const TreeLayout tree = build_tree(d);
        const PureState psi = haar_random_state(d, derive_seed(808, {s, 1}));
        const auto bases = experiment_bases(tree, 3, BasisMode::tree, derive_seed(808, {s, 2}));
        const auto rep = reconstruct(tree, bases, exact_freqs(NoisyState(psi), bases));
        if (!rep.all_ok()) ++haar_flags;
    }
    report(7, flagged == 100 && restored == 100 && haar_flags == 0,
           fmt("%zu/100 engineered states flagged, %zu/100 restored by an extra basis, %zu flags in 10^4 Haar trials",
               flagged, restored, haar_flags));
}

void white_noise() {
    const std::size_t d = 5;
    const double lambda = 0.05;
    const TreeLayout tree = build_tree(d);

    double max_exact_lambda = 0.0, max_exact_inf = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const PureState psi = haar_random_state(d, derive_seed(909, {s, 1}));
        const auto bases = experiment_bases(tree, 3, BasisMode::tree, derive_seed(909, {s, 2}));
        const auto rep = reconstruct_noise_corrected(tree, bases, exact_freqs(NoisyState(psi, lambda), bases));
        max_exact_lambda = std::max(max_exact_lambda, std::abs(rep.lambda.lambda_hat - lambda));
        max_exact_inf = std::max(max_exact_inf, infidelity(psi, rep.reconstruction.state));
    }

    std::vector<double> lambda_err, corrected, uncorrected;
    const auto opts = ReconstructionOptions::for_shots(Shots::finite(1u << 17));
    for (std::uint64_t s = 0; s < 100; ++s) {
        const PureState psi = haar_random_state(d, derive_seed(919, {s, 1}));
        const auto bases = experiment_bases(tree, 3, BasisMode::tree, derive_seed(919, {s, 2}));
        const auto freqs = sampled_freqs(NoisyState(psi, lambda), bases, 1u << 17, derive_seed(919, {s}));
        const auto rep = reconstruct_noise_corrected(tree, bases, freqs, opts);
        lambda_err.push_back(std::abs(rep.lambda.lambda_hat - lambda));
        corrected.push_back(infidelity(psi, rep.reconstruction.state));
        uncorrected.push_back(infidelity(psi, reconstruct(tree, bases, freqs, opts).state));
    }
    const double med_err = median(lambda_err), med_cor = median(corrected), med_unc = median(uncorrected);

    double max_round_trip = 0.0;
    for (int li = 0; li <= 10; ++li) {
        for (int ki = 1; ki <= 9; ++ki) {
            for (int k1 = 1; k1 <= 9; ++k1) {
                const double l = 0.05 * li, ck = 0.07 * ki, ck1 = 0.07 * k1;
                const double pk = (1 - l) * ck * ck + l / d, pk1 = (1 - l) * ck1 * ck1 + l / d;
                const double lam_abs = 2 * (1 - l) * ck * ck1;
                max_round_trip = std::max(max_round_trip, std::abs(4 * (pk - l / d) * (pk1 - l / d) - lam_abs * lam_abs));
                max_round_trip = std::max(max_round_trip, std::abs(estimate_lambda_node(pk, pk1, lam_abs, d).lambda_hat - l));
            }
        }
    }

    report(8,
           max_exact_lambda < 1e-6 && max_exact_inf < 1e-8 && med_err < 0.02 && med_cor < med_unc &&
               max_round_trip < 1e-10,
           fmt("exact |l-0.05| %.2g, corrected infidelity %.2g; 2^17 shots median |l err| %.3g, corrected %.3g vs "
               "uncorrected %.3g; round trip %.2g",
               max_exact_lambda, max_exact_inf, med_err, med_cor, med_unc, max_round_trip));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void determinism(const std::string& cli, const fs::path& work) {
    fs::create_directories(work);
    auto run = [&](const char* name, int workers) {
        const fs::path out = work / name;
        const std::string cmd = "\"" + cli + "\" bench --dims 5,12 --bases 3,5 --shots 8192,exact --trials 16 --seed 3 " +
                                "--workers " + std::to_string(workers) + " --out \"" + out.string() + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) return std::string();
        return slurp(out);
    };
    const std::string a = run("w1a.csv", 1), b = run("w1b.csv", 1), c = run("w8.csv", 8);
    report(9, !a.empty() && a == b && a == c,
           fmt("%zu-byte CSV; repeat run %s, workers 8 %s", a.size(), a == b ? "identical" : "differs",
               a == c ? "identical" : "differs"));
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <pstomo cli> <scratch dir>\n", argv[0]);
        return 2;
    }
    const std::vector<std::function<void()>> checks{
        exactness, order_of_magnitude, bases_beat_shots, monotonicity, phase_solver,
        basis_validity, degeneracy, white_noise, [&] { determinism(argv[1], argv[2]); }};
    for (std::size_t i = 0; i < checks.size(); ++i) {
        try {
            checks[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
