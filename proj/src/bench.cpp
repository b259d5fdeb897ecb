#include "pstomo/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pstomo/noise.hpp"
#include "pstomo/reconstruction.hpp"
#include "pstomo/rng.hpp"
#include "pstomo/states.hpp"
#include "pstomo/tree.hpp"

namespace pstomo {

namespace {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::uint64_t shots_code(const Shots& s) { return s.is_exact() ? 0 : s.count(); }

} // namespace

void ExperimentConfig::validate() const {
    if (dims.empty()) throw ConfigError("at least one dimension is required");
    for (std::size_t d : dims) {
        if (d < 2) throw ConfigError("dimensions must be at least 2");
    }
    if (bases_counts.empty()) throw ConfigError("at least one basis count is required");
    for (std::size_t n : bases_counts) {
        if (n < 3) throw ConfigError("basis counts must be at least 3 (two bases cannot determine a pure state)");
    }
    if (shots_list.empty()) throw ConfigError("at least one shot setting is required");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (!(noise_lambda >= 0.0 && noise_lambda < 1.0)) throw ConfigError("noise lambda must lie in [0, 1)");
    if (workers < 0) throw ConfigError("workers must be non-negative");
}

std::uint64_t trial_seed(std::uint64_t base, const CellSpec& cell, std::size_t trial) {
    return derive_seed(base, {cell.dim, cell.n_bases, shots_code(cell.shots), trial});
}

TrialResult run_trial(const CellSpec& cell, const ExperimentConfig& cfg, std::size_t trial) {
    TrialResult out;
    try {
        const std::uint64_t seed = trial_seed(cfg.seed, cell, trial);
        const TreeLayout tree(cell.dim);
        const PureState target = haar_random_state(cell.dim, derive_seed(seed, {1}));
        const std::vector<OrthonormalBasis> bases =
            experiment_bases(tree, cell.n_bases, cfg.basis_mode, derive_seed(seed, {2}));
        const NoisyState noisy(target, cfg.noise_lambda);

        std::vector<ProbabilityVector> freqs;
        freqs.reserve(bases.size());
        for (std::size_t b = 0; b < bases.size(); ++b) {
            const ProbabilityVector p = born_probabilities(noisy, bases[b], static_cast<int>(b));
            freqs.push_back(frequencies(measure(p, cell.shots, derive_seed(seed, {3, b}))));
        }

        const ReconstructionOptions opts = ReconstructionOptions::for_shots(cell.shots);
        if (cfg.correct_noise) {
            const NoiseCorrectedReport rep = reconstruct_noise_corrected(tree, bases, freqs, opts);
            out.infidelity = infidelity(target, rep.reconstruction.state);
            out.any_non_ok = !rep.reconstruction.all_ok();
            out.lambda_hat = rep.lambda.lambda_hat;
        } else {
            const ReconstructionReport rep = reconstruct(tree, bases, freqs, opts);
            out.infidelity = infidelity(target, rep.state);
            out.any_non_ok = !rep.all_ok();
        }
    } catch (const std::exception&) {
        out = TrialResult{};
        out.failed = true;
    }
    return out;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

CellResult aggregate(const CellSpec& cell, const ExperimentConfig& cfg, const std::vector<TrialResult>& trials) {
    CellResult r;
    r.dim = cell.dim;
    r.n_bases = cell.n_bases;
    r.shots = cell.shots;
    r.trials = trials.size();
    r.seed = cfg.seed;

    std::vector<double> inf;
    inf.reserve(trials.size());
    std::size_t non_ok = 0;
    double lambda_sum = 0.0;
    std::size_t lambda_n = 0;
    for (const TrialResult& t : trials) {
        if (t.failed) {
            ++r.failed_trials;
            continue;
        }
        inf.push_back(t.infidelity);
        if (t.any_non_ok) ++non_ok;
        if (t.lambda_hat) {
            lambda_sum += *t.lambda_hat;
            ++lambda_n;
        }
    }
    std::sort(inf.begin(), inf.end());
    r.median_infidelity = quantile_sorted(inf, 0.5);
    r.q1_infidelity = quantile_sorted(inf, 0.25);
    r.q3_infidelity = quantile_sorted(inf, 0.75);
    r.fallback_rate = trials.empty() ? 0.0 : static_cast<double>(non_ok) / static_cast<double>(trials.size());
    if (lambda_n > 0) r.lambda_hat_mean = lambda_sum / static_cast<double>(lambda_n);
    return r;
}

CellResult run_cell_serial(const CellSpec& cell, const ExperimentConfig& cfg) {
    std::vector<TrialResult> results(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) results[t] = run_trial(cell, cfg, t);
    return aggregate(cell, cfg, results);
}

CellResult run_cell(const CellSpec& cell, const ExperimentConfig& cfg) {
    std::vector<TrialResult> results(cfg.trials);
    const auto n = static_cast<std::int64_t>(cfg.trials);
#ifdef _OPENMP
    const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t t = 0; t < n; ++t) {
        results[static_cast<std::size_t>(t)] = run_trial(cell, cfg, static_cast<std::size_t>(t));
    }
    return aggregate(cell, cfg, results);
}

std::string csv_row(const CellResult& r) {
    std::string s;
    s += std::to_string(r.dim) + ',';
    s += std::to_string(r.n_bases) + ',';
    s += r.shots.to_string() + ',';
    s += std::to_string(r.trials) + ',';
    s += format_double(r.median_infidelity) + ',';
    s += format_double(r.q1_infidelity) + ',';
    s += format_double(r.q3_infidelity) + ',';
    s += format_double(r.fallback_rate) + ',';
    s += std::to_string(r.failed_trials) + ',';
    s += (r.lambda_hat_mean ? format_double(*r.lambda_hat_mean) : std::string()) + ',';
    s += std::to_string(r.seed);
    return s;
}

std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, std::ostream* summary) {
    cfg.validate();
    std::ofstream csv;
    if (!cfg.output.empty()) {
        csv.open(cfg.output, std::ios::out | std::ios::trunc);
        if (!csv) throw IoError("cannot open output file '" + cfg.output.string() + "' for writing");
        csv << kCsvHeader << '\n';
    }

    if (summary) {
        *summary << std::left << std::setw(6) << "dim" << std::setw(8) << "bases" << std::setw(10) << "shots"
                 << std::setw(14) << "median" << std::setw(14) << "q1" << std::setw(14) << "q3" << std::setw(10)
                 << "fallback" << '\n';
    }

    std::vector<CellResult> results;
    for (std::size_t d : cfg.dims) {
        for (std::size_t nb : cfg.bases_counts) {
            for (const Shots& shots : cfg.shots_list) {
                const CellSpec cell{d, nb, shots};
                CellResult r = run_cell(cell, cfg);
                if (csv.is_open()) csv << csv_row(r) << '\n';
                if (summary) {
                    *summary << std::left << std::setw(6) << r.dim << std::setw(8) << r.n_bases << std::setw(10)
                             << r.shots.to_string() << std::setprecision(4) << std::setw(14) << r.median_infidelity
                             << std::setw(14) << r.q1_infidelity << std::setw(14) << r.q3_infidelity << std::setw(10)
                             << r.fallback_rate << std::setprecision(6)
                             << '\n';
                }
                results.push_back(std::move(r));
            }
        }
    }
    if (csv.is_open()) {
        csv.flush();
        if (!csv) throw IoError("failed writing '" + cfg.output.string() + "'");
    }
    return results;
}

} // namespace pstomo
