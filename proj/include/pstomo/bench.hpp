#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pstomo/bases.hpp"
#include "pstomo/error.hpp"
#include "pstomo/measurement.hpp"

namespace pstomo {

class ConfigError : public Error {
  public:
    using Error::Error;
};

struct ExperimentConfig {
    std::vector<std::size_t> dims{5, 10, 20, 30};
    std::vector<std::size_t> bases_counts{3, 5, 9};
    std::vector<Shots> shots_list{Shots::finite(8192), Shots::finite(524288)};
    std::size_t trials = 100;
    std::uint64_t seed = 42;
    double noise_lambda = 0.0;
    BasisMode basis_mode = BasisMode::tree;
    bool correct_noise = false;
    int workers = 0;    // 0: OpenMP default
    std::filesystem::path output;

    // Throws ConfigError.
    void validate() const;
};

struct CellSpec {
    std::size_t dim = 0;
    std::size_t n_bases = 0;
    Shots shots = Shots::exact();
};

struct TrialResult {
    bool failed = false;
    double infidelity = 0.0;
    bool any_non_ok = false;
    std::optional<double> lambda_hat;
};

struct CellResult {
    std::size_t dim = 0;
    std::size_t n_bases = 0;
    Shots shots = Shots::exact();
    std::size_t trials = 0;
    double median_infidelity = 0.0;
    double q1_infidelity = 0.0;
    double q3_infidelity = 0.0;
    double fallback_rate = 0.0;
    std::size_t failed_trials = 0;
    std::optional<double> lambda_hat_mean;
    std::uint64_t seed = 0;
};

std::uint64_t trial_seed(std::uint64_t base, const CellSpec& cell, std::size_t trial);

// One full trial: Haar target, bases, sampling, reconstruction. Never throws; failures set `failed`.
TrialResult run_trial(const CellSpec& cell, const ExperimentConfig& cfg, std::size_t trial);

// Aggregates trial results in trial-index order.
CellResult aggregate(const CellSpec& cell, const ExperimentConfig& cfg, const std::vector<TrialResult>& trials);

// OpenMP over trials.
CellResult run_cell(const CellSpec& cell, const ExperimentConfig& cfg);
// Single-threaded reference.
CellResult run_cell_serial(const CellSpec& cell, const ExperimentConfig& cfg);

// Linear-interpolation quantile of an ascending sample (q in [0, 1]).
double quantile_sorted(const std::vector<double>& sorted, double q);

inline constexpr const char* kCsvHeader =
    "dim,n_bases,shots,trials,median_infidelity,q1_infidelity,q3_infidelity,fallback_rate,failed_trials,"
    "lambda_hat_mean,seed";

std::string csv_row(const CellResult& r);

// Cartesian product dims x bases_counts x shots_list. Opens cfg.output before any compute
// (IoError if unwritable) and writes header plus one row per cell. Empty output path skips the file.
std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, std::ostream* summary = nullptr);

} // namespace pstomo
