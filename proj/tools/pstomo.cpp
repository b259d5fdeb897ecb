// Command-line front end: bench, reconstruct, bases, degenerate.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pstomo/bases.hpp"
#include "pstomo/bench.hpp"
#include "pstomo/error.hpp"
#include "pstomo/io.hpp"
#include "pstomo/measurement.hpp"
#include "pstomo/noise.hpp"
#include "pstomo/reconstruction.hpp"
#include "pstomo/rng.hpp"
#include "pstomo/states.hpp"
#include "pstomo/tree.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

using namespace pstomo;

std::vector<Shots> parse_shots_list(const std::vector<std::string>& items) {
    std::vector<Shots> out;
    out.reserve(items.size());
    for (const auto& s : items) out.push_back(Shots::parse(s));
    return out;
}

struct ReconstructArgs {
    std::string state_path;
    std::size_t n_bases = 3;
    std::string shots = "exact";
    std::uint64_t seed = 7;
    std::string mode = "tree";
    double noise = 0.0;
    bool correct_noise = false;
    bool extra_basis = false;
    bool renormalize = false;
    std::string out;
};

int run_reconstruct(const ReconstructArgs& a) {
    const PureState target = io::state_from_json(io::read_json(a.state_path), a.renormalize);
    if (a.n_bases < 3) throw ConfigError("--n-bases must be at least 3");
    const Shots shots = Shots::parse(a.shots);
    const BasisMode mode = basis_mode_from_string(a.mode);
    const TreeLayout tree(target.dim());
    const NoisyState noisy(target, a.noise);

    std::vector<OrthonormalBasis> bases = experiment_bases(tree, a.n_bases, mode, a.seed);
    std::vector<ProbabilityVector> freqs;
    auto measure_basis = [&](std::size_t b) {
        const ProbabilityVector p = born_probabilities(noisy, bases[b], static_cast<int>(b));
        freqs.push_back(frequencies(measure(p, shots, derive_seed(a.seed, {3, b}))));
    };
    for (std::size_t b = 0; b < bases.size(); ++b) measure_basis(b);

    const ReconstructionOptions opts = ReconstructionOptions::for_shots(shots);
    auto solve = [&]() -> io::json {
        if (a.correct_noise) {
            const NoiseCorrectedReport r = reconstruct_noise_corrected(tree, bases, freqs, opts);
            io::json j = io::to_json(r);
            j["ambiguous_nodes"] = r.reconstruction.count(NodeStatus::ambiguous);
            j["infidelity"] = infidelity(target, r.reconstruction.state);
            return j;
        }
        const ReconstructionReport r = reconstruct(tree, bases, freqs, opts);
        io::json j = io::to_json(r);
        j["ambiguous_nodes"] = r.count(NodeStatus::ambiguous);
        j["infidelity"] = infidelity(target, r.state);
        return j;
    };

    io::json report = solve();
    bool extra_used = false;
    if (a.extra_basis && report["ambiguous_nodes"].get<std::size_t>() > 0) {
        bases.push_back(experiment_basis(tree, bases.size(), mode, a.seed));
        measure_basis(bases.size() - 1);
        report = solve();
        extra_used = true;
    }
    report["n_bases"] = bases.size();
    report["extra_basis_used"] = extra_used;
    report["shots"] = shots.to_string();

    if (a.out.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        io::write_json(a.out, report);
        std::cout << "infidelity " << report["infidelity"].get<double>() << " -> " << a.out << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-basis pure-state estimation: simulation, reconstruction and benchmarks"};
    app.require_subcommand(1);

    // bench
    ExperimentConfig cfg;
    std::vector<std::string> shots_items{"8192", "524288"};
    std::string bench_mode = "tree";
    std::string bench_out;
    bool full_trials = false;
    auto* bench = app.add_subcommand("bench", "Sweep dimensions x bases x shots and write a CSV of infidelities");
    bench->add_option("--dims", cfg.dims, "Dimensions")->delimiter(',');
    bench->add_option("--bases", cfg.bases_counts, "Numbers of bases including the canonical one")->delimiter(',');
    bench->add_option("--shots", shots_items, "Shots per basis (integers or 'exact')")->delimiter(',');
    bench->add_option("--trials", cfg.trials, "Haar-random states per cell");
    bench->add_flag("--full", full_trials, "Use 1000 trials per cell");
    bench->add_option("--seed", cfg.seed, "Base seed");
    bench->add_option("--noise", cfg.noise_lambda, "White-noise mixture parameter");
    bench->add_flag("--correct-noise", cfg.correct_noise, "Estimate lambda and correct before reconstructing");
    bench->add_option("--basis-mode", bench_mode, "tree or random");
    bench->add_option("--workers", cfg.workers, "Worker threads (0: OpenMP default)");
    bench->add_option("--out", bench_out, "CSV output path")->required();

    // reconstruct
    ReconstructArgs rec;
    auto* recon = app.add_subcommand("reconstruct", "Simulate measurements of a state file and reconstruct it");
    recon->add_option("--state", rec.state_path, "State JSON")->required();
    recon->add_option("--n-bases", rec.n_bases, "Number of bases including the canonical one");
    recon->add_option("--shots", rec.shots, "Shots per basis or 'exact'");
    recon->add_option("--seed", rec.seed, "Seed for bases and sampling");
    recon->add_option("--basis-mode", rec.mode, "tree or random");
    recon->add_option("--noise", rec.noise, "White-noise mixture parameter");
    recon->add_flag("--correct-noise", rec.correct_noise, "Estimate lambda and correct before reconstructing");
    recon->add_flag("--extra-basis-on-ambiguity", rec.extra_basis, "Measure one more basis if any node is ambiguous");
    recon->add_flag("--renormalize", rec.renormalize, "Accept and renormalize a non-normalized state file");
    recon->add_option("--out", rec.out, "Report JSON path (stdout if omitted)");

    // bases
    std::size_t bases_dim = 0;
    std::string bases_mode = "tree";
    std::uint64_t bases_seed = 0;
    std::string bases_out;
    auto* bases_cmd = app.add_subcommand("bases", "Write one measurement basis as JSON");
    bases_cmd->add_option("--dim", bases_dim, "Dimension")->required();
    bases_cmd->add_option("--mode", bases_mode, "tree, random or canonical");
    bases_cmd->add_option("--seed", bases_seed, "Seed");
    bases_cmd->add_option("--out", bases_out, "Output path")->required();

    // degenerate
    std::size_t deg_dim = 0;
    std::size_t deg_node = 0;
    std::uint64_t deg_seed = 0;
    std::string deg_mode = "tree";
    std::string deg_out;
    std::string deg_bases_out;
    bool deg_allow_zero = false;
    auto* deg = app.add_subcommand("degenerate", "Write a state whose phase system degenerates at a chosen node");
    deg->add_option("--dim", deg_dim, "Dimension")->required();
    deg->add_option("--node", deg_node, "Internal node index")->required();
    deg->add_option("--seed", deg_seed, "Seed; the same seed given to 'reconstruct' reproduces the bases");
    deg->add_option("--basis-mode", deg_mode, "tree or random");
    deg->add_option("--out", deg_out, "State JSON path")->required();
    deg->add_option("--bases-out", deg_bases_out, "Optionally write the canonical and two structured bases");
    deg->add_flag("--allow-zero-amplitude", deg_allow_zero, "At a node with two leaf children, zero one amplitude");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*bench) {
            if (full_trials) cfg.trials = 1000;
            cfg.shots_list = parse_shots_list(shots_items);
            cfg.basis_mode = basis_mode_from_string(bench_mode);
            cfg.output = bench_out;
            run_experiment(cfg, &std::cout);
        } else if (*recon) {
            return run_reconstruct(rec);
        } else if (*bases_cmd) {
            const TreeLayout tree(bases_dim);
            const OrthonormalBasis b = bases_mode == "canonical"
                                           ? canonical_basis(bases_dim)
                                           : experiment_basis(tree, 1, basis_mode_from_string(bases_mode), bases_seed);
            io::write_json(bases_out, io::to_json(b));
        } else if (*deg) {
            const TreeLayout tree(deg_dim);
            const auto bases = experiment_bases(tree, 3, basis_mode_from_string(deg_mode), deg_seed);
            const PureState s = make_degenerate_state(tree, bases, deg_node, derive_seed(deg_seed, {7}), deg_allow_zero);
            io::write_json(deg_out, io::to_json(s));
            if (!deg_bases_out.empty()) {
                io::json arr = io::json::array();
                for (const auto& b : bases) arr.push_back(io::to_json(b));
                io::write_json(deg_bases_out, arr);
            }
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
