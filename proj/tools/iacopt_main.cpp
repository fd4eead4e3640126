// Command-line front end for the IaC configuration optimizer.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "iacopt/iacopt.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // parse/usage errors
constexpr int kExitInfeasible = 2;  // no requirement-satisfying configuration
constexpr int kExitCatalogue = 3;
constexpr int kExitInternal = 4;

struct CliConfig {
    std::string input_path;
    std::string catalogue_path;
    std::string output_path;
    std::string seed = "42";
    int population = 0;
    int generations = 100;
    double crossover = 0.9;
    double mutation = 0.0;
    std::string algorithm = "auto";
    std::size_t max_solutions = 5;
    std::string cost_unit = "euro";
    bool brute_force = false;
    int verbosity = 0;
};

int fail(int code, const std::string& message) {
    std::cerr << "ERROR(" << code << "): " << message << '\n';
    return code;
}

std::uint64_t resolve_seed(const std::string& seed) {
    if (seed == "random") {
        std::random_device entropy;
        return (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    }
    std::size_t used = 0;
    std::uint64_t value = std::stoull(seed, &used);
    if (used != seed.size()) throw std::invalid_argument("seed must be an integer or 'random'");
    return value;
}

std::string default_output_path(const fs::path& input) {
    fs::path out = input;
    out.replace_extension();
    out += ".out.doml";
    return out.string();
}

void print_report(const iacopt::orchestrator::OptimizeResult& result, const CliConfig& config) {
    const auto& report = result.report;
    std::cerr << "algorithm: " << to_string(report.algorithm) << '\n'
              << "search space: " << report.search_space_size << " combinations\n"
              << "generations: " << report.generations << '\n'
              << "evaluations: " << report.evaluation_count << '\n'
              << "feasible solutions: " << report.feasible_count << '\n'
              << "solutions returned: " << report.solution_count;
    if (!result.solutions.empty()) std::cerr << " (active: " << result.solutions.front().name << ')';
    std::cerr << '\n'
              << "duration: " << report.duration.count() << " s\n";
    for (const auto& warning : report.warnings) std::cerr << "warning: " << warning << '\n';
    if (config.verbosity >= 1) {
        for (const auto& ranked : result.solutions) {
            std::cerr << ranked.name << (ranked.active ? " [active]" : "") << ":";
            for (double v : ranked.solution.objective_values) std::cerr << ' ' << v;
            if (config.verbosity >= 2) {
                std::cerr << "  genes:";
                for (auto g : ranked.solution.genotype) std::cerr << ' ' << g;
            }
            std::cerr << '\n';
        }
    }
}

int run_optimize(const CliConfig& config) {
    iacopt::moea::AlgoParams params;
    params.population_size = config.population;
    params.generations = config.generations;
    params.crossover_prob = config.crossover;
    params.mutation_prob_per_gene = config.mutation;
    params.seed = resolve_seed(config.seed);

    iacopt::orchestrator::Options options;
    options.max_solutions = config.max_solutions;
    options.cost_unit = config.cost_unit;
    options.brute_force = config.brute_force;
    if (config.algorithm == "nsga2") options.algorithm_override = iacopt::moea::Algorithm::nsga2;
    else if (config.algorithm == "nsga3") options.algorithm_override = iacopt::moea::Algorithm::nsga3;

    std::string doml_text = iacopt::doml::read_input_archive(config.input_path);
    iacopt::catalogue::Catalogue cat = iacopt::catalogue::load_catalogue(config.catalogue_path);

    auto result = iacopt::orchestrator::optimize(doml_text, cat, params, options);
    print_report(result, config);

    if (!result.report.feasible) {
        std::string note = "no configuration satisfies the aggregate requirements";
        if (!result.infeasibility_note.empty()) note += "; " + result.infeasibility_note;
        return fail(kExitInfeasible, note);
    }

    std::string out_path = config.output_path.empty()
                               ? default_output_path(config.input_path)
                               : config.output_path;
    std::ofstream out(out_path, std::ios::binary);
    if (!out) return fail(kExitInternal, "cannot write output file: " + out_path);
    out << result.output_text;
    out.close();
    std::cerr << "wrote " << out_path << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimizes IaC deployment configurations described in DOML"};
    app.require_subcommand(1);

    CliConfig config;
    CLI::App* cmd = app.add_subcommand("optimize", "Run the optimization pipeline");
    cmd->add_option("--input", config.input_path, "Input .doml file or ZIP archive")->required();
    cmd->add_option("--catalogue", config.catalogue_path, "Catalogue JSON file")->required();
    cmd->add_option("--output", config.output_path,
                    "Output path (default: input stem + .out.doml)");
    cmd->add_option("--seed", config.seed, "RNG seed (unsigned integer) or 'random'");
    cmd->add_option("--population", config.population, "Population size (0 = auto)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--generations", config.generations, "Number of generations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--crossover", config.crossover, "Crossover probability")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--mutation", config.mutation,
                    "Per-gene mutation probability (0 = auto)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--algorithm", config.algorithm, "Engine: auto, nsga2 or nsga3")
        ->check(CLI::IsMember({"auto", "nsga2", "nsga3"}));
    cmd->add_option("--max-solutions", config.max_solutions, "Solutions to keep (default 5)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--brute-force", config.brute_force,
                  "Exhaustive enumeration instead of the evolutionary search");
    cmd->add_option("--cost-unit", config.cost_unit, "Unit label for cost objective values");
    cmd->add_flag("-v", config.verbosity, "Verbose report (-vv adds genotypes)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "ERROR(" << kExitUsage << "): " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        return run_optimize(config);
    } catch (const iacopt::catalogue::CatalogueError& e) {
        return fail(kExitCatalogue, e.what());
    } catch (const iacopt::doml::ParseError& e) {
        return fail(kExitUsage, std::string(e.what()) + " (line " + std::to_string(e.line()) +
                                    ", column " + std::to_string(e.column()) + ")");
    } catch (const iacopt::doml::ArchiveError& e) {
        return fail(kExitUsage, e.what());
    } catch (const iacopt::problem::SpecError& e) {
        return fail(kExitUsage, e.what());
    } catch (const iacopt::problem::InfeasibleError& e) {
        return fail(kExitInfeasible, e.what());
    } catch (const iacopt::oracle::BudgetExceededError& e) {
        return fail(kExitUsage, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(kExitUsage, e.what());
    } catch (const std::exception& e) {
        return fail(kExitInternal, e.what());
    }
}
