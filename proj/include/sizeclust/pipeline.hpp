#pragma once

// End-to-end runs behind the command-line tool: fit, sort, simulate and
// benchmark. Each run writes its artifacts under RunConfig::output_dir and
// returns an exit status.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sizeclust/loss.hpp"
#include "sizeclust/model.hpp"
#include "sizeclust/optimize.hpp"
#include "sizeclust/simulate.hpp"

namespace sizeclust {

enum ExitStatus : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitConvergence = 3,
};

struct PriorSource {
    double alpha = 0.5;
    double beta = 1.0;
    std::vector<double> alpha_values;  // N x K when set
    std::vector<double> beta_values;   // K x sum(V_q) when set
};

struct BenchmarkConfig {
    int replicates = 20;
    double lambda = 1.0;
    Composition eta;  // LSS target; empty means the planted group proportions
    bool include_invariant = true;
};

struct RunConfig {
    std::filesystem::path data_path;
    int k = 0;
    PriorSource prior;
    LossSpec loss;  // eta empty means uniform over K
    SamplerConfig sampler;
    OptimizerConfig optimizer;
    SimConfig simulation;
    BenchmarkConfig benchmark;
    std::filesystem::path output_dir = "sizeclust_out";

    // Re-derives every module seed from one base seed.
    void apply_seed(std::uint64_t seed);

    // Loss spec with defaults resolved against k.
    LossSpec resolved_loss() const;
};

/// Parses the JSON configuration. Relative paths resolve against base_dir.
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Prior for data, built from the source (explicit values win over constants).
PriorSpec resolve_prior(const PriorSource& source, const SurveyData& data, int k);

/// Reads a prior written by run_simulate (JSON with nested alpha/beta).
PriorSource read_prior_file(const std::filesystem::path& path);

struct SortOutcome {
    PosteriorFit fit;
    LossSpec spec;
    Assignment action;              // labels reported (identified when the loss is label-invariant)
    Assignment raw_action;          // optimizer output before identification
    std::optional<LabelPermutation> sigma;
    double expected_loss = 0.0;
    Assignment vi_action;           // lambda = 0 action, identified
    double vi_expected_loss = 0.0;  // of vi_action under spec
    bool label_switching_suspected = false;
};

/// Fits, optimizes the chosen loss and the VI-only loss, identifies labels.
SortOutcome sort_respondents(const SurveyData& data, const PriorSpec& prior, const LossSpec& spec,
                             const SamplerConfig& sampler, const OptimizerConfig& optimizer);

int run_fit(const RunConfig& cfg);
int run_sort(const RunConfig& cfg);
int run_simulate(const RunConfig& cfg);
int run_benchmark(const RunConfig& cfg);

struct BenchmarkRow {
    int replicate = 0;
    std::string variant;  // VI, LSS or LSI
    double accuracy = 0.0;
    double vi_from_truth = 0.0;
    int groups_used = 0;
    Assignment action;
};

struct BenchmarkSummary {
    std::string variant;
    double mean_accuracy = 0.0;
    double mean_vi_from_truth = 0.0;
    double collapse_rate = 0.0;  // fraction of replicates with a single occupied group
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;
    std::vector<BenchmarkSummary> summary;

    const BenchmarkSummary& variant(const std::string& name) const;
};

/// Replicated simulation study: per replicate a fresh dataset (seed derived
/// from base_seed), one posterior fit, and the VI / LSS / LSI actions scored
/// against the planted truth.
BenchmarkReport benchmark_study(const SimConfig& sim, const BenchmarkConfig& bench, const SamplerConfig& sampler,
                                const OptimizerConfig& optimizer, std::uint64_t base_seed);

}  // namespace sizeclust
