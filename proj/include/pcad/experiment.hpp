#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcad/anomaly.hpp"
#include "pcad/eval.hpp"
#include "pcad/synth.hpp"

namespace pcad {

struct SampleSpec {
    bool is_fraction = true;
    double value = 100.0;  // percent when is_fraction, else absolute count

    std::size_t resolve(std::size_t n) const;
};

struct ExperimentConfig {
    enum class Mode { Precision, RankChange };
    Mode mode = Mode::Precision;
    bool local = false;             // local scoring, k forced to forced_k
    std::size_t forced_k = 2;
    std::vector<std::string> methods;
    MixSpec mix;                    // seed field is refilled per iteration
    std::size_t iterations = 10;
    std::uint64_t seed = 0;
    std::vector<std::size_t> k_range = {1, 2, 3, 4, 5};
    std::size_t restarts = 5;
    std::vector<SampleSpec> samples = {SampleSpec{true, 100.0}};
    std::size_t top = 50;           // rank-change cutoff
    std::optional<std::size_t> m;   // precision cutoff; default planted count
    std::string out_dir;
};

ExperimentConfig parse_experiment_config(
    const std::vector<std::pair<std::string, std::string>>& kv);

// Pk-means on a subsample with BIC model selection; proportions recomputed
// against the full corpus.
struct PcadFit {
    CentroidModel model;
    std::size_t k_used = 0;
};
PcadFit fit_pcad(const std::vector<UniformSeries>& data,
                 const std::vector<std::size_t>& sample_idx,
                 const std::vector<std::size_t>& k_range, std::size_t restarts,
                 std::uint64_t seed);

// Plain k-means on a subsample with BIC selection, Euclidean proportions
// against the full corpus.
PcadFit fit_kmeans(const std::vector<UniformSeries>& data,
                   const std::vector<std::size_t>& sample_idx,
                   const std::vector<std::size_t>& k_range,
                   std::size_t restarts, std::uint64_t seed);

// s sampled series as a reference model, proportions by nearest
// pseudo-centroid over the corpus.
CentroidModel random_reference_model(const std::vector<UniformSeries>& data,
                                     std::size_t s, std::uint64_t seed);

// Mean per-cluster precision of a local ranking: each cluster is paired with
// the outlier class shadowing the cluster's dominant normal class.
double local_precision(const AnomalyRanking& ranking,
                       const std::vector<LabeledSeries>& corpus,
                       std::size_t k);

EvalReport run_experiment(const ExperimentConfig& cfg);

}  // namespace pcad
