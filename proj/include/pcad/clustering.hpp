#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pcad/series.hpp"
#include "pcad/xcorr.hpp"

namespace pcad {

struct ModelMeta {
    std::size_t iterations = 0;
    double final_error = 0.0;
    std::uint64_t seed = 0;
    bool renormalized = true;
    // Quantization error recorded at each assignment pass, against the
    // centroids that pass used. Non-increasing for pkmeans.
    std::vector<double> error_trace;
};

struct CentroidModel {
    std::vector<std::vector<double>> centroids;  // k rows of length d
    std::vector<double> proportions;             // |c_j| / n, sums to 1
    std::size_t k = 0;
    std::size_t d = 0;
    ModelMeta meta;
};

struct ClusterState {
    std::vector<std::size_t> assignments;  // cluster index per series
    std::vector<std::size_t> phases;       // shift tau_i per series
    double error = 0.0;
};

struct BicScore {
    std::size_t k = 0;
    double loglik = 0.0;
    std::size_t p = 0;  // k*d means + k weights + 1 shared variance
    double score = 0.0; // loglik - (p/2) * log n
};

struct ClusterOptions {
    std::size_t max_iter = 100;
    bool renormalize = true;  // unit-norm centroids after each update
};

// Standard k-means under squared Euclidean distance. Initial centroids are
// k distinct series sampled by seed; centroids are re-unit-normalized after
// the final iteration.
std::pair<CentroidModel, ClusterState> kmeans(
    const std::vector<UniformSeries>& data, std::size_t k, std::uint64_t seed,
    std::size_t max_iter = 100);

// Phase-adjusting k-means: every iteration rephases each series to its best
// centroid via maximized cross correlation before centroids are averaged.
std::pair<CentroidModel, ClusterState> pkmeans(
    const std::vector<UniformSeries>& data, std::size_t k, std::uint64_t seed,
    const ClusterOptions& opts = {});

// Same, but with explicit initial centroids (length-k, each of length d).
std::pair<CentroidModel, ClusterState> pkmeans_from(
    const std::vector<UniformSeries>& data,
    std::vector<std::vector<double>> initial, std::uint64_t seed,
    const ClusterOptions& opts = {});

std::pair<CentroidModel, ClusterState> kmeans_from(
    const std::vector<UniformSeries>& data,
    std::vector<std::vector<double>> initial, std::uint64_t seed,
    std::size_t max_iter = 100);

// sum_i 0.5 * || rotate(x_i, tau_i) - w_{c(i)} ||^2
double quantization_error(const std::vector<UniformSeries>& data,
                          const CentroidModel& model,
                          const ClusterState& state);

// Per-series best match against a model: cluster, shift, correlation.
struct BestMatch {
    std::size_t cluster = 0;
    std::size_t shift = 0;
    double corr = 0.0;
};
std::vector<BestMatch> assign_all(const std::vector<UniformSeries>& data,
                                  const CentroidModel& model);

// Recomputes proportions against a full corpus (used when the model was fit
// on a sample: cluster weights are fractions of the whole data set).
void reweight_proportions(CentroidModel& model,
                          const std::vector<UniformSeries>& data);

BicScore bic_score(std::size_t k, std::size_t d, std::size_t n, double error,
                   const std::vector<std::size_t>& cluster_sizes);

struct RestartRecord {
    std::size_t k = 0;
    std::size_t restart = 0;
    std::uint64_t seed = 0;
    double error = 0.0;
    BicScore bic;
};

struct SelectKResult {
    std::size_t best_k = 0;
    CentroidModel model;
    ClusterState state;
    std::vector<RestartRecord> restarts;
};

// For each k: `restarts` seeded pkmeans runs, keep the lowest-error run,
// score it with BIC; the k maximizing the score wins, ties to smaller k.
SelectKResult select_k(const std::vector<UniformSeries>& data,
                       const std::vector<std::size_t>& k_range,
                       std::uint64_t seed, std::size_t restarts = 5,
                       const ClusterOptions& opts = {});

}  // namespace pcad
