#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcad/clustering.hpp"
#include "pcad/series.hpp"

namespace pcad {

struct RankEntry {
    std::string id;
    double score = 0.0;
    long best_cluster = -1;      // -1 where no cluster applies
    std::size_t best_shift = 0;
};

// Entries sorted by ascending score (most anomalous first), stable under
// ties. Carries the provenance written into ranking file headers.
struct AnomalyRanking {
    std::vector<RankEntry> entries;
    std::size_t m = 0;
    std::string method;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    std::size_t s = 0;

    std::vector<RankEntry> top_m() const {
        return {entries.begin(),
                entries.begin() + std::min<std::size_t>(m, entries.size())};
    }
};

enum class ScoreMetric { Euclidean, CrossCorrelation };

// Eq.-style global score: proportion-weighted maximized cross correlation
// against every centroid. Lower = more anomalous.
double score_global(const UniformSeries& x, const CentroidModel& model);

// Correlation to the closest (max-corr) centroid. The literal-min variant
// returns the smallest correlation over centroids instead.
struct LocalScore {
    double corr = 0.0;
    std::size_t cluster = 0;
    std::size_t shift = 0;
};
LocalScore score_local(const UniformSeries& x, const CentroidModel& model,
                       bool literal_min = false);

// Stable ascending sort plus the requested cutoff.
AnomalyRanking rank(std::vector<RankEntry> scores, std::size_t m);

AnomalyRanking pcad_global(const std::vector<UniformSeries>& data,
                           const CentroidModel& model, std::size_t m);
AnomalyRanking pcad_local(const std::vector<UniformSeries>& data,
                          const CentroidModel& model, std::size_t m,
                          bool literal_min = false);

// Splits a local ranking by best_cluster, preserving rank order.
std::vector<AnomalyRanking> per_cluster(const AnomalyRanking& ranking,
                                        std::size_t k);

// Exhaustive pairwise benchmark: Gaussian-weighted mean of each series'
// maximized cross correlation to the other n-1.
AnomalyRanking pn_means(const std::vector<UniformSeries>& data, std::size_t m);

// Single plain-average centroid, scored by correlation at shift zero.
AnomalyRanking protopapas_n(const std::vector<UniformSeries>& data,
                            std::size_t m);

// s randomly drawn series act as pseudo-centroids; weights are cluster
// proportions (gauss = false) or per-row Gaussian weights (gauss = true).
AnomalyRanking rand_cc(const std::vector<UniformSeries>& data, std::size_t s,
                       std::uint64_t seed, bool gauss, std::size_t m);

// pkmeans with k = 1, then the global score.
AnomalyRanking p1_mean(const std::vector<UniformSeries>& data,
                       std::uint64_t seed, std::size_t m);

// Plain k-means centroids, scored by Euclidean distance (mapped onto the
// correlation scale via 1 - 0.5*dist^2) or by maximized cross correlation.
AnomalyRanking kmeans_baseline(const std::vector<UniformSeries>& data,
                               std::size_t k, std::uint64_t seed,
                               ScoreMetric metric, std::size_t m);
AnomalyRanking kmeans_baseline_from(const std::vector<UniformSeries>& data,
                                    const CentroidModel& model,
                                    ScoreMetric metric, std::size_t m);

// Brute-force discord search: rank by farthest rotation-invariant nearest
// neighbor. Stored score is -nn_dist so ascending still means anomalous.
AnomalyRanking ri_discord(const std::vector<UniformSeries>& data,
                          std::size_t m);

}  // namespace pcad
