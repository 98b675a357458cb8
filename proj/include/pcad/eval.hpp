#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pcad/anomaly.hpp"

namespace pcad {

// Fraction of the ranking's top m ids that are planted outliers. With
// m = |truth| this equals recall too.
double precision_at_m(const AnomalyRanking& ranking,
                      const std::set<std::string>& truth, std::size_t m);

// For the benchmark's top-m ids, |rank_benchmark - rank_candidate| in
// benchmark order. Ranks are 1-based positions in the full rankings.
std::vector<std::size_t> rank_change(const AnomalyRanking& benchmark,
                                     const AnomalyRanking& candidate,
                                     std::size_t m);

double mean_of(const std::vector<std::size_t>& v);
double mean_of(const std::vector<double>& v);
double stdev_of(const std::vector<double>& v);  // sample stdev

struct IterationRecord {
    std::size_t iteration = 0;
    std::uint64_t seed = 0;
    std::string method;
    std::size_t sample_size = 0;
    std::size_t k_used = 0;
    double precision = -1.0;         // < 0 when not measured
    double mean_rank_change = -1.0;  // < 0 when not measured
};

struct SweepPoint {
    std::string method;
    std::size_t sample_size = 0;
    double sample_fraction = 0.0;
    double mean = 0.0;
    double stdev = 0.0;
};

struct EvalReport {
    std::vector<IterationRecord> records;
    std::vector<SweepPoint> precision_points;
    std::vector<SweepPoint> rank_change_points;
};

}  // namespace pcad
