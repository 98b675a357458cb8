#include "pcad/eval.hpp"

#include <cmath>
#include <unordered_map>

#include "pcad/errors.hpp"

namespace pcad {

double precision_at_m(const AnomalyRanking& ranking,
                      const std::set<std::string>& truth, std::size_t m) {
    if (m > ranking.entries.size()) {
        throw MTooLarge("precision_at_m: m=" + std::to_string(m) +
                        " exceeds ranking size " +
                        std::to_string(ranking.entries.size()));
    }
    if (m == 0) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (truth.count(ranking.entries[i].id)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(m);
}

std::vector<std::size_t> rank_change(const AnomalyRanking& benchmark,
                                     const AnomalyRanking& candidate,
                                     std::size_t m) {
    if (m > benchmark.entries.size()) {
        throw MTooLarge("rank_change: m exceeds benchmark size");
    }
    std::unordered_map<std::string, std::size_t> cand_rank;
    for (std::size_t i = 0; i < candidate.entries.size(); ++i) {
        cand_rank.emplace(candidate.entries[i].id, i + 1);
    }
    std::vector<std::size_t> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::string& id = benchmark.entries[i].id;
        auto it = cand_rank.find(id);
        if (it == cand_rank.end()) {
            throw MissingId("rank_change: id '" + id +
                            "' absent from candidate ranking");
        }
        const std::size_t rb = i + 1;
        const std::size_t rc = it->second;
        out.push_back(rb > rc ? rb - rc : rc - rb);
    }
    return out;
}

double mean_of(const std::vector<std::size_t>& v) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t x : v) acc += static_cast<double>(x);
    return acc / static_cast<double>(v.size());
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double stdev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double acc = 0.0;
    for (double x : v) {
        const double c = x - mu;
        acc += c * c;
    }
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace pcad
