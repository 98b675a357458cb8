#include "pcad/anomaly.hpp"

#include <algorithm>
#include <cmath>

#include "pcad/errors.hpp"
#include "pcad/rng.hpp"

namespace pcad {

namespace {

void check_model_length(const UniformSeries& x, const CentroidModel& model) {
    if (x.d() != model.d) {
        throw LengthMismatch("score: series '" + x.id + "' has d=" +
                             std::to_string(x.d()) + ", model has d=" +
                             std::to_string(model.d));
    }
}

std::vector<Spectrum> spectra_of(const std::vector<UniformSeries>& data) {
    std::vector<Spectrum> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        out[i] = fft_forward(data[i].values);
    }
    return out;
}

// Max correlation of every series against every reference, one row per
// series. Rows are computed independently so corpus permutations permute
// results exactly.
std::vector<std::vector<double>> corr_matrix(
    const std::vector<Spectrum>& series, const std::vector<Spectrum>& refs) {
    std::vector<std::vector<double>> r(series.size(),
                                       std::vector<double>(refs.size()));
    std::vector<double> buf;
    Spectrum scratch;
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = 0; j < refs.size(); ++j) {
            r[i][j] = max_xcorr_spec(refs[j], series[i], buf, scratch).corr;
        }
    }
    return r;
}

}  // namespace

AnomalyRanking rank(std::vector<RankEntry> scores, std::size_t m) {
    if (m > scores.size()) {
        throw MTooLarge("rank: m=" + std::to_string(m) + " with n=" +
                        std::to_string(scores.size()));
    }
    std::stable_sort(scores.begin(), scores.end(),
                     [](const RankEntry& a, const RankEntry& b) {
                         return a.score < b.score;
                     });
    AnomalyRanking out;
    out.entries = std::move(scores);
    out.m = m;
    return out;
}

double score_global(const UniformSeries& x, const CentroidModel& model) {
    check_model_length(x, model);
    const Spectrum xs = fft_forward(x.values);
    std::vector<double> buf;
    Spectrum scratch;
    double score = 0.0;
    for (std::size_t j = 0; j < model.k; ++j) {
        const Spectrum ws = fft_forward(model.centroids[j]);
        score += model.proportions[j] *
                 max_xcorr_spec(ws, xs, buf, scratch).corr;
    }
    return score;
}

LocalScore score_local(const UniformSeries& x, const CentroidModel& model,
                       bool literal_min) {
    check_model_length(x, model);
    const Spectrum xs = fft_forward(x.values);
    std::vector<double> buf;
    Spectrum scratch;
    LocalScore out;
    for (std::size_t j = 0; j < model.k; ++j) {
        const Spectrum ws = fft_forward(model.centroids[j]);
        const PhaseMatch pm = max_xcorr_spec(ws, xs, buf, scratch);
        const bool better = literal_min ? pm.corr < out.corr
                                        : pm.corr > out.corr;
        if (j == 0 || better) {
            out = LocalScore{pm.corr, j, pm.shift};
        }
    }
    return out;
}

AnomalyRanking pcad_global(const std::vector<UniformSeries>& data,
                           const CentroidModel& model, std::size_t m) {
    const std::vector<Spectrum> series = spectra_of(data);
    std::vector<Spectrum> cents(model.k);
    for (std::size_t j = 0; j < model.k; ++j) {
        cents[j] = fft_forward(model.centroids[j]);
    }
    std::vector<RankEntry> entries(data.size());
    std::vector<double> buf;
    Spectrum scratch;
    for (std::size_t i = 0; i < data.size(); ++i) {
        check_model_length(data[i], model);
        double score = 0.0;
        PhaseMatch best{0.0, 0};
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < model.k; ++j) {
            const PhaseMatch pm = max_xcorr_spec(cents[j], series[i], buf,
                                                 scratch);
            score += model.proportions[j] * pm.corr;
            if (j == 0 || pm.corr > best.corr) {
                best = pm;
                best_j = j;
            }
        }
        entries[i] = RankEntry{data[i].id, score,
                               static_cast<long>(best_j), best.shift};
    }
    AnomalyRanking out = rank(std::move(entries), m);
    out.method = "PCAD_GLOBAL";
    out.k = model.k;
    out.seed = model.meta.seed;
    return out;
}

AnomalyRanking pcad_local(const std::vector<UniformSeries>& data,
                          const CentroidModel& model, std::size_t m,
                          bool literal_min) {
    std::vector<RankEntry> entries(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const LocalScore ls = score_local(data[i], model, literal_min);
        entries[i] = RankEntry{data[i].id, ls.corr,
                               static_cast<long>(ls.cluster), ls.shift};
    }
    AnomalyRanking out = rank(std::move(entries), m);
    out.method = "PCAD_LOCAL";
    out.k = model.k;
    out.seed = model.meta.seed;
    return out;
}

std::vector<AnomalyRanking> per_cluster(const AnomalyRanking& ranking,
                                        std::size_t k) {
    std::vector<AnomalyRanking> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        out[j].m = ranking.m;
        out[j].method = ranking.method;
        out[j].seed = ranking.seed;
        out[j].k = ranking.k;
        out[j].s = ranking.s;
    }
    for (const RankEntry& e : ranking.entries) {
        if (e.best_cluster >= 0 &&
            static_cast<std::size_t>(e.best_cluster) < k) {
            out[e.best_cluster].entries.push_back(e);
        }
    }
    return out;
}

AnomalyRanking pn_means(const std::vector<UniformSeries>& data,
                        std::size_t m) {
    const std::size_t n = data.size();
    if (n < 3) {
        throw TooFewSeries("pn_means: need n >= 3, got " + std::to_string(n));
    }
    const std::vector<Spectrum> spec = spectra_of(data);
    const std::vector<std::vector<double>> r = corr_matrix(spec, spec);

    std::vector<RankEntry> entries(n);
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) mean += r[i][j];
        }
        mean /= static_cast<double>(n - 1);
        double var = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                const double c = r[i][j] - mean;
                var += c * c;
            }
        }
        const double sd = n > 2 ? std::sqrt(var / static_cast<double>(n - 2))
                                : 0.0;
        double score;
        if (sd == 0.0) {
            score = mean;
        } else {
            double wsum = 0.0, acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double z = (r[i][j] - mean) / sd;
                const double w = std::exp(-0.5 * z * z);
                wsum += w;
                acc += w * r[i][j];
            }
            score = acc / wsum;
        }
        entries[i] = RankEntry{data[i].id, score, -1, 0};
    }
    AnomalyRanking out = rank(std::move(entries), m);
    out.method = "PN_MEANS";
    return out;
}

AnomalyRanking protopapas_n(const std::vector<UniformSeries>& data,
                            std::size_t m) {
    const std::size_t n = data.size();
    if (n < 2) {
        throw TooFewSeries("protopapas_n: need n >= 2");
    }
    const std::size_t d = data[0].d();
    std::vector<double> centroid(d, 0.0);
    for (const auto& s : data) {
        if (s.d() != d) {
            throw LengthMismatch("protopapas_n: mixed lengths");
        }
        for (std::size_t t = 0; t < d; ++t) centroid[t] += s.values[t];
    }
    double norm = 0.0;
    for (double& v : centroid) {
        v /= static_cast<double>(n);
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
        throw ZeroVariance("protopapas_n: corpus mean is the zero vector");
    }
    for (double& v : centroid) v /= norm;

    // Plain correlation at shift zero, no phase search.
    std::vector<RankEntry> entries(n);
    for (std::size_t i = 0; i < n; ++i) {
        double corr = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
            corr += data[i].values[t] * centroid[t];
        }
        entries[i] = RankEntry{data[i].id, corr, -1, 0};
    }
    AnomalyRanking out = rank(std::move(entries), m);
    out.method = "PROTOPAPAS_N";
    return out;
}

AnomalyRanking rand_cc(const std::vector<UniformSeries>& data, std::size_t s,
                       std::uint64_t seed, bool gauss, std::size_t m) {
    const std::size_t n = data.size();
    if (s < 1 || s > n) {
        throw SampleTooLarge("rand_cc: s=" + std::to_string(s) + " with n=" +
                             std::to_string(n));
    }
    Rng rng(seed);
    const std::vector<std::size_t> ref_idx =
        sample_without_replacement(n, s, rng);

    const std::vector<Spectrum> spec = spectra_of(data);
    std::vector<Spectrum> ref_spec(s);
    for (std::size_t j = 0; j < s; ++j) ref_spec[j] = spec[ref_idx[j]];
    const std::vector<std::vector<double>> r = corr_matrix(spec, ref_spec);

    std::vector<RankEntry> entries(n);
    if (!gauss) {
        // Cluster proportions: fraction of the corpus whose best
        // pseudo-centroid is j.
        std::vector<double> weight(s, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t bj = 0;
            for (std::size_t j = 1; j < s; ++j) {
                if (r[i][j] > r[i][bj]) bj = j;
            }
            weight[bj] += 1.0;
        }
        for (double& w : weight) w /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            double score = 0.0;
            std::size_t bj = 0;
            for (std::size_t j = 0; j < s; ++j) {
                score += weight[j] * r[i][j];
                if (r[i][j] > r[i][bj]) bj = j;
            }
            entries[i] = RankEntry{data[i].id, score,
                                   static_cast<long>(bj), 0};
        }
    } else {
        // Per-row Gaussian weighting; the series' own draw is excluded so
        // the s = n limit matches pn_means.
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> vals;
            vals.reserve(s);
            for (std::size_t j = 0; j < s; ++j) {
                if (ref_idx[j] != i) vals.push_back(r[i][j]);
            }
            double score;
            if (vals.empty()) {
                score = 1.0;  // s = 1 and the lone reference is the series
            } else if (vals.size() == 1) {
                score = vals[0];
            } else {
                double mean = 0.0;
                for (double v : vals) mean += v;
                mean /= static_cast<double>(vals.size());
                double var = 0.0;
                for (double v : vals) {
                    const double c = v - mean;
                    var += c * c;
                }
                const double sd =
                    std::sqrt(var / static_cast<double>(vals.size() - 1));
                if (sd == 0.0) {
                    score = mean;
                } else {
                    double wsum = 0.0, acc = 0.0;
                    for (double v : vals) {
                        const double z = (v - mean) / sd;
                        const double w = std::exp(-0.5 * z * z);
                        wsum += w;
                        acc += w * v;
                    }
                    score = acc / wsum;
                }
            }
            entries[i] = RankEntry{data[i].id, score, -1, 0};
        }
    }
    AnomalyRanking out = rank(std::move(entries), m);
    out.method = gauss ? "RAND_CC_GAUSS" : "RAND_CC";
    out.seed = seed;
    out.s = s;
    return out;
}

AnomalyRanking p1_mean(const std::vector<UniformSeries>& data,
                       std::uint64_t seed, std::size_t m) {
    if (data.size() < 2) {
        throw TooFewSeries("p1_mean: need n >= 2");
    }
    const auto [model, state] = pkmeans(data, 1, seed);
    AnomalyRanking out = pcad_global(data, model, m);
    out.method = "P1_MEAN";
    out.seed = seed;
    out.k = 1;
    return out;
}

AnomalyRanking kmeans_baseline_from(const std::vector<UniformSeries>& data,
                                    const CentroidModel& model,
                                    ScoreMetric metric, std::size_t m) {
    std::vector<RankEntry> entries(data.size());
    if (metric == ScoreMetric::Euclidean) {
        for (std::size_t i = 0; i < data.size(); ++i) {
            check_model_length(data[i], model);
            double score = 0.0;
            std::size_t bj = 0;
            double bd = 0.0;
            for (std::size_t j = 0; j < model.k; ++j) {
                double dist = 0.0;
                for (std::size_t t = 0; t < model.d; ++t) {
                    const double diff =
                        data[i].values[t] - model.centroids[j][t];
                    dist += diff * diff;
                }
                score += model.proportions[j] * (1.0 - 0.5 * dist);
                if (j == 0 || dist < bd) {
                    bj = j;
                    bd = dist;
                }
            }
            entries[i] = RankEntry{data[i].id, score,
                                   static_cast<long>(bj), 0};
        }
    } else {
        const AnomalyRanking cc = pcad_global(data, model, m);
        AnomalyRanking out = cc;
        out.method = "KMEANS_CC";
        out.k = model.k;
        return out;
    }
    AnomalyRanking out = rank(std::move(entries), m);
    out.method = "KMEANS_ED";
    out.k = model.k;
    return out;
}

AnomalyRanking kmeans_baseline(const std::vector<UniformSeries>& data,
                               std::size_t k, std::uint64_t seed,
                               ScoreMetric metric, std::size_t m) {
    const auto [model, state] = kmeans(data, k, seed);
    AnomalyRanking out = kmeans_baseline_from(data, model, metric, m);
    out.seed = seed;
    return out;
}

AnomalyRanking ri_discord(const std::vector<UniformSeries>& data,
                          std::size_t m) {
    const std::size_t n = data.size();
    if (n < 2) {
        throw TooFewSeries("ri_discord: need n >= 2");
    }
    const std::vector<Spectrum> spec = spectra_of(data);
    std::vector<RankEntry> entries(n);
    std::vector<double> buf;
    Spectrum scratch;
    for (std::size_t i = 0; i < n; ++i) {
        double nn = 0.0;
        bool first = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dist =
                1.0 - max_xcorr_spec(spec[i], spec[j], buf, scratch).corr;
            if (first || dist < nn) {
                nn = dist;
                first = false;
            }
        }
        // Descending by nn distance == ascending by its negation.
        entries[i] = RankEntry{data[i].id, -nn, -1, 0};
    }
    AnomalyRanking out = rank(std::move(entries), m);
    out.method = "RI_DISCORD";
    return out;
}

}  // namespace pcad
