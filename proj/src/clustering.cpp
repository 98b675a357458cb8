#include "pcad/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pcad/errors.hpp"
#include "pcad/rng.hpp"

namespace pcad {

namespace {

void check_corpus(const std::vector<UniformSeries>& data, std::size_t k) {
    if (data.empty()) {
        throw EmptyInput("clustering: empty corpus");
    }
    if (k < 1 || k > data.size()) {
        throw KTooLarge("clustering: k=" + std::to_string(k) + " with n=" +
                        std::to_string(data.size()));
    }
    const std::size_t d = data[0].d();
    for (const auto& s : data) {
        if (s.d() != d) {
            throw LengthMismatch("clustering: series '" + s.id +
                                 "' has length " + std::to_string(s.d()) +
                                 ", expected " + std::to_string(d));
        }
    }
}

double squared_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

// Picks successive worst-fit series (ascending score) skipping used ones.
std::size_t next_reseed(const std::vector<double>& fit_score,
                        std::vector<bool>& used) {
    std::size_t pick = 0;
    bool found = false;
    for (std::size_t i = 0; i < fit_score.size(); ++i) {
        if (used[i]) continue;
        if (!found || fit_score[i] < fit_score[pick]) {
            pick = i;
            found = true;
        }
    }
    used[pick] = true;
    return pick;
}

}  // namespace

std::pair<CentroidModel, ClusterState> pkmeans_from(
    const std::vector<UniformSeries>& data,
    std::vector<std::vector<double>> initial, std::uint64_t seed,
    const ClusterOptions& opts) {
    const std::size_t n = data.size();
    const std::size_t k = initial.size();
    check_corpus(data, k);
    const std::size_t d = data[0].d();
    if (!is_power_of_two(d)) {
        throw NonPowerOfTwoLength("pkmeans: d=" + std::to_string(d));
    }

    std::vector<Spectrum> series_spec(n);
    std::vector<double> series_norm2(n);
    for (std::size_t i = 0; i < n; ++i) {
        series_spec[i] = fft_forward(data[i].values);
        series_norm2[i] = squared_norm(data[i].values);
    }

    std::vector<std::vector<double>> centroids = std::move(initial);
    std::vector<std::size_t> assign(n), phase(n);
    std::vector<std::size_t> prev_assign, prev_phase;
    std::vector<double> best_corr(n);
    std::vector<double> trace;
    std::vector<double> buf;
    Spectrum scratch;
    bool reseeded_last = false;
    std::size_t iterations = 0;

    for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
        iterations = iter;

        std::vector<Spectrum> cent_spec(k);
        std::vector<double> cent_norm2(k);
        for (std::size_t j = 0; j < k; ++j) {
            cent_spec[j] = fft_forward(centroids[j]);
            cent_norm2[j] = squared_norm(centroids[j]);
        }

        // Assignment pass: the shift is the one applied to the series, so
        // the centroid sits in the first correlation slot.
        double error = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t bj = 0, bt = 0;
            double bc = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const PhaseMatch pm =
                    max_xcorr_spec(cent_spec[j], series_spec[i], buf, scratch);
                if (j == 0 || pm.corr > bc) {
                    bj = j;
                    bt = pm.shift;
                    bc = pm.corr;
                }
            }
            assign[i] = bj;
            phase[i] = bt;
            best_corr[i] = bc;
            error += 0.5 * (series_norm2[i] + cent_norm2[bj]) - bc;
        }
        trace.push_back(error);

        const bool unchanged = iter > 1 && !reseeded_last &&
                               assign == prev_assign && phase == prev_phase;
        if (unchanged || iter == opts.max_iter) break;
        prev_assign = assign;
        prev_phase = phase;

        // Centroid update: average of the cluster's rephased members.
        std::vector<std::vector<double>> next(k,
                                              std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = assign[i];
            const std::size_t tau = phase[i];
            ++counts[c];
            auto& acc = next[c];
            const auto& v = data[i].values;
            for (std::size_t t = 0; t < d; ++t) {
                acc[t] += v[(t + d - tau) % d];
            }
        }
        reseeded_last = false;
        std::vector<bool> used(n, false);
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) {
                const std::size_t w = next_reseed(best_corr, used);
                next[j] = rotate_values(data[w].values, phase[w]);
                reseeded_last = true;
                continue;
            }
            const double inv = 1.0 / static_cast<double>(counts[j]);
            for (double& t : next[j]) t *= inv;
            if (opts.renormalize) {
                const double norm = std::sqrt(squared_norm(next[j]));
                if (norm < 1e-12) {
                    // Exact cancellation inside the cluster; treat as empty.
                    const std::size_t w = next_reseed(best_corr, used);
                    next[j] = rotate_values(data[w].values, phase[w]);
                    reseeded_last = true;
                } else {
                    const double inv_norm = 1.0 / norm;
                    for (double& t : next[j]) t *= inv_norm;
                }
            }
        }

        if (!reseeded_last && next == centroids) {
            centroids = std::move(next);
            break;  // fixed point
        }
        centroids = std::move(next);
    }

    CentroidModel model;
    model.centroids = std::move(centroids);
    model.k = k;
    model.d = d;
    model.proportions.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) model.proportions[assign[i]] += 1.0;
    for (double& p : model.proportions) p /= static_cast<double>(n);
    model.meta.iterations = iterations;
    model.meta.final_error = trace.back();
    model.meta.seed = seed;
    model.meta.renormalized = opts.renormalize;
    model.meta.error_trace = std::move(trace);

    ClusterState state;
    state.assignments = std::move(assign);
    state.phases = std::move(phase);
    state.error = model.meta.final_error;
    return {std::move(model), std::move(state)};
}

std::pair<CentroidModel, ClusterState> pkmeans(
    const std::vector<UniformSeries>& data, std::size_t k, std::uint64_t seed,
    const ClusterOptions& opts) {
    check_corpus(data, k);
    Rng rng(seed);
    const std::vector<std::size_t> idx =
        sample_without_replacement(data.size(), k, rng);
    std::vector<std::vector<double>> initial(k);
    for (std::size_t j = 0; j < k; ++j) initial[j] = data[idx[j]].values;
    return pkmeans_from(data, std::move(initial), seed, opts);
}

std::pair<CentroidModel, ClusterState> kmeans_from(
    const std::vector<UniformSeries>& data,
    std::vector<std::vector<double>> initial, std::uint64_t seed,
    std::size_t max_iter) {
    const std::size_t n = data.size();
    const std::size_t k = initial.size();
    check_corpus(data, k);
    const std::size_t d = data[0].d();

    std::vector<std::vector<double>> centroids = std::move(initial);
    std::vector<std::size_t> assign(n);
    std::vector<std::size_t> prev_assign;
    std::vector<double> fit(n);  // negated distance, so reseed picks farthest
    std::vector<double> trace;
    bool reseeded_last = false;
    std::size_t iterations = 0;

    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        iterations = iter;
        double error = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t bj = 0;
            double bd = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                double dist = 0.0;
                const auto& w = centroids[j];
                const auto& v = data[i].values;
                for (std::size_t t = 0; t < d; ++t) {
                    const double diff = v[t] - w[t];
                    dist += diff * diff;
                }
                if (j == 0 || dist < bd) {
                    bj = j;
                    bd = dist;
                }
            }
            assign[i] = bj;
            fit[i] = -bd;
            error += 0.5 * bd;
        }
        trace.push_back(error);

        const bool unchanged =
            iter > 1 && !reseeded_last && assign == prev_assign;
        if (unchanged || iter == max_iter) break;
        prev_assign = assign;

        std::vector<std::vector<double>> next(k,
                                              std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assign[i]];
            const auto& v = data[i].values;
            auto& acc = next[assign[i]];
            for (std::size_t t = 0; t < d; ++t) acc[t] += v[t];
        }
        reseeded_last = false;
        std::vector<bool> used(n, false);
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) {
                next[j] = data[next_reseed(fit, used)].values;
                reseeded_last = true;
                continue;
            }
            const double inv = 1.0 / static_cast<double>(counts[j]);
            for (double& t : next[j]) t *= inv;
        }
        if (!reseeded_last && next == centroids) {
            centroids = std::move(next);
            break;
        }
        centroids = std::move(next);
    }

    // Unit-normalize only after the run so the error trace stays the plain
    // k-means quantity.
    for (auto& w : centroids) {
        const double norm = std::sqrt(squared_norm(w));
        if (norm >= 1e-12) {
            const double inv = 1.0 / norm;
            for (double& t : w) t *= inv;
        }
    }

    CentroidModel model;
    model.centroids = std::move(centroids);
    model.k = k;
    model.d = d;
    model.proportions.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) model.proportions[assign[i]] += 1.0;
    for (double& p : model.proportions) p /= static_cast<double>(n);
    model.meta.iterations = iterations;
    model.meta.final_error = trace.back();
    model.meta.seed = seed;
    model.meta.renormalized = true;
    model.meta.error_trace = std::move(trace);

    ClusterState state;
    state.assignments = std::move(assign);
    state.phases.assign(n, 0);
    state.error = model.meta.final_error;
    return {std::move(model), std::move(state)};
}

std::pair<CentroidModel, ClusterState> kmeans(
    const std::vector<UniformSeries>& data, std::size_t k, std::uint64_t seed,
    std::size_t max_iter) {
    check_corpus(data, k);
    Rng rng(seed);
    const std::vector<std::size_t> idx =
        sample_without_replacement(data.size(), k, rng);
    std::vector<std::vector<double>> initial(k);
    for (std::size_t j = 0; j < k; ++j) initial[j] = data[idx[j]].values;
    return kmeans_from(data, std::move(initial), seed, max_iter);
}

double quantization_error(const std::vector<UniformSeries>& data,
                          const CentroidModel& model,
                          const ClusterState& state) {
    const std::size_t n = data.size();
    if (state.assignments.size() != n || state.phases.size() != n ||
        model.centroids.size() != model.k) {
        throw InconsistentState("quantization_error: sizes disagree");
    }
    const std::size_t d = model.d;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = state.assignments[i];
        const std::size_t tau = state.phases[i];
        if (c >= model.k || tau >= d || data[i].d() != d) {
            throw InconsistentState(
                "quantization_error: assignment/phase out of range at " +
                std::to_string(i));
        }
        const auto& w = model.centroids[c];
        const auto& v = data[i].values;
        double dist = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
            const double diff = v[(t + d - tau) % d] - w[t];
            dist += diff * diff;
        }
        total += 0.5 * dist;
    }
    return total;
}

std::vector<BestMatch> assign_all(const std::vector<UniformSeries>& data,
                                  const CentroidModel& model) {
    std::vector<Spectrum> cent_spec(model.k);
    for (std::size_t j = 0; j < model.k; ++j) {
        cent_spec[j] = fft_forward(model.centroids[j]);
    }
    std::vector<BestMatch> out(data.size());
    std::vector<double> buf;
    Spectrum scratch;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].d() != model.d) {
            throw LengthMismatch("assign_all: series '" + data[i].id +
                                 "' length differs from model d");
        }
        const Spectrum xs = fft_forward(data[i].values);
        BestMatch best;
        for (std::size_t j = 0; j < model.k; ++j) {
            const PhaseMatch pm = max_xcorr_spec(cent_spec[j], xs, buf, scratch);
            if (j == 0 || pm.corr > best.corr) {
                best = BestMatch{j, pm.shift, pm.corr};
            }
        }
        out[i] = best;
    }
    return out;
}

void reweight_proportions(CentroidModel& model,
                          const std::vector<UniformSeries>& data) {
    const std::vector<BestMatch> best = assign_all(data, model);
    model.proportions.assign(model.k, 0.0);
    for (const BestMatch& b : best) model.proportions[b.cluster] += 1.0;
    for (double& p : model.proportions) {
        p /= static_cast<double>(data.size());
    }
}

BicScore bic_score(std::size_t k, std::size_t d, std::size_t n, double error,
                   const std::vector<std::size_t>& cluster_sizes) {
    const double nd = static_cast<double>(n) * static_cast<double>(d);
    const double dof = nd - static_cast<double>(k) * static_cast<double>(d);
    double var = dof > 0.0 ? 2.0 * error / dof : 0.0;
    var = std::max(var, 1e-30);  // perfect fits would send log to -inf

    double ll = -0.5 * nd * std::log(2.0 * std::numbers::pi * var) -
                error / var;
    for (std::size_t sz : cluster_sizes) {
        if (sz > 0) {
            ll += static_cast<double>(sz) *
                  std::log(static_cast<double>(sz) / static_cast<double>(n));
        }
    }
    BicScore b;
    b.k = k;
    b.loglik = ll;
    b.p = k * d + k + 1;
    b.score = ll - 0.5 * static_cast<double>(b.p) *
                       std::log(static_cast<double>(n));
    return b;
}

SelectKResult select_k(const std::vector<UniformSeries>& data,
                       const std::vector<std::size_t>& k_range,
                       std::uint64_t seed, std::size_t restarts,
                       const ClusterOptions& opts) {
    if (k_range.empty()) {
        throw ConfigError("select_k: empty k range");
    }
    if (restarts < 1) {
        throw ConfigError("select_k: restarts must be >= 1");
    }
    std::vector<std::size_t> ks = k_range;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    SelectKResult result;
    bool have_best = false;
    double best_score = 0.0;

    for (std::size_t k : ks) {
        std::pair<CentroidModel, ClusterState> best_run;
        bool have_run = false;
        for (std::size_t r = 0; r < restarts; ++r) {
            const std::uint64_t sub = derive_seed(seed, (k << 20) | r);
            auto run = pkmeans(data, k, sub, opts);

            std::vector<std::size_t> sizes(k, 0);
            for (std::size_t a : run.second.assignments) ++sizes[a];
            RestartRecord rec;
            rec.k = k;
            rec.restart = r;
            rec.seed = sub;
            rec.error = run.second.error;
            rec.bic = bic_score(k, run.first.d, data.size(), run.second.error,
                                sizes);
            result.restarts.push_back(rec);

            if (!have_run || run.second.error < best_run.second.error) {
                best_run = std::move(run);
                have_run = true;
            }
        }
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t a : best_run.second.assignments) ++sizes[a];
        const BicScore bic = bic_score(k, best_run.first.d, data.size(),
                                       best_run.second.error, sizes);
        if (!have_best || bic.score > best_score) {
            have_best = true;
            best_score = bic.score;
            result.best_k = k;
            result.model = std::move(best_run.first);
            result.state = std::move(best_run.second);
        }
    }
    return result;
}

}  // namespace pcad
