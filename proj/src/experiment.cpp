#include "pcad/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "pcad/errors.hpp"
#include "pcad/io.hpp"
#include "pcad/rng.hpp"

namespace pcad {

namespace fs = std::filesystem;

std::size_t SampleSpec::resolve(std::size_t n) const {
    double v = value;
    if (is_fraction) {
        v = value / 100.0 * static_cast<double>(n);
    }
    const long long size = std::llround(v);
    if (size < 1) return 1;
    if (size > static_cast<long long>(n)) return n;
    return static_cast<std::size_t>(size);
}

namespace {

const std::set<std::string> kKnownMethods = {
    "PCAD_GLOBAL", "PCAD_LOCAL", "PN_MEANS",  "PROTOPAPAS_N", "RAND_CC",
    "RAND_CC_GAUSS", "P1_MEAN",  "KMEANS_ED", "KMEANS_CC",    "RI_DISCORD"};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        std::string tok = s.substr(pos, next - pos);
        const auto a = tok.find_first_not_of(" \t");
        const auto b = tok.find_last_not_of(" \t");
        if (a != std::string::npos) tok = tok.substr(a, b - a + 1);
        else tok.clear();
        if (!tok.empty()) out.push_back(tok);
        pos = next + 1;
    }
    return out;
}

double to_double(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw ConfigError("key '" + key + "': bad number '" + s + "'");
    }
    return v;
}

std::uint64_t to_u64(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') {
        throw ConfigError("key '" + key + "': bad integer '" + s + "'");
    }
    return v;
}

// shape:fraction[:sigma[:variant[:paired_normal]]]
ClassSpec parse_class(const std::string& token, bool outlier,
                      const std::vector<ClassSpec>& existing) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (pos <= token.size()) {
        std::size_t next = token.find(':', pos);
        if (next == std::string::npos) next = token.size();
        fields.push_back(token.substr(pos, next - pos));
        pos = next + 1;
    }
    if (fields.size() < 2 || fields.size() > 5) {
        throw ConfigError("bad class token '" + token +
                          "', expected shape:fraction[:sigma[:variant[:paired]]]");
    }
    ClassSpec c;
    c.shape = shape_from_name(fields[0]);
    c.fraction = to_double(fields[1], "classes");
    c.sigma = fields.size() > 2 && !fields[2].empty()
                  ? to_double(fields[2], "classes")
                  : 0.05;
    c.variant = fields.size() > 3 && !fields[3].empty()
                    ? to_double(fields[3], "classes")
                    : -1.0;
    c.is_outlier = outlier;
    if (fields.size() > 4) c.paired_normal = fields[4];

    std::string label = fields[0];
    std::size_t suffix = 1;
    auto taken = [&](const std::string& l) {
        for (const ClassSpec& e : existing) {
            if (e.label == l) return true;
        }
        return false;
    };
    while (taken(label)) {
        ++suffix;
        label = fields[0] + "_" + std::to_string(suffix);
    }
    c.label = label;
    return c;
}

}  // namespace

ExperimentConfig parse_experiment_config(
    const std::vector<std::pair<std::string, std::string>>& kv) {
    ExperimentConfig cfg;
    bool have_k = false;
    for (const auto& [key, value] : kv) {
        if (key == "mode") {
            if (value == "precision") {
                cfg.mode = ExperimentConfig::Mode::Precision;
            } else if (value == "rankchange") {
                cfg.mode = ExperimentConfig::Mode::RankChange;
            } else {
                throw ConfigError("key 'mode': unknown value '" + value + "'");
            }
        } else if (key == "score") {
            if (value == "global") cfg.local = false;
            else if (value == "local") cfg.local = true;
            else throw ConfigError("key 'score': unknown value '" + value + "'");
        } else if (key == "methods") {
            cfg.methods = split_list(value);
            for (const std::string& m : cfg.methods) {
                if (!kKnownMethods.count(m)) {
                    throw ConfigError("key 'methods': unknown method '" + m +
                                      "'");
                }
            }
        } else if (key == "classes") {
            for (const std::string& tok : split_list(value)) {
                cfg.mix.classes.push_back(
                    parse_class(tok, false, cfg.mix.classes));
            }
        } else if (key == "outliers") {
            for (const std::string& tok : split_list(value)) {
                cfg.mix.classes.push_back(
                    parse_class(tok, true, cfg.mix.classes));
            }
        } else if (key == "total_n") {
            cfg.mix.total_n = to_u64(value, key);
        } else if (key == "d") {
            cfg.mix.d = to_u64(value, key);
        } else if (key == "iterations") {
            cfg.iterations = to_u64(value, key);
        } else if (key == "seed") {
            cfg.seed = to_u64(value, key);
        } else if (key == "k") {
            cfg.k_range = {static_cast<std::size_t>(to_u64(value, key))};
            cfg.forced_k = cfg.k_range[0];
            have_k = true;
        } else if (key == "k_range") {
            const std::size_t dots = value.find("..");
            if (dots == std::string::npos) {
                throw ConfigError("key 'k_range': expected 'a..b'");
            }
            const std::size_t a = to_u64(value.substr(0, dots), key);
            const std::size_t b = to_u64(value.substr(dots + 2), key);
            if (a < 1 || b < a) {
                throw ConfigError("key 'k_range': bad range '" + value + "'");
            }
            cfg.k_range.clear();
            for (std::size_t k = a; k <= b; ++k) cfg.k_range.push_back(k);
            have_k = true;
        } else if (key == "restarts") {
            cfg.restarts = to_u64(value, key);
        } else if (key == "samples") {
            cfg.samples.clear();
            for (const std::string& tok : split_list(value)) {
                SampleSpec s;
                if (!tok.empty() && tok.back() == '%') {
                    s.is_fraction = true;
                    s.value = to_double(tok.substr(0, tok.size() - 1), key);
                } else {
                    s.is_fraction = false;
                    s.value = to_double(tok, key);
                }
                cfg.samples.push_back(s);
            }
            if (cfg.samples.empty()) {
                throw ConfigError("key 'samples': empty list");
            }
        } else if (key == "top") {
            cfg.top = to_u64(value, key);
        } else if (key == "m") {
            if (value != "auto") {
                cfg.m = static_cast<std::size_t>(to_u64(value, key));
            }
        } else if (key == "out") {
            cfg.out_dir = value;
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    if (cfg.local && !have_k) {
        cfg.k_range = {cfg.forced_k};
    }
    if (cfg.methods.empty()) {
        if (cfg.mode == ExperimentConfig::Mode::RankChange) {
            cfg.methods = {"PCAD_GLOBAL", "RAND_CC", "RAND_CC_GAUSS",
                           "PROTOPAPAS_N"};
        } else if (cfg.local) {
            cfg.methods = {"PCAD_LOCAL", "RAND_CC"};
        } else {
            cfg.methods = {"PCAD_GLOBAL", "P1_MEAN", "RAND_CC", "KMEANS_CC",
                           "KMEANS_ED", "RI_DISCORD"};
        }
    }
    return cfg;
}

PcadFit fit_pcad(const std::vector<UniformSeries>& data,
                 const std::vector<std::size_t>& sample_idx,
                 const std::vector<std::size_t>& k_range, std::size_t restarts,
                 std::uint64_t seed) {
    std::vector<UniformSeries> sample;
    sample.reserve(sample_idx.size());
    for (std::size_t i : sample_idx) sample.push_back(data[i]);

    std::vector<std::size_t> ks;
    for (std::size_t k : k_range) {
        if (k <= sample.size()) ks.push_back(k);
    }
    if (ks.empty()) ks.push_back(1);

    SelectKResult sel = select_k(sample, ks, seed, restarts);
    reweight_proportions(sel.model, data);
    return PcadFit{std::move(sel.model), sel.best_k};
}

namespace {

void reweight_euclidean(CentroidModel& model,
                        const std::vector<UniformSeries>& data) {
    model.proportions.assign(model.k, 0.0);
    for (const UniformSeries& x : data) {
        std::size_t bj = 0;
        double bd = 0.0;
        for (std::size_t j = 0; j < model.k; ++j) {
            double dist = 0.0;
            for (std::size_t t = 0; t < model.d; ++t) {
                const double diff = x.values[t] - model.centroids[j][t];
                dist += diff * diff;
            }
            if (j == 0 || dist < bd) {
                bj = j;
                bd = dist;
            }
        }
        model.proportions[bj] += 1.0;
    }
    for (double& p : model.proportions) {
        p /= static_cast<double>(data.size());
    }
}

}  // namespace

PcadFit fit_kmeans(const std::vector<UniformSeries>& data,
                   const std::vector<std::size_t>& sample_idx,
                   const std::vector<std::size_t>& k_range,
                   std::size_t restarts, std::uint64_t seed) {
    std::vector<UniformSeries> sample;
    sample.reserve(sample_idx.size());
    for (std::size_t i : sample_idx) sample.push_back(data[i]);

    std::vector<std::size_t> ks;
    for (std::size_t k : k_range) {
        if (k <= sample.size()) ks.push_back(k);
    }
    if (ks.empty()) ks.push_back(1);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    CentroidModel best_model;
    double best_score = 0.0;
    std::size_t best_k = 0;
    bool have = false;
    for (std::size_t k : ks) {
        std::pair<CentroidModel, ClusterState> best_run;
        bool have_run = false;
        for (std::size_t r = 0; r < restarts; ++r) {
            auto run = kmeans(sample, k, derive_seed(seed, (k << 20) | r));
            if (!have_run || run.second.error < best_run.second.error) {
                best_run = std::move(run);
                have_run = true;
            }
        }
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t a : best_run.second.assignments) ++sizes[a];
        const BicScore bic = bic_score(k, best_run.first.d, sample.size(),
                                       best_run.second.error, sizes);
        if (!have || bic.score > best_score) {
            have = true;
            best_score = bic.score;
            best_k = k;
            best_model = std::move(best_run.first);
        }
    }
    reweight_euclidean(best_model, data);
    return PcadFit{std::move(best_model), best_k};
}

CentroidModel random_reference_model(const std::vector<UniformSeries>& data,
                                     std::size_t s, std::uint64_t seed) {
    if (s < 1 || s > data.size()) {
        throw SampleTooLarge("random_reference_model: s=" + std::to_string(s));
    }
    Rng rng(seed);
    const std::vector<std::size_t> idx =
        sample_without_replacement(data.size(), s, rng);
    CentroidModel model;
    model.k = s;
    model.d = data[0].d();
    model.meta.seed = seed;
    for (std::size_t j : idx) model.centroids.push_back(data[j].values);
    reweight_proportions(model, data);
    return model;
}

double local_precision(const AnomalyRanking& ranking,
                       const std::vector<LabeledSeries>& corpus,
                       std::size_t k) {
    std::unordered_map<std::string, const LabeledSeries*> by_id;
    for (const LabeledSeries& l : corpus) by_id[l.series.id] = &l;

    // Planted count per outlier class.
    std::map<std::string, std::size_t> outlier_count;
    for (const LabeledSeries& l : corpus) {
        if (l.is_outlier) ++outlier_count[l.label];
    }

    const std::vector<AnomalyRanking> clusters = per_cluster(ranking, k);
    std::vector<double> precisions;
    for (const AnomalyRanking& cl : clusters) {
        // Dominant normal class of this cluster.
        std::map<std::string, std::size_t> normal_count;
        for (const RankEntry& e : cl.entries) {
            const LabeledSeries* l = by_id.at(e.id);
            if (!l->is_outlier) ++normal_count[l->label];
        }
        std::string dominant;
        std::size_t best = 0;
        for (const auto& [label, count] : normal_count) {
            if (count > best) {
                best = count;
                dominant = label;
            }
        }
        // Outlier class shadowing that normal class.
        std::string paired;
        for (const LabeledSeries& l : corpus) {
            if (l.is_outlier && l.paired_normal == dominant) {
                paired = l.label;
                break;
            }
        }
        if (paired.empty()) {
            precisions.push_back(0.0);
            continue;
        }
        const std::size_t m = outlier_count[paired];
        std::size_t hits = 0;
        for (std::size_t i = 0; i < std::min(m, cl.entries.size()); ++i) {
            if (by_id.at(cl.entries[i].id)->label == paired) ++hits;
        }
        precisions.push_back(m == 0 ? 0.0
                                    : static_cast<double>(hits) /
                                          static_cast<double>(m));
    }
    return mean_of(precisions);
}

namespace {

struct IterationArtifacts {
    std::vector<LabeledSeries> corpus;
    std::vector<UniformSeries> data;
    std::set<std::string> truth;
    std::size_t planted = 0;
};

void write_ranking_file(const ExperimentConfig& cfg, std::size_t iter,
                        std::size_t size, const AnomalyRanking& r) {
    if (cfg.out_dir.empty()) return;
    const fs::path dir = fs::path(cfg.out_dir) / "rankings";
    fs::create_directories(dir);
    const fs::path p = dir / ("iter" + std::to_string(iter) + "_s" +
                              std::to_string(size) + "_" + r.method + ".csv");
    save_ranking(p, r);
}

}  // namespace

EvalReport run_experiment(const ExperimentConfig& cfg) {
    MixSpec probe = cfg.mix;
    probe.seed = 0;
    validate(probe);
    for (const std::string& m : cfg.methods) {
        if (!kKnownMethods.count(m)) {
            throw ConfigError("unknown method '" + m + "'");
        }
        if (cfg.local && m != "PCAD_LOCAL" && m != "RAND_CC") {
            throw ConfigError("method '" + m +
                              "' does not support local scoring");
        }
    }
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
    }

    EvalReport report;
    // (method, sweep index) -> per-iteration metric values
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> series;
    std::vector<std::size_t> sweep_sizes(cfg.samples.size(), 0);

    for (std::size_t iter = 0; iter < cfg.iterations; ++iter) {
        const std::uint64_t iter_seed = derive_seed(cfg.seed, iter);
        MixSpec mix = cfg.mix;
        mix.seed = derive_seed(iter_seed, 0);
        IterationArtifacts art;
        art.corpus = synth_corpus(mix);
        art.data = strip_labels(art.corpus);
        for (const LabeledSeries& l : art.corpus) {
            if (l.is_outlier) art.truth.insert(l.series.id);
        }
        art.planted = art.truth.size();
        const std::size_t n = art.data.size();
        const std::size_t m_global = cfg.m.value_or(art.planted);

        // Sample-independent methods, once per iteration.
        std::map<std::string, AnomalyRanking> flat;
        std::optional<AnomalyRanking> benchmark;
        if (cfg.mode == ExperimentConfig::Mode::RankChange) {
            benchmark = pn_means(art.data, cfg.top);
        }
        for (const std::string& method : cfg.methods) {
            if (method == "RI_DISCORD") {
                flat[method] = ri_discord(art.data, m_global);
            } else if (method == "PROTOPAPAS_N") {
                flat[method] = protopapas_n(
                    art.data, cfg.mode == ExperimentConfig::Mode::RankChange
                                  ? cfg.top
                                  : m_global);
            } else if (method == "PN_MEANS") {
                flat[method] = pn_means(art.data, m_global);
            }
        }

        for (std::size_t sp = 0; sp < cfg.samples.size(); ++sp) {
            const std::size_t size = cfg.samples[sp].resolve(n);
            sweep_sizes[sp] = size;
            Rng sample_rng(derive_seed(iter_seed, 1 + sp));
            const std::vector<std::size_t> sample_idx =
                sample_without_replacement(n, size, sample_rng);

            std::size_t pcad_k = 0;
            for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
                const std::string& method = cfg.methods[mi];
                const std::uint64_t mseed =
                    derive_seed(iter_seed, 0x100 + sp * 64 + mi);

                AnomalyRanking ranking;
                std::size_t k_used = 0;
                if (method == "PCAD_GLOBAL") {
                    PcadFit fit = fit_pcad(art.data, sample_idx, cfg.k_range,
                                           cfg.restarts, mseed);
                    k_used = fit.k_used;
                    pcad_k = fit.k_used;
                    ranking = pcad_global(
                        art.data, fit.model,
                        cfg.mode == ExperimentConfig::Mode::RankChange
                            ? cfg.top
                            : m_global);
                } else if (method == "PCAD_LOCAL") {
                    std::vector<UniformSeries> sample;
                    for (std::size_t i : sample_idx)
                        sample.push_back(art.data[i]);
                    std::pair<CentroidModel, ClusterState> best_run;
                    bool have = false;
                    for (std::size_t r = 0; r < cfg.restarts; ++r) {
                        auto run = pkmeans(sample, cfg.forced_k,
                                           derive_seed(mseed, r));
                        if (!have ||
                            run.second.error < best_run.second.error) {
                            best_run = std::move(run);
                            have = true;
                        }
                    }
                    reweight_proportions(best_run.first, art.data);
                    k_used = cfg.forced_k;
                    pcad_k = cfg.forced_k;
                    ranking =
                        pcad_local(art.data, best_run.first, m_global);
                } else if (method == "P1_MEAN") {
                    PcadFit fit = fit_pcad(art.data, sample_idx, {1}, 1,
                                           mseed);
                    k_used = 1;
                    ranking = pcad_global(art.data, fit.model, m_global);
                    ranking.method = "P1_MEAN";
                } else if (method == "RAND_CC" || method == "RAND_CC_GAUSS") {
                    std::size_t s;
                    if (cfg.mode == ExperimentConfig::Mode::RankChange) {
                        s = size;  // reference-set size sweeps with the sample
                    } else if (cfg.local) {
                        s = cfg.forced_k;
                    } else {
                        // Tied to the k BIC picked for Pk-means.
                        s = pcad_k > 0 ? pcad_k : cfg.k_range.back();
                    }
                    s = std::min(s, n);
                    if (cfg.local) {
                        CentroidModel ref =
                            random_reference_model(art.data, s, mseed);
                        ranking = pcad_local(art.data, ref, m_global);
                        ranking.method = method;
                        ranking.s = s;
                    } else {
                        ranking = rand_cc(
                            art.data, s, mseed, method == "RAND_CC_GAUSS",
                            cfg.mode == ExperimentConfig::Mode::RankChange
                                ? cfg.top
                                : m_global);
                    }
                    k_used = s;
                } else if (method == "KMEANS_ED" || method == "KMEANS_CC") {
                    PcadFit fit = fit_kmeans(art.data, sample_idx,
                                             cfg.k_range, cfg.restarts,
                                             mseed);
                    k_used = fit.k_used;
                    ranking = kmeans_baseline_from(
                        art.data, fit.model,
                        method == "KMEANS_ED" ? ScoreMetric::Euclidean
                                              : ScoreMetric::CrossCorrelation,
                        m_global);
                } else {
                    ranking = flat.at(method);  // sample-independent
                }

                IterationRecord rec;
                rec.iteration = iter;
                rec.seed = mseed;
                rec.method = method;
                rec.sample_size = size;
                rec.k_used = k_used;
                if (cfg.mode == ExperimentConfig::Mode::Precision) {
                    rec.precision =
                        cfg.local && (method == "PCAD_LOCAL" ||
                                      method == "RAND_CC")
                            ? local_precision(ranking, art.corpus,
                                              ranking.k ? ranking.k
                                                        : cfg.forced_k)
                            : precision_at_m(ranking, art.truth, m_global);
                    series[{method, sp}].push_back(rec.precision);
                } else {
                    const std::vector<std::size_t> changes =
                        rank_change(*benchmark, ranking, cfg.top);
                    rec.mean_rank_change = mean_of(changes);
                    series[{method, sp}].push_back(rec.mean_rank_change);
                }
                report.records.push_back(rec);
                write_ranking_file(cfg, iter, size, ranking);
            }
        }
    }

    for (std::size_t sp = 0; sp < cfg.samples.size(); ++sp) {
        for (const std::string& method : cfg.methods) {
            auto it = series.find({method, sp});
            if (it == series.end()) continue;
            SweepPoint pt;
            pt.method = method;
            pt.sample_size = sweep_sizes[sp];
            pt.sample_fraction =
                static_cast<double>(sweep_sizes[sp]) /
                static_cast<double>(cfg.mix.total_n);
            pt.mean = mean_of(it->second);
            pt.stdev = stdev_of(it->second);
            if (cfg.mode == ExperimentConfig::Mode::Precision) {
                report.precision_points.push_back(pt);
            } else {
                report.rank_change_points.push_back(pt);
            }
        }
    }

    if (!cfg.out_dir.empty()) {
        std::ofstream rep(fs::path(cfg.out_dir) / "report.csv");
        rep << "iteration,seed,method,sample_size,k_used,precision,"
               "mean_rank_change\n";
        for (const IterationRecord& r : report.records) {
            rep << r.iteration << ',' << r.seed << ',' << r.method << ','
                << r.sample_size << ',' << r.k_used << ',';
            if (r.precision >= 0.0) rep << format_double(r.precision);
            rep << ',';
            if (r.mean_rank_change >= 0.0) {
                rep << format_double(r.mean_rank_change);
            }
            rep << '\n';
        }
        if (!report.precision_points.empty()) {
            std::ofstream plot(fs::path(cfg.out_dir) / "plot_precision.csv");
            plot << "method,sample_fraction,mean_precision,stdev\n";
            for (const SweepPoint& p : report.precision_points) {
                plot << p.method << ',' << format_double(p.sample_fraction)
                     << ',' << format_double(p.mean) << ','
                     << format_double(p.stdev) << '\n';
            }
        }
        if (!report.rank_change_points.empty()) {
            std::ofstream plot(fs::path(cfg.out_dir) /
                               "plot_rankchange.csv");
            plot << "method,sample_size,mean_rank_change,stdev\n";
            for (const SweepPoint& p : report.rank_change_points) {
                plot << p.method << ',' << p.sample_size << ','
                     << format_double(p.mean) << ',' << format_double(p.stdev)
                     << '\n';
            }
        }
    }
    return report;
}

}  // namespace pcad
