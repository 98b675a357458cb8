// Command-line driver: corpus ingestion, synthetic mixes, clustering,
// anomaly scoring, benchmark experiments, and ranking comparison.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "pcad/anomaly.hpp"
#include "pcad/clustering.hpp"
#include "pcad/errors.hpp"
#include "pcad/eval.hpp"
#include "pcad/experiment.hpp"
#include "pcad/io.hpp"
#include "pcad/preprocess.hpp"
#include "pcad/rng.hpp"
#include "pcad/synth.hpp"

namespace fs = std::filesystem;
using namespace pcad;

namespace {

std::vector<std::size_t> parse_k_range(const std::string& spec) {
    const std::size_t dots = spec.find("..");
    if (dots == std::string::npos) {
        throw ConfigError("--k-range: expected 'a..b', got '" + spec + "'");
    }
    const std::size_t a = std::stoull(spec.substr(0, dots));
    const std::size_t b = std::stoull(spec.substr(dots + 2));
    if (a < 1 || b < a) {
        throw ConfigError("--k-range: bad range '" + spec + "'");
    }
    std::vector<std::size_t> ks;
    for (std::size_t k = a; k <= b; ++k) ks.push_back(k);
    return ks;
}

int cmd_ingest(const std::string& manifest, const std::string& out,
               const PreprocessConfig& cfg, bool no_despike, bool no_smooth) {
    PipelineOptions opts;
    opts.despike = !no_despike;
    opts.smooth = !no_smooth;
    const std::vector<UniformSeries> corpus = ingest(manifest, cfg, opts);
    fs::create_directories(out);
    for (const UniformSeries& x : corpus) {
        save_uniform(fs::path(out) / (x.id + ".csv"), x);
    }
    std::cout << "ingested " << corpus.size() << " series -> " << out << "\n";
    return 0;
}

int cmd_synth(const std::string& classes, const std::string& outliers,
              std::size_t n, std::size_t d, std::uint64_t seed,
              const std::string& out) {
    std::string text = "classes = " + classes + "\ntotal_n = " +
                       std::to_string(n) + "\nd = " + std::to_string(d) +
                       "\nseed = " + std::to_string(seed) + "\n";
    if (!outliers.empty()) text += "outliers = " + outliers + "\n";
    ExperimentConfig cfg =
        parse_experiment_config(parse_kv_text(text, "synth"));
    MixSpec mix = cfg.mix;
    mix.seed = seed;
    const std::vector<LabeledSeries> corpus = synth_corpus(mix);
    fs::create_directories(out);
    for (const LabeledSeries& l : corpus) {
        save_uniform(fs::path(out) / (l.series.id + ".csv"), l.series);
    }
    save_labels(fs::path(out) / "truth.csv", corpus);
    std::cout << "wrote " << corpus.size() << " series -> " << out << "\n";
    return 0;
}

int cmd_cluster(const std::string& corpus_dir, std::size_t k,
                const std::string& k_range, std::uint64_t seed,
                std::size_t restarts, const std::string& sample,
                const std::string& out, bool no_renormalize) {
    const std::vector<UniformSeries> data = load_uniform_dir(corpus_dir);
    if (data.empty()) {
        throw EmptyInput("cluster: no series in '" + corpus_dir + "'");
    }

    std::vector<UniformSeries> fit_data = data;
    if (!sample.empty()) {
        SampleSpec spec;
        if (sample.back() == '%') {
            spec.is_fraction = true;
            spec.value = std::stod(sample.substr(0, sample.size() - 1));
        } else {
            spec.is_fraction = false;
            spec.value = std::stod(sample);
        }
        const std::size_t size = spec.resolve(data.size());
        Rng rng(derive_seed(seed, 1));
        fit_data.clear();
        for (std::size_t i :
             sample_without_replacement(data.size(), size, rng)) {
            fit_data.push_back(data[i]);
        }
    }

    ClusterOptions opts;
    opts.renormalize = !no_renormalize;
    CentroidModel model;
    if (!k_range.empty()) {
        SelectKResult sel =
            select_k(fit_data, parse_k_range(k_range), seed, restarts, opts);
        model = std::move(sel.model);
        std::cout << "BIC selected k=" << sel.best_k << "\n";
        for (const RestartRecord& r : sel.restarts) {
            std::cout << "  k=" << r.k << " restart=" << r.restart
                      << " error=" << r.error << " bic=" << r.bic.score
                      << "\n";
        }
    } else {
        std::pair<CentroidModel, ClusterState> best;
        bool have = false;
        for (std::size_t r = 0; r < restarts; ++r) {
            auto run = pkmeans(fit_data, k, derive_seed(seed, r), opts);
            if (!have || run.second.error < best.second.error) {
                best = std::move(run);
                have = true;
            }
        }
        model = std::move(best.first);
    }
    reweight_proportions(model, data);
    save_model(out, model, data.size());
    std::cout << "wrote model (k=" << model.k << ", iterations="
              << model.meta.iterations << ", error="
              << model.meta.final_error << ") -> " << out << "\n";
    return 0;
}

int cmd_score(const std::string& corpus_dir, const std::string& method,
              const std::string& model_path, std::size_t m_arg,
              std::uint64_t seed, std::size_t s, std::size_t k,
              bool literal_min, const std::string& out) {
    const std::vector<UniformSeries> data = load_uniform_dir(corpus_dir);
    if (data.empty()) {
        throw EmptyInput("score: no series in '" + corpus_dir + "'");
    }
    const std::size_t m = m_arg == 0 ? data.size() : m_arg;

    AnomalyRanking ranking;
    if (method == "PCAD_GLOBAL" || method == "PCAD_LOCAL" ||
        method == "KMEANS_ED" || method == "KMEANS_CC") {
        if (model_path.empty()) {
            throw ConfigError("method '" + method + "' needs --model");
        }
        const CentroidModel model = load_model(model_path);
        if (method == "PCAD_GLOBAL") {
            ranking = pcad_global(data, model, m);
        } else if (method == "PCAD_LOCAL") {
            ranking = pcad_local(data, model, m, literal_min);
        } else {
            ranking = kmeans_baseline_from(
                data, model,
                method == "KMEANS_ED" ? ScoreMetric::Euclidean
                                      : ScoreMetric::CrossCorrelation,
                m);
        }
    } else if (method == "PN_MEANS") {
        ranking = pn_means(data, m);
    } else if (method == "PROTOPAPAS_N") {
        ranking = protopapas_n(data, m);
    } else if (method == "RAND_CC" || method == "RAND_CC_GAUSS") {
        const std::size_t refs = s > 0 ? s : (k > 0 ? k : 1);
        ranking = rand_cc(data, refs, seed, method == "RAND_CC_GAUSS", m);
    } else if (method == "P1_MEAN") {
        ranking = p1_mean(data, seed, m);
    } else if (method == "RI_DISCORD") {
        ranking = ri_discord(data, m);
    } else {
        throw ConfigError("unknown method '" + method + "'");
    }
    save_ranking(out, ranking);
    std::cout << "wrote ranking (" << ranking.entries.size()
              << " series) -> " << out << "\n";
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out) {
    ExperimentConfig cfg =
        parse_experiment_config(parse_kv_file(config_path));
    if (!out.empty()) cfg.out_dir = out;
    const EvalReport report = run_experiment(cfg);
    for (const SweepPoint& p : report.precision_points) {
        std::cout << p.method << " s=" << p.sample_size << " precision "
                  << p.mean << " +- " << p.stdev << "\n";
    }
    for (const SweepPoint& p : report.rank_change_points) {
        std::cout << p.method << " s=" << p.sample_size << " rank-change "
                  << p.mean << " +- " << p.stdev << "\n";
    }
    return 0;
}

int cmd_rankdiff(const std::string& benchmark_path,
                 const std::string& candidate_path, std::size_t m,
                 const std::string& out) {
    const AnomalyRanking bench = load_ranking(benchmark_path);
    const AnomalyRanking cand = load_ranking(candidate_path);
    const std::size_t mm = m == 0 ? bench.m : m;
    const std::vector<std::size_t> changes = rank_change(bench, cand, mm);
    std::cout << "rank changes:";
    for (std::size_t c : changes) std::cout << ' ' << c;
    std::cout << "\nmean " << mean_of(changes) << "\n";
    if (!out.empty()) {
        std::ofstream f(out);
        f << "benchmark_rank,id,rank_change\n";
        for (std::size_t i = 0; i < changes.size(); ++i) {
            f << (i + 1) << ',' << bench.entries[i].id << ',' << changes[i]
              << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anomaly detection for unsynchronized periodic time series"};
    app.require_subcommand(1);

    // ingest
    auto* ingest_cmd = app.add_subcommand(
        "ingest", "Fold, clean, resample, and normalize raw light-curves");
    std::string manifest, out_dir;
    PreprocessConfig pre;
    bool no_despike = false, no_smooth = false;
    ingest_cmd->add_option("--manifest", manifest, "id,path,period,epoch CSV")
        ->required();
    ingest_cmd->add_option("--out", out_dir, "output directory")->required();
    ingest_cmd->add_option("--d", pre.d, "resample length (power of two)");
    ingest_cmd->add_option("--spike-window", pre.spike_window);
    ingest_cmd->add_option("--spike-k", pre.spike_k);
    ingest_cmd->add_option("--smooth-window", pre.smooth_window);
    ingest_cmd->add_flag("--no-despike", no_despike);
    ingest_cmd->add_flag("--no-smooth", no_smooth);

    // synth
    auto* synth_cmd =
        app.add_subcommand("synth", "Generate a labeled synthetic corpus");
    std::string classes, outliers;
    std::size_t synth_n = 400, synth_d = 256;
    std::uint64_t seed = 0;
    synth_cmd
        ->add_option("--classes", classes,
                     "normal classes, shape:frac[:sigma[:variant]]")
        ->required();
    synth_cmd->add_option(
        "--outliers", outliers,
        "outlier classes, shape:frac[:sigma[:variant[:paired]]]");
    synth_cmd->add_option("--n", synth_n, "corpus size");
    synth_cmd->add_option("--d", synth_d, "series length");
    synth_cmd->add_option("--seed", seed);
    synth_cmd->add_option("--out", out_dir, "output directory")->required();

    // cluster
    auto* cluster_cmd = app.add_subcommand(
        "cluster", "Run phase-adjusting k-means, write a centroid model");
    std::string corpus_dir, k_range_str, sample_str, model_out;
    std::size_t k = 3, restarts = 5;
    bool no_renormalize = false;
    cluster_cmd->add_option("--corpus", corpus_dir, "directory of series")
        ->required();
    cluster_cmd->add_option("--k", k, "cluster count");
    cluster_cmd->add_option("--k-range", k_range_str,
                            "a..b, selected by BIC");
    cluster_cmd->add_option("--seed", seed);
    cluster_cmd->add_option("--restarts", restarts);
    cluster_cmd->add_option("--sample", sample_str,
                            "subsample size (count or percent)");
    cluster_cmd->add_flag("--no-renormalize", no_renormalize,
                          "keep raw averaged centroids");
    cluster_cmd->add_option("--out", model_out, "model file")->required();

    // score
    auto* score_cmd =
        app.add_subcommand("score", "Score a corpus and write a ranking");
    std::string method, model_path, ranking_out;
    std::size_t m = 0, s = 0, score_k = 0;
    bool literal_min = false;
    score_cmd->add_option("--corpus", corpus_dir)->required();
    score_cmd->add_option("--method", method)->required();
    score_cmd->add_option("--model", model_path, "centroid model file");
    score_cmd->add_option("--m", m, "cutoff (default: all)");
    score_cmd->add_option("--seed", seed);
    score_cmd->add_option("--s", s, "reference-set size for RAND_CC");
    score_cmd->add_option("--k", score_k);
    score_cmd->add_flag("--local-literal-min", literal_min,
                        "local score as the minimum correlation");
    score_cmd->add_option("--out", ranking_out)->required();

    // bench
    auto* bench_cmd = app.add_subcommand(
        "bench", "Run a configured experiment end to end");
    std::string config_path, bench_out;
    bench_cmd->add_option("--config", config_path, "key = value file")
        ->required();
    bench_cmd->add_option("--out", bench_out, "output directory");

    // rankdiff
    auto* diff_cmd = app.add_subcommand(
        "rankdiff", "Rank change between two ranking files");
    std::string bench_path, cand_path, diff_out;
    std::size_t diff_m = 0;
    diff_cmd->add_option("--benchmark", bench_path)->required();
    diff_cmd->add_option("--candidate", cand_path)->required();
    diff_cmd->add_option("--m", diff_m, "cutoff (default: benchmark m)");
    diff_cmd->add_option("--out", diff_out, "per-id CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (ingest_cmd->parsed()) {
            return cmd_ingest(manifest, out_dir, pre, no_despike, no_smooth);
        }
        if (synth_cmd->parsed()) {
            return cmd_synth(classes, outliers, synth_n, synth_d, seed,
                             out_dir);
        }
        if (cluster_cmd->parsed()) {
            return cmd_cluster(corpus_dir, k, k_range_str, seed, restarts,
                               sample_str, model_out, no_renormalize);
        }
        if (score_cmd->parsed()) {
            return cmd_score(corpus_dir, method, model_path, m, seed, s,
                             score_k, literal_min, ranking_out);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(config_path, bench_out);
        }
        if (diff_cmd->parsed()) {
            return cmd_rankdiff(bench_path, cand_path, diff_m, diff_out);
        }
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
