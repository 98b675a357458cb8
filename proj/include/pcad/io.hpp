#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcad/anomaly.hpp"
#include "pcad/clustering.hpp"
#include "pcad/preprocess.hpp"
#include "pcad/series.hpp"
#include "pcad/synth.hpp"

namespace pcad {

// Raw light-curve file: `time,magnitude[,error]` per line, '#' comments.
// The id is the file stem.
RawSeries load_raw_series(const std::filesystem::path& path);
void save_raw_series(const std::filesystem::path& path, const RawSeries& raw);

struct ManifestRow {
    std::string id;
    std::filesystem::path path;  // resolved against the manifest directory
    std::optional<double> period;
    double epoch = 0.0;
};
std::vector<ManifestRow> load_manifest(const std::filesystem::path& path);

// Full pipeline over a manifest: fold, despike, smooth, resample, normalize.
// Output order follows the manifest.
std::vector<UniformSeries> ingest(const std::filesystem::path& manifest_path,
                                  const PreprocessConfig& cfg,
                                  const PipelineOptions& opts = {});

// UniformSeries file: `# id=<id> d=<d>` then d values, one per line.
void save_uniform(const std::filesystem::path& path, const UniformSeries& x);
UniformSeries load_uniform(const std::filesystem::path& path);

// Directory of UniformSeries files, loaded in lexicographic path order.
std::vector<UniformSeries> load_uniform_dir(
    const std::filesystem::path& dir);

// Centroid model: `# k=<k> d=<d> n=<n> seed=<seed>` then per centroid
// `c<j>,<proportion>,<v0>,...`.
void save_model(const std::filesystem::path& path, const CentroidModel& model,
                std::size_t n);
CentroidModel load_model(const std::filesystem::path& path);

// Ranking: `# method=<name> m=<m> seed=<seed> k=<k> s=<s>` then
// `rank,id,score,best_cluster,best_shift` ascending by rank.
void save_ranking(const std::filesystem::path& path,
                  const AnomalyRanking& ranking);
AnomalyRanking load_ranking(const std::filesystem::path& path);

// Planted-label sidecar for synthetic corpora.
void save_labels(const std::filesystem::path& path,
                 const std::vector<LabeledSeries>& corpus);
struct LabelRow {
    std::string id;
    std::string label;
    bool is_outlier = false;
    std::string paired_normal;
};
std::vector<LabelRow> load_labels(const std::filesystem::path& path);

// `key = value` config lines, '#' comments, unknown keys rejected by the
// consumer. Duplicate keys keep the last value.
std::vector<std::pair<std::string, std::string>> parse_kv_file(
    const std::filesystem::path& path);
std::vector<std::pair<std::string, std::string>> parse_kv_text(
    const std::string& text, const std::string& origin);

std::string format_double(double v);  // round-trip-exact decimal

}  // namespace pcad
