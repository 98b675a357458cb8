#include "pcad/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pcad/errors.hpp"

namespace pcad {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

double parse_double(const std::string& s, const std::string& where,
                    std::size_t lineno) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw ParseError(where + ":" + std::to_string(lineno) +
                         ": bad number '" + s + "'");
    }
    return v;
}

long long parse_int(const std::string& s, const std::string& where,
                    std::size_t lineno) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') {
        throw ParseError(where + ":" + std::to_string(lineno) +
                         ": bad integer '" + s + "'");
    }
    return v;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

// `# key=value key=value ...` header line.
std::vector<std::pair<std::string, std::string>> parse_header(
    const std::string& line, const std::string& where) {
    if (line.empty() || line[0] != '#') {
        throw ParseError(where + ":1: expected '#' header line");
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream iss(line.substr(1));
    std::string token;
    while (iss >> token) {
        const std::size_t eq = token.find('=');
        if (eq == std::string::npos) {
            throw ParseError(where + ":1: bad header token '" + token + "'");
        }
        out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
    return out;
}

std::string header_value(
    const std::vector<std::pair<std::string, std::string>>& header,
    const std::string& key, const std::string& where) {
    for (const auto& [k, v] : header) {
        if (k == key) return v;
    }
    throw ParseError(where + ":1: header missing '" + key + "'");
}

}  // namespace

RawSeries load_raw_series(const fs::path& path) {
    std::ifstream in = open_in(path);
    RawSeries raw;
    raw.id = path.stem().string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> cols = split(t, ',');
        if (cols.size() < 2 || cols.size() > 3) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected time,magnitude[,error]");
        }
        RawSample s;
        s.t = parse_double(cols[0], path.string(), lineno);
        s.mag = parse_double(cols[1], path.string(), lineno);
        if (cols.size() == 3 && !cols[2].empty()) {
            s.err = parse_double(cols[2], path.string(), lineno);
        }
        raw.samples.push_back(s);
    }
    validate(raw);
    return raw;
}

void save_raw_series(const fs::path& path, const RawSeries& raw) {
    std::ofstream out = open_out(path);
    out << "# time,magnitude[,error]\n";
    for (const RawSample& s : raw.samples) {
        out << format_double(s.t) << ',' << format_double(s.mag);
        if (s.err) out << ',' << format_double(*s.err);
        out << '\n';
    }
}

std::vector<ManifestRow> load_manifest(const fs::path& path) {
    std::ifstream in = open_in(path);
    const fs::path base = path.parent_path();
    std::vector<ManifestRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> cols = split(t, ',');
        if (cols.size() < 3 || cols.size() > 4) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected id,path,period[,epoch]");
        }
        ManifestRow row;
        row.id = cols[0];
        fs::path p = cols[1];
        row.path = p.is_absolute() ? p : base / p;
        if (!cols[2].empty()) {
            row.period = parse_double(cols[2], path.string(), lineno);
        }
        if (cols.size() == 4 && !cols[3].empty()) {
            row.epoch = parse_double(cols[3], path.string(), lineno);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<UniformSeries> ingest(const fs::path& manifest_path,
                                  const PreprocessConfig& cfg,
                                  const PipelineOptions& opts) {
    const std::vector<ManifestRow> rows = load_manifest(manifest_path);
    std::vector<UniformSeries> out;
    out.reserve(rows.size());
    for (const ManifestRow& row : rows) {
        if (!row.period || !(*row.period > 0.0)) {
            throw MissingPeriod("ingest: series '" + row.id +
                                "' has no usable period");
        }
        RawSeries raw = load_raw_series(row.path);
        raw.id = row.id;
        raw.period = row.period;
        raw.epoch = row.epoch;
        out.push_back(preprocess(raw, cfg, opts));
    }
    return out;
}

void save_uniform(const fs::path& path, const UniformSeries& x) {
    std::ofstream out = open_out(path);
    out << "# id=" << x.id << " d=" << x.d() << '\n';
    for (double v : x.values) {
        out << format_double(v) << '\n';
    }
}

UniformSeries load_uniform(const fs::path& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path.string() + ": empty file");
    }
    const auto header = parse_header(line, path.string());
    UniformSeries x;
    x.id = header_value(header, "id", path.string());
    const long long d = parse_int(header_value(header, "d", path.string()),
                                  path.string(), 1);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        x.values.push_back(parse_double(t, path.string(), lineno));
    }
    if (static_cast<long long>(x.values.size()) != d) {
        throw ParseError(path.string() + ": expected " + std::to_string(d) +
                         " values, found " + std::to_string(x.values.size()));
    }
    return x;
}

std::vector<UniformSeries> load_uniform_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError("'" + dir.string() + "' is not a directory");
    }
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end());
    std::vector<UniformSeries> out;
    out.reserve(paths.size());
    for (const fs::path& p : paths) {
        if (p.filename() == "truth.csv") continue;
        out.push_back(load_uniform(p));
    }
    return out;
}

void save_model(const fs::path& path, const CentroidModel& model,
                std::size_t n) {
    std::ofstream out = open_out(path);
    out << "# k=" << model.k << " d=" << model.d << " n=" << n
        << " seed=" << model.meta.seed << '\n';
    for (std::size_t j = 0; j < model.k; ++j) {
        out << 'c' << j << ',' << format_double(model.proportions[j]);
        for (double v : model.centroids[j]) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

CentroidModel load_model(const fs::path& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path.string() + ": empty file");
    }
    const auto header = parse_header(line, path.string());
    CentroidModel model;
    model.k = static_cast<std::size_t>(parse_int(
        header_value(header, "k", path.string()), path.string(), 1));
    model.d = static_cast<std::size_t>(parse_int(
        header_value(header, "d", path.string()), path.string(), 1));
    model.meta.seed = static_cast<std::uint64_t>(parse_int(
        header_value(header, "seed", path.string()), path.string(), 1));
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> cols = split(t, ',');
        if (cols.size() != model.d + 2) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected " + std::to_string(model.d + 2) +
                             " fields");
        }
        model.proportions.push_back(
            parse_double(cols[1], path.string(), lineno));
        std::vector<double> centroid(model.d);
        for (std::size_t t2 = 0; t2 < model.d; ++t2) {
            centroid[t2] = parse_double(cols[t2 + 2], path.string(), lineno);
        }
        model.centroids.push_back(std::move(centroid));
    }
    if (model.centroids.size() != model.k) {
        throw ParseError(path.string() + ": expected " +
                         std::to_string(model.k) + " centroids, found " +
                         std::to_string(model.centroids.size()));
    }
    return model;
}

void save_ranking(const fs::path& path, const AnomalyRanking& ranking) {
    std::ofstream out = open_out(path);
    out << "# method=" << ranking.method << " m=" << ranking.m
        << " seed=" << ranking.seed << " k=" << ranking.k
        << " s=" << ranking.s << '\n';
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        const RankEntry& e = ranking.entries[i];
        out << (i + 1) << ',' << e.id << ',' << format_double(e.score) << ','
            << e.best_cluster << ',' << e.best_shift << '\n';
    }
}

AnomalyRanking load_ranking(const fs::path& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path.string() + ": empty file");
    }
    const auto header = parse_header(line, path.string());
    AnomalyRanking r;
    r.method = header_value(header, "method", path.string());
    r.m = static_cast<std::size_t>(parse_int(
        header_value(header, "m", path.string()), path.string(), 1));
    r.seed = static_cast<std::uint64_t>(parse_int(
        header_value(header, "seed", path.string()), path.string(), 1));
    r.k = static_cast<std::size_t>(parse_int(
        header_value(header, "k", path.string()), path.string(), 1));
    r.s = static_cast<std::size_t>(parse_int(
        header_value(header, "s", path.string()), path.string(), 1));
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> cols = split(t, ',');
        if (cols.size() != 5) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected rank,id,score,best_cluster,best_shift");
        }
        RankEntry e;
        e.id = cols[1];
        e.score = parse_double(cols[2], path.string(), lineno);
        e.best_cluster = parse_int(cols[3], path.string(), lineno);
        e.best_shift = static_cast<std::size_t>(
            parse_int(cols[4], path.string(), lineno));
        r.entries.push_back(std::move(e));
    }
    return r;
}

void save_labels(const fs::path& path,
                 const std::vector<LabeledSeries>& corpus) {
    std::ofstream out = open_out(path);
    out << "# id,label,is_outlier,paired_normal\n";
    for (const LabeledSeries& l : corpus) {
        out << l.series.id << ',' << l.label << ','
            << (l.is_outlier ? 1 : 0) << ',' << l.paired_normal << '\n';
    }
}

std::vector<LabelRow> load_labels(const fs::path& path) {
    std::ifstream in = open_in(path);
    std::vector<LabelRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> cols = split(t, ',');
        if (cols.size() != 4) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected id,label,is_outlier,paired_normal");
        }
        rows.push_back(LabelRow{cols[0], cols[1], cols[2] == "1", cols[3]});
    }
    return rows;
}

std::vector<std::pair<std::string, std::string>> parse_kv_text(
    const std::string& text, const std::string& origin) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream iss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(iss, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": empty key");
        }
        bool replaced = false;
        for (auto& kv : out) {
            if (kv.first == key) {
                kv.second = value;
                replaced = true;
                break;
            }
        }
        if (!replaced) out.emplace_back(key, value);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_kv_file(
    const fs::path& path) {
    std::ifstream in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_kv_text(ss.str(), path.string());
}

}  // namespace pcad
