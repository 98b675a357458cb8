#include "pcad/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcad/rng.hpp"
#include "pcad/xcorr.hpp"

namespace pcad {

void validate(const RawSeries& raw) {
    if (raw.samples.empty()) {
        throw EmptySeries("series '" + raw.id + "' has no samples");
    }
    for (std::size_t i = 1; i < raw.samples.size(); ++i) {
        if (!(raw.samples[i - 1].t < raw.samples[i].t)) {
            throw ParseError("series '" + raw.id +
                             "': sample times not strictly increasing at index " +
                             std::to_string(i));
        }
    }
    if (raw.period && !(*raw.period > 0.0)) {
        throw NonPositivePeriod("series '" + raw.id + "': period must be > 0");
    }
}

void validate(const UniformSeries& x) {
    const std::size_t d = x.values.size();
    if (!is_power_of_two(d)) {
        throw NonPowerOfTwoLength("series '" + x.id + "': length " +
                                  std::to_string(d) + " is not a power of two");
    }
    double sum = 0.0, sumsq = 0.0;
    for (double v : x.values) {
        if (!std::isfinite(v)) {
            throw NumericError("series '" + x.id + "': non-finite value");
        }
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(d);
    if (std::abs(mean) > 1e-9 || std::abs(sumsq - 1.0) > 1e-9) {
        throw NumericError("series '" + x.id +
                           "': not normalized (mean=" + std::to_string(mean) +
                           ", sumsq=" + std::to_string(sumsq) + ")");
    }
}

void validate(const PreprocessConfig& cfg) {
    if (!is_power_of_two(cfg.d) || cfg.d < 16) {
        throw ConfigError("d must be a power of two >= 16");
    }
    if (cfg.spike_window < 3 || cfg.spike_window % 2 == 0) {
        throw ConfigError("spike_window must be odd and >= 3");
    }
    if (cfg.smooth_window < 3 || cfg.smooth_window % 2 == 0) {
        throw ConfigError("smooth_window must be odd and >= 3");
    }
    if (!(cfg.spike_k > 0.0)) {
        throw ConfigError("spike_k must be > 0");
    }
}

std::vector<FoldedSample> fold(const RawSeries& raw, double period,
                               double epoch) {
    if (!(period > 0.0)) {
        throw NonPositivePeriod("fold: period must be > 0, got " +
                                std::to_string(period));
    }
    if (raw.samples.empty()) {
        throw EmptySeries("fold: series '" + raw.id + "' is empty");
    }
    std::vector<FoldedSample> out;
    out.reserve(raw.samples.size());
    for (const RawSample& s : raw.samples) {
        const double f = (s.t - epoch) / period;
        double phase = f - std::floor(f);
        if (phase >= 1.0) phase = 0.0;  // rounding at the wrap
        out.push_back({phase, s.mag});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const FoldedSample& a, const FoldedSample& b) {
                         return a.phase < b.phase;
                     });
    return out;
}

namespace {

double median_of(std::vector<double>& buf) {
    const std::size_t mid = buf.size() / 2;
    std::nth_element(buf.begin(), buf.begin() + mid, buf.end());
    return buf[mid];
}

}  // namespace

std::vector<bool> despike_mask(const std::vector<double>& values,
                               const PreprocessConfig& cfg) {
    const std::size_t n = values.size();
    const std::size_t w = cfg.spike_window;
    if (n < w) {
        throw TooFewSamples("despike: need at least " + std::to_string(w) +
                            " samples, got " + std::to_string(n));
    }
    const std::size_t half = w / 2;
    std::vector<bool> keep(n, true);
    std::vector<double> window(w), dev(w);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            window[j] = values[(i + n - half + j) % n];
        }
        dev = window;
        const double med = median_of(dev);
        for (std::size_t j = 0; j < w; ++j) {
            dev[j] = std::abs(window[j] - med);
        }
        const double mad = median_of(dev);
        const double threshold = cfg.spike_k * (1.4826 * mad);
        keep[i] = !(std::abs(values[i] - med) > threshold);
        if (keep[i]) ++kept;
    }
    if (2 * kept < n) {
        throw OverAggressiveRemoval(
            "despike: only " + std::to_string(kept) + " of " +
            std::to_string(n) + " samples survive; config unsuitable");
    }
    return keep;
}

std::vector<double> despike(const std::vector<double>& values,
                            const PreprocessConfig& cfg) {
    const std::vector<bool> keep = despike_mask(values, cfg);
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (keep[i]) out.push_back(values[i]);
    }
    return out;
}

std::vector<FoldedSample> despike(const std::vector<FoldedSample>& samples,
                                  const PreprocessConfig& cfg) {
    std::vector<double> mags(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) mags[i] = samples[i].mag;
    const std::vector<bool> keep = despike_mask(mags, cfg);
    std::vector<FoldedSample> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (keep[i]) out.push_back(samples[i]);
    }
    return out;
}

std::vector<double> smooth(const std::vector<double>& values,
                           std::size_t window) {
    const std::size_t n = values.size();
    if (n < window) {
        throw TooFewSamples("smooth: need at least " + std::to_string(window) +
                            " samples, got " + std::to_string(n));
    }
    const std::size_t half = window / 2;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < window; ++j) {
            acc += values[(i + n - half + j) % n];
        }
        out[i] = acc / static_cast<double>(window);
    }
    return out;
}

std::vector<FoldedSample> smooth(const std::vector<FoldedSample>& samples,
                                 std::size_t window) {
    std::vector<double> mags(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) mags[i] = samples[i].mag;
    mags = smooth(mags, window);
    std::vector<FoldedSample> out = samples;
    for (std::size_t i = 0; i < out.size(); ++i) out[i].mag = mags[i];
    return out;
}

std::vector<double> resample(const std::vector<FoldedSample>& folded,
                             std::size_t d) {
    // Collapse duplicate phases; interpolation needs distinct knots.
    std::vector<FoldedSample> knots;
    knots.reserve(folded.size());
    for (std::size_t i = 0; i < folded.size();) {
        std::size_t j = i;
        double acc = 0.0;
        while (j < folded.size() && folded[j].phase == folded[i].phase) {
            acc += folded[j].mag;
            ++j;
        }
        knots.push_back({folded[i].phase, acc / static_cast<double>(j - i)});
        i = j;
    }
    if (knots.size() < 2) {
        throw DegenerateSeries("resample: need >= 2 distinct phases, got " +
                               std::to_string(knots.size()));
    }

    std::vector<double> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double g = static_cast<double>(j) / static_cast<double>(d);
        double x, pa, pb, va, vb;
        if (g < knots.front().phase || g >= knots.back().phase) {
            // Interval crossing the 1 -> 0 wrap.
            pa = knots.back().phase;
            va = knots.back().mag;
            pb = knots.front().phase + 1.0;
            vb = knots.front().mag;
            x = (g < knots.front().phase) ? g + 1.0 : g;
        } else {
            // front.phase <= g < back.phase, so 1 <= hi <= m-1
            auto it = std::upper_bound(
                knots.begin(), knots.end(), g,
                [](double v, const FoldedSample& s) { return v < s.phase; });
            const std::size_t hi = static_cast<std::size_t>(it - knots.begin());
            const std::size_t lo = hi - 1;
            pa = knots[lo].phase;
            va = knots[lo].mag;
            pb = knots[hi].phase;
            vb = knots[hi].mag;
            x = g;
        }
        if (x == pa) {
            out[j] = va;  // exact knot: copy, no arithmetic
        } else {
            out[j] = va + (vb - va) * (x - pa) / (pb - pa);
        }
    }
    return out;
}

std::vector<double> normalize(const std::vector<double>& values) {
    const std::size_t d = values.size();
    if (d == 0) {
        throw EmptySeries("normalize: empty input");
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(d);
    double ss = 0.0;
    for (double v : values) {
        const double c = v - mean;
        ss += c * c;
    }
    const double sd = std::sqrt(ss / static_cast<double>(d));
    if (sd == 0.0) {
        throw ZeroVariance("normalize: all values equal");
    }
    const double scale = 1.0 / (sd * std::sqrt(static_cast<double>(d)));
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) {
        out[i] = (values[i] - mean) * scale;
    }
    return out;
}

namespace {

// 1-D 2-means over the top-decile values, centers seeded at the min and max.
// Returns flags marking membership of the higher-mean group.
std::vector<bool> split_high_group(const std::vector<double>& vals) {
    std::vector<bool> high(vals.size(), true);
    double lo = *std::min_element(vals.begin(), vals.end());
    double hi = *std::max_element(vals.begin(), vals.end());
    if (lo == hi) return high;  // single cluster, all high

    bool first = true;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        double slo = 0.0, shi = 0.0;
        std::size_t nlo = 0, nhi = 0;
        std::vector<bool> next(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            next[i] = vals[i] >= mid;  // midpoint tie goes to the high group
            if (next[i]) {
                shi += vals[i];
                ++nhi;
            } else {
                slo += vals[i];
                ++nlo;
            }
        }
        if (nlo == 0 || nhi == 0) {
            high = next;
            break;
        }
        if (!first && next == high) break;
        high = next;
        first = false;
        lo = slo / static_cast<double>(nlo);
        hi = shi / static_cast<double>(nhi);
    }
    return high;
}

}  // namespace

UniformSeries universal_phase(const UniformSeries& x) {
    const std::size_t d = x.d();
    const std::size_t n_top = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(d))));

    std::vector<std::size_t> order(d);
    for (std::size_t i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x.values[a] != x.values[b]) return x.values[a] > x.values[b];
        return a < b;
    });
    order.resize(n_top);

    std::vector<double> vals(n_top);
    for (std::size_t i = 0; i < n_top; ++i) vals[i] = x.values[order[i]];
    const std::vector<bool> high = split_high_group(vals);

    // Circular mean of the high group's time indices.
    double sx = 0.0, sy = 0.0;
    std::size_t fallback = d;
    for (std::size_t i = 0; i < n_top; ++i) {
        if (!high[i]) continue;
        const double ang = 2.0 * std::numbers::pi *
                           static_cast<double>(order[i]) /
                           static_cast<double>(d);
        sx += std::cos(ang);
        sy += std::sin(ang);
        fallback = std::min(fallback, order[i]);
    }
    std::size_t peak;
    if (std::hypot(sx, sy) < 1e-12) {
        peak = fallback;  // antipodal cancellation: fall back to lowest index
    } else {
        double idx = std::atan2(sy, sx) / (2.0 * std::numbers::pi) *
                     static_cast<double>(d);
        long long r = std::llround(idx);
        r %= static_cast<long long>(d);
        if (r < 0) r += static_cast<long long>(d);
        peak = static_cast<std::size_t>(r);
    }

    const std::size_t target = static_cast<std::size_t>(
        std::llround(0.25 * static_cast<double>(d)));
    const std::size_t shift = (target + d - peak) % d;
    return rotate(x, shift);
}

UniformSeries random_phase(const UniformSeries& x, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t shift = rng.below(x.d());
    return rotate(x, shift);
}

UniformSeries preprocess(const RawSeries& raw, const PreprocessConfig& cfg,
                         const PipelineOptions& opts) {
    validate(cfg);
    if (!raw.period) {
        throw MissingPeriod("series '" + raw.id + "': no period");
    }
    std::vector<FoldedSample> folded = fold(raw, *raw.period, raw.epoch);
    if (opts.despike) folded = despike(folded, cfg);
    if (opts.smooth) folded = smooth(folded, cfg.smooth_window);
    const std::vector<double> values = resample(folded, cfg.d);
    return UniformSeries{raw.id, normalize(values)};
}

}  // namespace pcad
