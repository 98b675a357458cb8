#include "pcad/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcad/errors.hpp"
#include "pcad/preprocess.hpp"
#include "pcad/rng.hpp"

namespace pcad {

Shape shape_from_name(const std::string& name) {
    if (name == "sinusoid") return Shape::Sinusoid;
    if (name == "sawtooth") return Shape::Sawtooth;
    if (name == "square_pulse") return Shape::SquarePulse;
    if (name == "double_dip") return Shape::DoubleDip;
    if (name == "plateau") return Shape::Plateau;
    throw BadSpec("unknown shape '" + name + "'");
}

std::string shape_name(Shape s) {
    switch (s) {
        case Shape::Sinusoid: return "sinusoid";
        case Shape::Sawtooth: return "sawtooth";
        case Shape::SquarePulse: return "square_pulse";
        case Shape::DoubleDip: return "double_dip";
        case Shape::Plateau: return "plateau";
    }
    return "?";
}

double default_variant(Shape s) {
    switch (s) {
        case Shape::Sinusoid: return 0.0;
        case Shape::Sawtooth: return 0.3;
        case Shape::SquarePulse: return 0.2;
        case Shape::DoubleDip: return 0.5;
        case Shape::Plateau: return 0.35;
    }
    return 0.0;
}

double shape_value(Shape s, double variant, double p) {
    switch (s) {
        case Shape::Sinusoid:
            return std::sin(2.0 * std::numbers::pi * p) +
                   variant * std::sin(4.0 * std::numbers::pi * p);
        case Shape::Sawtooth: {
            // Fast rise over `variant` of the period, slow decay after.
            const double a = std::clamp(variant, 0.01, 0.99);
            return p < a ? 2.0 * p / a - 1.0
                         : 1.0 - 2.0 * (p - a) / (1.0 - a);
        }
        case Shape::SquarePulse: {
            const double duty = std::clamp(variant, 0.01, 0.99);
            return p < duty ? 1.0 : -1.0;
        }
        case Shape::DoubleDip: {
            // Eclipsing-binary profile: primary dip at 0.25, secondary of
            // configurable depth at 0.75.
            const double w = 0.05;
            const double d1 = (p - 0.25) / w;
            const double d2 = (p - 0.75) / w;
            return -std::exp(-d1 * d1) - variant * std::exp(-d2 * d2);
        }
        case Shape::Plateau: {
            const double rise = 0.1;
            const double top = std::clamp(variant, 0.05, 0.75);
            if (p < rise) return p / rise;
            if (p < rise + top) return 1.0;
            if (p < 2.0 * rise + top) return 1.0 - (p - rise - top) / rise;
            return 0.0;
        }
    }
    return 0.0;
}

void validate(const MixSpec& spec) {
    if (spec.classes.empty()) {
        throw BadSpec("mix: no classes");
    }
    if (spec.total_n < 20) {
        throw BadSpec("mix: total_n must be >= 20");
    }
    if (!is_power_of_two(spec.d) || spec.d < 16) {
        throw BadSpec("mix: d must be a power of two >= 16");
    }
    double total = 0.0, outlier = 0.0;
    for (const ClassSpec& c : spec.classes) {
        if (c.fraction < 0.0) {
            throw BadSpec("mix: class '" + c.label + "' has negative fraction");
        }
        total += c.fraction;
        if (c.is_outlier) outlier += c.fraction;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw BadSpec("mix: fractions sum to " + std::to_string(total) +
                      ", expected 1");
    }
    // Precision over planted anomalies is undefined once outliers stop being
    // the minority.
    if (outlier >= 0.5) {
        throw BadSpec("mix: outlier fraction must be below 0.5");
    }
}

std::vector<std::size_t> largest_remainder_counts(
    const std::vector<double>& fractions, std::size_t n) {
    const std::size_t m = fractions.size();
    std::vector<std::size_t> counts(m);
    std::vector<std::pair<double, std::size_t>> rema(m);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double exact = fractions[i] * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        rema[i] = {exact - std::floor(exact), i};
    }
    std::stable_sort(rema.begin(), rema.end(),
                     [](const auto& a, const auto& b) {
                         return a.first > b.first;
                     });
    for (std::size_t r = 0; assigned < n; ++r) {
        ++counts[rema[r % m].second];
        ++assigned;
    }
    return counts;
}

std::vector<LabeledSeries> synth_corpus(const MixSpec& spec) {
    validate(spec);
    std::vector<double> fractions;
    for (const ClassSpec& c : spec.classes) fractions.push_back(c.fraction);
    const std::vector<std::size_t> counts =
        largest_remainder_counts(fractions, spec.total_n);

    Rng rng(spec.seed);
    std::vector<LabeledSeries> corpus;
    corpus.reserve(spec.total_n);
    for (std::size_t ci = 0; ci < spec.classes.size(); ++ci) {
        const ClassSpec& cls = spec.classes[ci];
        const double variant =
            cls.variant < 0.0 ? default_variant(cls.shape) : cls.variant;
        for (std::size_t inst = 0; inst < counts[ci]; ++inst) {
            std::vector<double> values(spec.d);
            for (std::size_t j = 0; j < spec.d; ++j) {
                const double p = static_cast<double>(j) /
                                 static_cast<double>(spec.d);
                values[j] = cls.amplitude * shape_value(cls.shape, variant, p) +
                            cls.sigma * rng.normal();
            }
            UniformSeries series{
                cls.label + "_" + std::to_string(corpus.size()),
                normalize(values)};
            const std::size_t shift = rng.below(spec.d);
            series = rotate(series, shift);
            corpus.push_back(LabeledSeries{std::move(series), cls.label,
                                           cls.is_outlier, cls.paired_normal});
        }
    }
    shuffle_in_place(corpus, rng);
    return corpus;
}

std::vector<UniformSeries> strip_labels(const std::vector<LabeledSeries>& c) {
    std::vector<UniformSeries> out;
    out.reserve(c.size());
    for (const LabeledSeries& l : c) out.push_back(l.series);
    return out;
}

}  // namespace pcad
