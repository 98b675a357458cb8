#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcad/series.hpp"

namespace pcad {

enum class Shape { Sinusoid, Sawtooth, SquarePulse, DoubleDip, Plateau };

Shape shape_from_name(const std::string& name);
std::string shape_name(Shape s);

// One free parameter per shape keeps class variants expressible:
//   Sinusoid    second-harmonic weight    (default 0)
//   Sawtooth    rise fraction             (default 0.3)
//   SquarePulse duty fraction             (default 0.2)
//   DoubleDip   secondary dip depth       (default 0.5)
//   Plateau     flat-top width            (default 0.35)
double shape_value(Shape s, double variant, double phase);
double default_variant(Shape s);

struct ClassSpec {
    std::string label;
    Shape shape = Shape::Sinusoid;
    double fraction = 0.0;
    double sigma = 0.0;      // additive Gaussian noise before normalization
    double amplitude = 1.0;
    double variant = -1.0;   // < 0 means the shape default
    bool is_outlier = false;
    std::string paired_normal;  // local mixes: the normal class this
                                // outlier class shadows
};

struct MixSpec {
    std::vector<ClassSpec> classes;
    std::size_t total_n = 0;  // >= 20
    std::size_t d = 256;
    std::uint64_t seed = 0;
};

struct LabeledSeries {
    UniformSeries series;
    std::string label;
    bool is_outlier = false;
    std::string paired_normal;
};

void validate(const MixSpec& spec);

// Exact integer class counts from fractions via largest-remainder rounding.
std::vector<std::size_t> largest_remainder_counts(
    const std::vector<double>& fractions, std::size_t n);

// Noisy, normalized, randomly phased instances in shuffled order. Labels are
// for evaluation only; strip them before handing data to any method.
std::vector<LabeledSeries> synth_corpus(const MixSpec& spec);

std::vector<UniformSeries> strip_labels(const std::vector<LabeledSeries>& c);

}  // namespace pcad
