#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cnnbound/random.hpp"

namespace cnnbound {

using Point = std::vector<double>;

/// Index into a dataset's class alphabet.
using ClassId = std::size_t;

struct LabeledPoint {
    Point coords;
    ClassId label = 0;

    bool operator==(const LabeledPoint&) const = default;
};

/// Immutable, validated training set.
///
/// The class alphabet is ordered by first appearance. Construction rejects
/// non-finite coordinates, mixed dimensionality and conflicting duplicates
/// (identical coordinates carrying different labels). Identical coordinates
/// with the same label are allowed.
class Dataset {
public:
    /// Builds a dataset from coordinates and label names. Throws InputError.
    Dataset(std::vector<Point> coords, const std::vector<std::string>& labels);

    /// Builds a dataset from points whose labels already index into `classes`.
    Dataset(std::vector<LabeledPoint> points, std::vector<std::string> classes);

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return dim_; }
    std::size_t num_classes() const { return classes_.size(); }

    const LabeledPoint& operator[](std::size_t i) const { return points_[i]; }
    std::span<const LabeledPoint> points() const { return points_; }

    const std::vector<std::string>& classes() const { return classes_; }
    const std::string& class_name(ClassId c) const { return classes_.at(c); }

    /// Squared Euclidean diameter of the point set.
    double squared_diameter() const;

    bool operator==(const Dataset&) const = default;

private:
    void validate() const;

    std::vector<LabeledPoint> points_;
    std::vector<std::string> classes_;
    std::size_t dim_ = 0;
};

/// Reads a comma-separated file with a header row. Every non-label column is a
/// real-valued feature, in file order. Row order is preserved.
Dataset load_csv(const std::filesystem::path& path, std::string_view label_column = "label");

/// Parses CSV text; `source` names the input in error messages.
Dataset parse_csv(std::string_view text, std::string_view label_column = "label",
                  std::string_view source = "<input>");

/// Writes features as x0..x{d-1} followed by the label column. Values use the
/// shortest representation that round-trips exactly.
void write_csv(const Dataset& data, const std::filesystem::path& path,
               std::string_view label_column = "label");
std::string to_csv(const Dataset& data, std::string_view label_column = "label");

struct BlobCenter {
    Point center;
    std::string label;
};

/// Isotropic Gaussian blobs. Points are emitted round-robin over the centers
/// (sample j of every center before sample j+1). Deterministic for a seed.
Dataset generate_blobs(std::uint64_t seed, std::size_t n_per_class,
                       const std::vector<BlobCenter>& centers, double spread);

/// Uniform points in the unit cube with uniformly drawn labels "c0".."c{k-1}".
/// Used for fuzzing; exact conflicting duplicates are resampled.
Dataset generate_uniform(std::uint64_t seed, std::size_t n, std::size_t dim,
                         std::size_t num_classes);

/// Infinite stream of blob samples; each item picks a center uniformly.
class BlobStream {
public:
    BlobStream(std::uint64_t seed, std::vector<BlobCenter> centers, double spread);

    LabeledPoint next();

    std::size_t dim() const { return dim_; }
    const std::vector<std::string>& classes() const { return classes_; }

private:
    std::vector<BlobCenter> centers_;
    std::vector<ClassId> center_labels_;
    std::vector<std::string> classes_;
    double spread_;
    std::size_t dim_;
    Rng rng_;
};

/// Parses "x,y:LABEL;x,y:LABEL" into blob centers.
std::vector<BlobCenter> parse_centers(std::string_view text);

}  // namespace cnnbound
