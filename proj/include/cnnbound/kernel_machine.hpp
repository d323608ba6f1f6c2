#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cnnbound/cnn.hpp"
#include "cnnbound/dataset.hpp"

namespace cnnbound {

/// Gaussian kernel k(x, x') = exp(-|x - x'|^2 / (2 sigma^2)).
class KernelConfig {
public:
    /// Throws InputError unless sigma is finite and positive.
    explicit KernelConfig(double sigma);

    double sigma() const { return sigma_; }

    /// Log-domain value -|x - x'|^2 / (2 sigma^2); finite for any finite sigma.
    double log_eval(std::span<const double> x, std::span<const double> y) const;
    double log_from_squared(double squared_distance) const {
        return -0.5 * (squared_distance / sigma_) / sigma_;
    }
    double eval(std::span<const double> x, std::span<const double> y) const;

private:
    double sigma_;
};

/// One perceptron update: +phi(x, c) - phi(x, y). `y` is empty only for the
/// first update on a single-class alphabet, where no wrong class exists and
/// the update is +phi(x, c) alone.
struct WeightRecord {
    std::size_t index;
    Point x;
    ClassId c;
    std::optional<ClassId> y;

    bool operator==(const WeightRecord&) const = default;
};

/// Perceptron weights in dual form over the channelized Gaussian feature map.
/// Channels of different classes are orthogonal, so
/// w . phi(x, y) = sum_i [I(c_i = y) - I(y_i = y)] k(x_i, x).
struct DualWeightVector {
    KernelConfig kernel;
    std::size_t num_classes;
    std::vector<WeightRecord> records;

    bool operator==(const DualWeightVector& o) const {
        return kernel.sigma() == o.kernel.sigma() && num_classes == o.num_classes && records == o.records;
    }
};

/// Direct linear-domain score. Underflows to 0 when sigma is tiny relative to
/// the distances involved; use shifted_scores for comparisons.
double score(const DualWeightVector& w, std::span<const double> x, ClassId y);

/// All class scores divided by exp(log_shift), where log_shift is the largest
/// record exponent for this query. The true score is scaled[y] * exp(log_shift).
struct ShiftedScores {
    std::vector<double> scaled;
    double log_shift = 0.0;
};

ShiftedScores shifted_scores(const DualWeightVector& w, std::span<const double> x);

/// Winning class in alphabet order among the maximal scores. `degenerate` is
/// set when w is empty, all scores are zero, or the maximum is shared; `tied`
/// lists the classes attaining the maximum.
struct ArgmaxResult {
    ClassId cls;
    bool degenerate;
    std::vector<ClassId> tied;
};

ArgmaxResult argmax_class(const DualWeightVector& w, std::span<const double> x);

struct MpResult {
    UpdateTrace trace;
    DualWeightVector weights;
    bool terminated;  // false when the pass budget ran out
};

/// Multiclass kernel perceptron with the prototype set bookkeeping of the
/// hybrid algorithm: every update also appends the point to P. A degenerate
/// argmax counts as a misclassification; the update then uses the first tied
/// class different from the true class (or the first such class in the
/// alphabet when w is empty). Trace events carry no predicted class while w
/// is empty, mirroring run_cnn.
MpResult run_mp(const Dataset& data, const KernelConfig& kernel, std::size_t max_passes,
                std::span<const std::size_t> order = {});

}  // namespace cnnbound
