#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cnnbound/dataset.hpp"
#include "cnnbound/nn_rule.hpp"

namespace cnnbound {

/// One addition to the prototype set. `predicted` is the class the current
/// rule assigned at the time, and is empty only when the rule was empty.
struct UpdateEvent {
    std::size_t pass;  // 1-based
    std::size_t source_index;
    ClassId true_class;
    std::optional<ClassId> predicted;

    bool operator==(const UpdateEvent&) const = default;
};

struct UpdateTrace {
    std::vector<UpdateEvent> events;
    PrototypeSet prototypes;
    std::size_t passes = 0;  // includes the final clean pass
};

/// Scan order 0..n-1.
std::vector<std::size_t> identity_order(std::size_t n);

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed);

/// Condensed nearest neighbor. Each pass scans `data` in `order` (Dataset order
/// when empty) and adds every point the current prototypes misclassify; an
/// empty prototype set misclassifies everything. Stops after a pass with no
/// additions, so the result is always consistent with `data`.
UpdateTrace run_cnn(const Dataset& data, std::span<const std::size_t> order = {});

struct GrowthSample {
    std::size_t items_seen;
    std::size_t prototypes;

    bool operator==(const GrowthSample&) const = default;
};

struct OnlineResult {
    std::vector<GrowthSample> curve;
    std::size_t items_seen = 0;
    std::size_t prototypes = 0;
    /// Items skipped because a prototype already holds the same coordinates
    /// with a different label.
    std::size_t skipped_conflicts = 0;
};

/// Returns the next stream item, or nullopt when the stream is exhausted.
using PointStream = std::function<std::optional<LabeledPoint>()>;

/// Single-pass CNN over a stream. The curve is sampled whenever the number of
/// items seen reaches a checkpoint (checkpoints must be ascending).
OnlineResult run_cnn_online(const PointStream& stream, std::size_t max_items,
                            std::span<const std::size_t> checkpoints);

/// `count` checkpoints evenly spaced over (0, max_items], ending at max_items.
std::vector<std::size_t> even_checkpoints(std::size_t max_items, std::size_t count);

}  // namespace cnnbound
