#include "cnnbound/cnn.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "cnnbound/errors.hpp"
#include "cnnbound/random.hpp"

namespace cnnbound {

std::vector<std::size_t> identity_order(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
    auto order = identity_order(n);
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    return order;
}

namespace {

std::vector<std::size_t> checked_order(const Dataset& data, std::span<const std::size_t> order) {
    if (order.empty()) {
        return identity_order(data.size());
    }
    std::vector<std::size_t> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != identity_order(data.size())) {
        throw InputError("scan order must be a permutation of the dataset indices");
    }
    return {order.begin(), order.end()};
}

}  // namespace

UpdateTrace run_cnn(const Dataset& data, std::span<const std::size_t> order_in) {
    const auto order = checked_order(data, order_in);
    UpdateTrace trace{{}, PrototypeSet(data), 0};
    bool changed = true;
    while (changed) {
        changed = false;
        ++trace.passes;
        for (auto i : order) {
            const auto& p = data[i];
            std::optional<ClassId> predicted;
            if (!trace.prototypes.empty()) {
                predicted = classify(trace.prototypes, p.coords);
                if (*predicted == p.label) {
                    continue;
                }
            }
            trace.prototypes.add(i);
            trace.events.push_back({trace.passes, i, p.label, predicted});
            changed = true;
        }
    }
    return trace;
}

OnlineResult run_cnn_online(const PointStream& stream, std::size_t max_items,
                            std::span<const std::size_t> checkpoints) {
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
        throw InputError("checkpoints must be ascending");
    }
    OnlineResult result;
    std::vector<LabeledPoint> prototypes;
    std::size_t next_checkpoint = 0;
    std::size_t dim = 0;

    while (result.items_seen < max_items) {
        auto item = stream();
        if (!item) {
            break;
        }
        if (result.items_seen == 0) {
            dim = item->coords.size();
        } else if (item->coords.size() != dim) {
            throw InputError("stream item " + std::to_string(result.items_seen + 1) +
                             " has a different dimension");
        }
        ++result.items_seen;

        // Linear scan with the same smallest-insertion-index tie rule as nearest().
        const LabeledPoint* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& q : prototypes) {
            const double d = squared_distance(q.coords, item->coords);
            if (d < best_d) {
                best_d = d;
                best = &q;
            }
        }
        if (best == nullptr || best->label != item->label) {
            if (best != nullptr && best_d == 0.0) {
                ++result.skipped_conflicts;
            } else {
                prototypes.push_back(std::move(*item));
            }
        }

        while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] <= result.items_seen) {
            if (checkpoints[next_checkpoint] == result.items_seen) {
                result.curve.push_back({result.items_seen, prototypes.size()});
            }
            ++next_checkpoint;
        }
    }
    result.prototypes = prototypes.size();
    return result;
}

std::vector<std::size_t> even_checkpoints(std::size_t max_items, std::size_t count) {
    std::vector<std::size_t> out;
    if (max_items == 0 || count == 0) {
        return out;
    }
    count = std::min(count, max_items);
    for (std::size_t k = 1; k <= count; ++k) {
        const auto c = max_items * k / count;
        if (out.empty() || out.back() != c) {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace cnnbound
