#include "cnnbound/nn_rule.hpp"

#include <limits>
#include <string>

#include "cnnbound/errors.hpp"

namespace cnnbound {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

PrototypeSet::PrototypeSet(const Dataset& parent, std::vector<std::size_t> indices)
    : parent_(&parent) {
    for (auto i : indices) {
        add(i);
    }
}

void PrototypeSet::add(std::size_t source_index) {
    if (source_index >= parent_->size()) {
        throw InputError("prototype index " + std::to_string(source_index) + " out of range");
    }
    if (present_.empty()) {
        present_.assign(parent_->size(), false);
    }
    if (present_[source_index]) {
        throw InputError("prototype index " + std::to_string(source_index) + " added twice");
    }
    present_[source_index] = true;
    indices_.push_back(source_index);
}

bool PrototypeSet::contains(std::size_t source_index) const {
    return source_index < present_.size() && present_[source_index];
}

Neighbor nearest(const PrototypeSet& prototypes, std::span<const double> x) {
    if (prototypes.empty()) {
        throw EmptySetError("nearest neighbor of an empty prototype set does not exist");
    }
    const auto& data = prototypes.parent();
    if (x.size() != data.dim()) {
        throw InputError("query dimension " + std::to_string(x.size()) + " does not match " +
                         std::to_string(data.dim()));
    }
    Neighbor best{0, std::numeric_limits<double>::infinity()};
    for (auto idx : prototypes.indices()) {
        const double d = squared_distance(data[idx].coords, x);
        if (d < best.squared_distance || (d == best.squared_distance && idx < best.source_index)) {
            best = {idx, d};
        }
    }
    return best;
}

ClassId classify(const PrototypeSet& prototypes, std::span<const double> x) {
    return prototypes.parent()[nearest(prototypes, x).source_index].label;
}

bool is_consistent(const PrototypeSet& prototypes, const Dataset& data) {
    if (prototypes.empty()) {
        return data.size() == 0;
    }
    for (const auto& p : data.points()) {
        if (classify(prototypes, p.coords) != p.label) {
            return false;
        }
    }
    return true;
}

}  // namespace cnnbound
