#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cnnbound/dataset.hpp"

namespace cnnbound {

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Insertion-ordered subset of a parent dataset, stored as source indices.
/// The parent must outlive the set.
class PrototypeSet {
public:
    explicit PrototypeSet(const Dataset& parent) : parent_(&parent) {}
    PrototypeSet(const Dataset& parent, std::vector<std::size_t> indices);

    /// Appends a member. Throws InputError on an out-of-range or repeated index.
    void add(std::size_t source_index);

    bool contains(std::size_t source_index) const;
    bool empty() const { return indices_.empty(); }
    std::size_t size() const { return indices_.size(); }

    const std::vector<std::size_t>& indices() const { return indices_; }
    const Dataset& parent() const { return *parent_; }
    const LabeledPoint& member(std::size_t k) const { return (*parent_)[indices_[k]]; }

    bool operator==(const PrototypeSet& other) const {
        return parent_ == other.parent_ && indices_ == other.indices_;
    }

private:
    const Dataset* parent_;
    std::vector<std::size_t> indices_;
    std::vector<bool> present_;
};

struct Neighbor {
    std::size_t source_index;
    double squared_distance;
};

/// Member minimizing squared Euclidean distance to `x`; ties go to the smallest
/// source index. Throws EmptySetError when `prototypes` is empty.
Neighbor nearest(const PrototypeSet& prototypes, std::span<const double> x);

/// Label of the nearest member.
ClassId classify(const PrototypeSet& prototypes, std::span<const double> x);

/// True iff every point of `data` is classified to its own label by `prototypes`.
bool is_consistent(const PrototypeSet& prototypes, const Dataset& data);

}  // namespace cnnbound
