#include "cnnbound/kernel_machine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cnnbound/errors.hpp"

namespace cnnbound {

KernelConfig::KernelConfig(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InputError("kernel bandwidth must be finite and positive, got " + std::to_string(sigma));
    }
}

double KernelConfig::log_eval(std::span<const double> x, std::span<const double> y) const {
    return log_from_squared(squared_distance(x, y));
}

double KernelConfig::eval(std::span<const double> x, std::span<const double> y) const {
    return std::exp(log_eval(x, y));
}

namespace {

// Coefficient of record r on channel y: I(c = y) - I(o = y).
double channel_coefficient(const WeightRecord& r, ClassId y) {
    return (r.c == y ? 1.0 : 0.0) - (r.y && *r.y == y ? 1.0 : 0.0);
}

}  // namespace

double score(const DualWeightVector& w, std::span<const double> x, ClassId y) {
    double s = 0.0;
    for (const auto& r : w.records) {
        const double coef = channel_coefficient(r, y);
        if (coef != 0.0) {
            s += coef * w.kernel.eval(r.x, x);
        }
    }
    return s;
}

ShiftedScores shifted_scores(const DualWeightVector& w, std::span<const double> x) {
    ShiftedScores out;
    out.scaled.assign(w.num_classes, 0.0);
    if (w.records.empty()) {
        return out;
    }
    std::vector<double> exponents(w.records.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.records.size(); ++i) {
        exponents[i] = w.kernel.log_eval(w.records[i].x, x);
        shift = std::max(shift, exponents[i]);
    }
    out.log_shift = shift;
    for (std::size_t i = 0; i < w.records.size(); ++i) {
        const auto& r = w.records[i];
        const double term = std::exp(exponents[i] - shift);
        out.scaled[r.c] += term;
        if (r.y) {
            out.scaled[*r.y] -= term;
        }
    }
    return out;
}

ArgmaxResult argmax_class(const DualWeightVector& w, std::span<const double> x) {
    const auto scores = shifted_scores(w, x);
    const auto& s = scores.scaled;
    ArgmaxResult result{0, w.records.empty(), {}};
    if (s.empty()) {
        result.degenerate = true;
        return result;
    }
    const double best = *std::max_element(s.begin(), s.end());
    bool all_zero = true;
    for (ClassId y = 0; y < s.size(); ++y) {
        if (s[y] == best) {
            result.tied.push_back(y);
        }
        all_zero = all_zero && s[y] == 0.0;
    }
    result.cls = result.tied.front();
    result.degenerate = result.degenerate || all_zero || result.tied.size() > 1;
    return result;
}

MpResult run_mp(const Dataset& data, const KernelConfig& kernel, std::size_t max_passes,
                std::span<const std::size_t> order_in) {
    const auto order = order_in.empty() ? identity_order(data.size())
                                        : std::vector<std::size_t>(order_in.begin(), order_in.end());
    if (order.size() != data.size()) {
        throw InputError("scan order must be a permutation of the dataset indices");
    }
    MpResult result{UpdateTrace{{}, PrototypeSet(data), 0},
                    DualWeightVector{kernel, data.num_classes(), {}}, false};
    auto& trace = result.trace;
    auto& w = result.weights;

    bool changed = true;
    while (changed) {
        if (trace.passes == max_passes) {
            return result;
        }
        changed = false;
        ++trace.passes;
        for (auto i : order) {
            const auto& p = data[i];
            const auto am = argmax_class(w, p.coords);
            if (!am.degenerate && am.cls == p.label) {
                continue;
            }
            std::optional<ClassId> wrong;
            if (w.records.empty()) {
                for (ClassId y = 0; y < data.num_classes(); ++y) {
                    if (y != p.label) {
                        wrong = y;
                        break;
                    }
                }
            } else {
                for (auto y : am.tied) {
                    if (y != p.label) {
                        wrong = y;
                        break;
                    }
                }
            }
            const std::optional<ClassId> predicted = w.records.empty() ? std::nullopt : wrong;
            w.records.push_back({i, p.coords, p.label, wrong});
            // P is a set; a repeated misclassification still updates w but not P.
            if (!trace.prototypes.contains(i)) {
                trace.prototypes.add(i);
            }
            trace.events.push_back({trace.passes, i, p.label, predicted});
            changed = true;
        }
    }
    result.terminated = true;
    return result;
}

}  // namespace cnnbound
