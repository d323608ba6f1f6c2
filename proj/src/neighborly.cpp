#include "cnnbound/neighborly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "cnnbound/errors.hpp"
#include "cnnbound/nn_rule.hpp"
#include "cnnbound/random.hpp"

namespace cnnbound {

CertificateUnavailable::CertificateUnavailable(std::size_t q, std::size_t a, std::size_t b)
    : Error("no analytic bandwidth certificate: point " + std::to_string(q) +
            " is exactly equidistant from points " + std::to_string(a) + " and " +
            std::to_string(b) +
            "; use empirical bisection on a small dataset or perturb the data"),
      query(q),
      first(a),
      second(b) {}

std::string to_string(CertificateMethod m) {
    return m == CertificateMethod::AnalyticSufficient ? "analytic-sufficient" : "empirical-bisection";
}

bool SigmaCertificate::covers(double sigma) const {
    if (method == CertificateMethod::AnalyticSufficient) {
        return sigma > 0.0 && sigma < sigma_star;
    }
    return sigma > 0.0 && sigma <= sigma_star;
}

namespace {

// Representative index for each point: the first point with identical coordinates.
std::vector<std::size_t> coordinate_groups(const Dataset& data) {
    std::map<Point, std::size_t> first;
    std::vector<std::size_t> group(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        group[i] = first.try_emplace(data[i].coords, i).first->second;
    }
    return group;
}

}  // namespace

double squared_distance_gap(const Dataset& data) {
    const auto group = coordinate_groups(data);
    double gamma = std::numeric_limits<double>::infinity();
    struct Entry {
        double d2;
        std::size_t group;
    };
    std::vector<Entry> dist;
    for (std::size_t q = 0; q < data.size(); ++q) {
        dist.clear();
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (group[i] == i) {
                dist.push_back({squared_distance(data[q].coords, data[i].coords), i});
            }
        }
        std::sort(dist.begin(), dist.end(), [](const Entry& a, const Entry& b) {
            return a.d2 < b.d2 || (a.d2 == b.d2 && a.group < b.group);
        });
        for (std::size_t k = 1; k < dist.size(); ++k) {
            const double gap = dist[k].d2 - dist[k - 1].d2;
            if (gap == 0.0) {
                throw CertificateUnavailable(q, dist[k - 1].group, dist[k].group);
            }
            gamma = std::min(gamma, gap);
        }
    }
    return gamma;
}

SigmaCertificate sufficient_sigma(const Dataset& data) {
    if (data.size() < 2) {
        throw InputError("a bandwidth certificate needs at least two points");
    }
    const double gamma = squared_distance_gap(data);
    if (!std::isfinite(gamma)) {
        throw InputError("a bandwidth certificate needs at least two distinct points");
    }
    const double n = static_cast<double>(data.size());
    SigmaCertificate cert;
    cert.gamma = gamma;
    cert.sigma_star = std::sqrt(gamma / (2.0 * std::log(2.0 * (n - 1.0))));
    cert.method = CertificateMethod::AnalyticSufficient;
    return cert;
}

DualWeightVector restricted_weights(const Dataset& data, const KernelConfig& kernel,
                                    const std::vector<std::size_t>& prototypes,
                                    const std::vector<ClassId>& wrong) {
    if (prototypes.size() != wrong.size()) {
        throw InputError("one wrong class is needed per prototype");
    }
    DualWeightVector w{kernel, data.num_classes(), {}};
    for (std::size_t k = 0; k < prototypes.size(); ++k) {
        const auto& p = data[prototypes[k]];
        if (wrong[k] == p.label || wrong[k] >= data.num_classes()) {
            throw InputError("wrong-class assignment must differ from the true class");
        }
        w.records.push_back({prototypes[k], p.coords, p.label, wrong[k]});
    }
    return w;
}

namespace {

// Checks every query for one (P, o); returns the first failing query.
std::optional<Violation> check_queries(const Dataset& data, const KernelConfig& kernel,
                                       const PrototypeSet& set, const std::vector<ClassId>& wrong,
                                       std::size_t& checked) {
    const auto w = restricted_weights(data, kernel, set.indices(), wrong);
    for (std::size_t q = 0; q < data.size(); ++q) {
        ++checked;
        const auto expected = classify(set, data[q].coords);
        const auto am = argmax_class(w, data[q].coords);
        if (am.degenerate || am.cls != expected) {
            return Violation{set.indices(), wrong, q, am.cls, am.degenerate, expected};
        }
    }
    return std::nullopt;
}

// Maps a choice r in [0, |C|-1) to the r-th class that is not `label`.
ClassId nth_wrong_class(ClassId label, std::size_t r) { return r < label ? r : r + 1; }

}  // namespace

VerifyResult verify_neighborly(const Dataset& data, const KernelConfig& kernel, const ExhaustiveMode& mode) {
    if (data.size() > mode.cap) {
        throw CapExceeded("exhaustive verification is limited to " + std::to_string(mode.cap) +
                          " points (dataset has " + std::to_string(data.size()) +
                          "); use sampled mode instead");
    }
    VerifyResult result{true, std::nullopt, 0};
    const std::size_t choices = data.num_classes() - 1;
    if (choices == 0) {
        return result;
    }
    const std::size_t n = data.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1U) {
                members.push_back(i);
            }
        }
        const PrototypeSet set(data, members);
        std::vector<std::size_t> digits(members.size(), 0);
        while (true) {
            std::vector<ClassId> wrong(members.size());
            for (std::size_t k = 0; k < members.size(); ++k) {
                wrong[k] = nth_wrong_class(data[members[k]].label, digits[k]);
            }
            if (auto v = check_queries(data, kernel, set, wrong, result.checked)) {
                result.pass = false;
                result.violation = std::move(v);
                return result;
            }
            // Mixed-radix increment, most significant digit first.
            std::size_t k = members.size();
            while (k > 0 && ++digits[k - 1] == choices) {
                digits[k - 1] = 0;
                --k;
            }
            if (k == 0) {
                break;
            }
        }
    }
    return result;
}

VerifyResult verify_neighborly(const Dataset& data, const KernelConfig& kernel, const SampledMode& mode) {
    VerifyResult result{true, std::nullopt, 0};
    const std::size_t choices = data.num_classes() - 1;
    if (choices == 0) {
        return result;
    }
    Rng rng(mode.seed);
    for (std::size_t t = 0; t < mode.trials; ++t) {
        std::vector<std::size_t> members;
        while (members.empty()) {
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (rng.uniform() < 0.5) {
                    members.push_back(i);
                }
            }
        }
        std::vector<ClassId> wrong(members.size());
        for (std::size_t k = 0; k < members.size(); ++k) {
            wrong[k] = nth_wrong_class(data[members[k]].label, rng.below(choices));
        }
        const PrototypeSet set(data, members);
        if (auto v = check_queries(data, kernel, set, wrong, result.checked)) {
            result.pass = false;
            result.violation = std::move(v);
            return result;
        }
    }
    return result;
}

bool replay_violation(const Dataset& data, const KernelConfig& kernel, const Violation& v) {
    const PrototypeSet set(data, v.prototypes);
    const auto w = restricted_weights(data, kernel, v.prototypes, v.wrong);
    const auto& x = data[v.query].coords;
    const auto am = argmax_class(w, x);
    const auto expected = classify(set, x);
    return expected == v.nearest_class && am.cls == v.argmax && am.degenerate == v.degenerate &&
           (am.degenerate || am.cls != expected);
}

SigmaCertificate empirical_sigma(const Dataset& data, double lo, double hi, std::size_t steps,
                                 const ExhaustiveMode& mode) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw InputError("bisection needs 0 < lo < hi");
    }
    auto passes = [&](double s) { return verify_neighborly(data, KernelConfig(s), mode).pass; };
    if (!passes(lo)) {
        throw NoCertifiedSigma("lower bisection bound " + std::to_string(lo) + " is not neighborly");
    }
    SigmaCertificate cert;
    cert.method = CertificateMethod::EmpiricalBisection;
    cert.verified = true;
    try {
        cert.gamma = squared_distance_gap(data);
    } catch (const CertificateUnavailable&) {
        cert.gamma = 0.0;
    }
    if (passes(hi)) {
        cert.sigma_star = hi;
        return cert;
    }
    for (std::size_t s = 0; s < steps; ++s) {
        const double mid = std::sqrt(lo * hi);
        (passes(mid) ? lo : hi) = mid;
    }
    cert.sigma_star = lo;
    return cert;
}

}  // namespace cnnbound
