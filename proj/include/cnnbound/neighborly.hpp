#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnnbound/dataset.hpp"
#include "cnnbound/kernel_machine.hpp"

namespace cnnbound {

enum class CertificateMethod { AnalyticSufficient, EmpiricalBisection };

std::string to_string(CertificateMethod m);

/// A bandwidth threshold below which the channelized Gaussian map is
/// neighborly for a dataset.
///
/// For the analytic method, gamma is the smallest positive gap between the
/// squared distances from any query in T to two points of T with distinct
/// coordinates. Below sigma_star every off-nearest term of the normalized
/// score has magnitude at most exp(-gamma / (2 sigma^2)), there are at most
/// |T| - 1 of them, and their sum stays below 1/2, which separates the
/// nearest prototype's class from every other class.
struct SigmaCertificate {
    double sigma_star = 0.0;
    double gamma = 0.0;
    CertificateMethod method = CertificateMethod::AnalyticSufficient;
    bool verified = false;

    /// Whether `sigma` is covered: strictly below sigma_star for the analytic
    /// bound, at or below the last passing bandwidth for empirical bisection.
    bool covers(double sigma) const;
};

/// Smallest positive squared-distance gap over all queries in T. Throws
/// CertificateUnavailable when some query is exactly equidistant from two
/// points with distinct coordinates.
double squared_distance_gap(const Dataset& data);

/// sigma_star = sqrt(gamma / (2 ln(2 (|T| - 1)))). Requires |T| >= 2 and at
/// least two distinct coordinate vectors.
SigmaCertificate sufficient_sigma(const Dataset& data);

/// Counterexample to neighborliness: the restricted w built from `prototypes`
/// with wrong-class assignment `wrong` (parallel to `prototypes`) does not
/// pick the nearest prototype's class at `query`.
struct Violation {
    std::vector<std::size_t> prototypes;
    std::vector<ClassId> wrong;
    std::size_t query;
    ClassId argmax;
    bool degenerate;
    ClassId nearest_class;
};

struct VerifyResult {
    bool pass;
    std::optional<Violation> violation;
    std::size_t checked;  // (P, o, query) triples evaluated
};

struct ExhaustiveMode {
    std::size_t cap = 8;
};

struct SampledMode {
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
};

/// Checks argmax_class(w, x') == classify(P, x') over nonempty P subsets of T,
/// wrong-class assignments o(x) != c, and queries x' in T. Exhaustive mode
/// walks subsets by ascending bitmask, assignments in mixed-radix order and
/// queries by index, returning the first violation in that order. Sampled
/// mode draws P with inclusion probability 1/2 and o uniformly, and checks
/// every query for each draw. A degenerate argmax counts as a violation.
VerifyResult verify_neighborly(const Dataset& data, const KernelConfig& kernel, const ExhaustiveMode& mode);
VerifyResult verify_neighborly(const Dataset& data, const KernelConfig& kernel, const SampledMode& mode);

/// Restricted weight vector for P and a wrong-class assignment.
DualWeightVector restricted_weights(const Dataset& data, const KernelConfig& kernel,
                                    const std::vector<std::size_t>& prototypes,
                                    const std::vector<ClassId>& wrong);

/// Re-evaluates a reported violation; true when the mismatch reproduces.
bool replay_violation(const Dataset& data, const KernelConfig& kernel, const Violation& v);

/// Geometric bisection on [lo, hi] for the largest bandwidth that passes
/// exhaustive verification, assuming `lo` passes. Useful when the analytic
/// certificate is unavailable.
SigmaCertificate empirical_sigma(const Dataset& data, double lo, double hi, std::size_t steps = 40,
                                 const ExhaustiveMode& mode = {});

}  // namespace cnnbound
