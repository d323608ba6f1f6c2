#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cnnbound/dataset.hpp"
#include "cnnbound/kernel_machine.hpp"
#include "cnnbound/neighborly.hpp"

namespace cnnbound {

/// The vectors v = phi(x, c) - phi(x, y) for every (x, c) in T and y != c,
/// represented through their inner products only.
class DifferenceVectorSet {
public:
    struct Entry {
        std::size_t point;  // index into the dataset
        ClassId c;          // true class
        ClassId y;          // wrong class
    };

    DifferenceVectorSet(const Dataset& data, const KernelConfig& kernel);

    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    /// v_a . v_b = [I(c=c') - I(c=y') - I(y=c') + I(y=y')] k(x, x').
    double gram(std::size_t a, std::size_t b) const;

    /// Column b of the gram matrix.
    void gram_column(std::size_t b, std::vector<double>& out) const;

private:
    std::vector<Entry> entries_;
    std::size_t n_;
    std::vector<double> kernel_;  // n x n, row-major
};

/// Largest difference-vector norm. Always sqrt(2) for the channelized
/// Gaussian map. Throws VacuousBound for a single-class dataset.
double radius(const Dataset& data, const KernelConfig& kernel);

struct MarginOptions {
    double tol = 1e-8;
    std::size_t max_iters = 100000;
    bool record_history = false;
};

struct MarginCertificate {
    /// Certified feasible margin min_v (p . v) / |p|, a lower bound on the
    /// maximum margin. Positive values certify separability.
    double delta_hat = 0.0;
    double radius = 0.0;
    /// Convex weights over DifferenceVectorSet entries defining p.
    std::vector<double> coefficients;
    std::vector<DifferenceVectorSet::Entry> entries;
    /// |p|^2 - min_v p . v at termination.
    double duality_gap = 0.0;
    double squared_norm = 0.0;  // |p|^2
    double bound = 0.0;         // R^2 / delta_hat^2
    std::size_t iterations = 0;
    bool converged = false;
    /// |p|^2 after each iteration when requested.
    std::vector<double> history;
};

/// Minimum-norm point of the convex hull of the difference vectors by
/// Gilbert's algorithm with away steps, driven entirely by gram evaluations.
/// Starts at the shortest difference vector; each iteration either moves
/// toward the vertex minimizing p . v or away from the active vertex
/// maximizing it, with an exact line search. Stops once the duality gap is
/// within tol or the iteration budget runs out (converged = false).
/// Throws VacuousBound for a single-class dataset.
MarginCertificate margin(const Dataset& data, const KernelConfig& kernel, const MarginOptions& options = {});

struct BoundReport {
    double sigma = 0.0;
    bool sigma_certified = false;
    bool vacuous = false;  // single class: no difference vectors
    std::optional<double> radius;
    std::optional<double> delta_hat;
    std::optional<double> duality_gap;
    std::optional<double> bound;
    std::size_t prototype_count = 0;
    bool satisfied = false;
};

/// Relative slack when comparing |P| to R^2 / delta_hat^2; the bound is
/// integral at the small-bandwidth limit and rounding may land just below.
inline constexpr double kBoundSlack = 1e-9;

/// Compares the CNN prototype count against R^2 / delta_hat^2 at `kernel`.
/// Requires a certificate covering sigma unless `allow_uncertified` is set
/// (throws UncertifiedSigma otherwise). Throws NotSeparable when delta_hat <= 0.
BoundReport cnn_bound(const Dataset& data, const KernelConfig& kernel,
                      const std::optional<SigmaCertificate>& certificate,
                      const MarginOptions& options = {}, bool allow_uncertified = false);

struct InfimumResult {
    BoundReport best;
    std::vector<BoundReport> evaluated;   // certified grid points, grid order
    std::vector<double> rejected;         // uncertified grid points
};

/// Geometric grid of `count` bandwidths from sigma_star/100 to sigma_star.
std::vector<double> default_sigma_grid(double sigma_star, std::size_t count = 16);

/// Smallest cnn_bound over grid bandwidths that are covered by the analytic
/// certificate or, for datasets within `exhaustive.cap`, pass exhaustive
/// verification. Throws NoCertifiedSigma when none qualify.
InfimumResult bound_infimum(const Dataset& data, const std::vector<double>& sigma_grid,
                            const MarginOptions& options = {}, const ExhaustiveMode& exhaustive = {});

}  // namespace cnnbound
