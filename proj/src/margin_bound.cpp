#include "cnnbound/margin_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cnnbound/cnn.hpp"
#include "cnnbound/errors.hpp"

namespace cnnbound {

DifferenceVectorSet::DifferenceVectorSet(const Dataset& data, const KernelConfig& kernel)
    : n_(data.size()), kernel_(data.size() * data.size()) {
    for (std::size_t i = 0; i < n_; ++i) {
        const auto c = data[i].label;
        for (ClassId y = 0; y < data.num_classes(); ++y) {
            if (y != c) {
                entries_.push_back({i, c, y});
            }
        }
        kernel_[i * n_ + i] = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double k = kernel.eval(data[i].coords, data[j].coords);
            kernel_[i * n_ + j] = k;
            kernel_[j * n_ + i] = k;
        }
    }
}

namespace {

double indicator(bool b) { return b ? 1.0 : 0.0; }

double channel_product(const DifferenceVectorSet::Entry& a, const DifferenceVectorSet::Entry& b) {
    return indicator(a.c == b.c) - indicator(a.c == b.y) - indicator(a.y == b.c) + indicator(a.y == b.y);
}

}  // namespace

double DifferenceVectorSet::gram(std::size_t a, std::size_t b) const {
    const auto& ea = entries_[a];
    const auto& eb = entries_[b];
    const double coef = channel_product(ea, eb);
    return coef == 0.0 ? 0.0 : coef * kernel_[ea.point * n_ + eb.point];
}

void DifferenceVectorSet::gram_column(std::size_t b, std::vector<double>& out) const {
    out.resize(entries_.size());
    const auto& eb = entries_[b];
    const double* krow = &kernel_[eb.point * n_];
    for (std::size_t a = 0; a < entries_.size(); ++a) {
        const double coef = channel_product(entries_[a], eb);
        out[a] = coef == 0.0 ? 0.0 : coef * krow[entries_[a].point];
    }
}

double radius(const Dataset& data, const KernelConfig& kernel) {
    if (data.num_classes() < 2) {
        throw VacuousBound("a single-class dataset has no difference vectors; the bound is vacuous");
    }
    const DifferenceVectorSet set(data, kernel);
    double best = 0.0;
    for (std::size_t a = 0; a < set.size(); ++a) {
        best = std::max(best, set.gram(a, a));
    }
    return std::sqrt(best);
}

namespace {

struct SolverState {
    std::vector<double> alpha;
    std::vector<double> g;  // g[a] = v_a . p
    double pp = 0.0;        // |p|^2
};

// Exact recomputation of g and |p|^2 from the convex weights.
void refresh(const DifferenceVectorSet& set, SolverState& st) {
    std::vector<double> col;
    std::fill(st.g.begin(), st.g.end(), 0.0);
    for (std::size_t j = 0; j < st.alpha.size(); ++j) {
        if (st.alpha[j] > 0.0) {
            set.gram_column(j, col);
            for (std::size_t a = 0; a < col.size(); ++a) {
                st.g[a] += st.alpha[j] * col[a];
            }
        }
    }
    st.pp = 0.0;
    for (std::size_t j = 0; j < st.alpha.size(); ++j) {
        st.pp += st.alpha[j] * st.g[j];
    }
}

std::size_t argmin(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

MarginCertificate margin(const Dataset& data, const KernelConfig& kernel, const MarginOptions& options) {
    if (data.num_classes() < 2) {
        throw VacuousBound("a single-class dataset has no difference vectors; the bound is vacuous");
    }
    if (!(options.tol > 0.0)) {
        throw InputError("margin tolerance must be positive");
    }
    const DifferenceVectorSet set(data, kernel);
    const std::size_t m = set.size();

    std::vector<double> diag(m);
    for (std::size_t a = 0; a < m; ++a) {
        diag[a] = set.gram(a, a);
    }
    const std::size_t start = argmin(diag);

    SolverState st;
    st.alpha.assign(m, 0.0);
    st.alpha[start] = 1.0;
    set.gram_column(start, st.g);
    st.pp = diag[start];

    MarginCertificate cert;
    std::vector<double> col;
    constexpr std::size_t kRefreshEvery = 512;

    while (true) {
        std::size_t s = argmin(st.g);
        double fw_gap = st.pp - st.g[s];
        if (fw_gap <= options.tol) {
            refresh(set, st);
            s = argmin(st.g);
            fw_gap = st.pp - st.g[s];
            if (fw_gap <= options.tol) {
                cert.converged = true;
                break;
            }
        }
        if (cert.iterations == options.max_iters) {
            break;
        }

        std::size_t away = s;
        double away_value = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < m; ++a) {
            if (st.alpha[a] > 0.0 && st.g[a] > away_value) {
                away_value = st.g[a];
                away = a;
            }
        }
        const double away_gap = away_value - st.pp;

        const bool toward = fw_gap >= away_gap;
        const std::size_t v = toward ? s : away;
        set.gram_column(v, col);
        // Direction d = v_s - p (toward) or p - v_a (away).
        const double dd = diag[v] - 2.0 * st.g[v] + st.pp;
        const double pd = toward ? st.g[v] - st.pp : st.pp - st.g[v];
        double t_max = 1.0;
        if (!toward) {
            t_max = st.alpha[v] < 1.0 ? st.alpha[v] / (1.0 - st.alpha[v])
                                      : std::numeric_limits<double>::infinity();
        }
        if (!(dd > 0.0) || !(pd < 0.0)) {
            break;  // no descent available at working precision
        }
        const double t = std::min(-pd / dd, t_max);

        if (toward) {
            for (std::size_t a = 0; a < m; ++a) {
                st.alpha[a] *= 1.0 - t;
                st.g[a] = (1.0 - t) * st.g[a] + t * col[a];
            }
            st.alpha[v] += t;
        } else {
            for (std::size_t a = 0; a < m; ++a) {
                st.alpha[a] *= 1.0 + t;
                st.g[a] = (1.0 + t) * st.g[a] - t * col[a];
            }
            st.alpha[v] = t == t_max ? 0.0 : std::max(0.0, st.alpha[v] - t);
        }
        ++cert.iterations;
        if (cert.iterations % kRefreshEvery == 0) {
            refresh(set, st);
        } else {
            st.pp = 0.0;
            for (std::size_t a = 0; a < m; ++a) {
                st.pp += st.alpha[a] * st.g[a];
            }
        }
        if (options.record_history) {
            cert.history.push_back(st.pp);
        }
    }

    refresh(set, st);
    const double min_g = st.g[argmin(st.g)];
    double r2 = 0.0;
    for (double d : diag) {
        r2 = std::max(r2, d);
    }
    cert.radius = std::sqrt(r2);
    cert.squared_norm = st.pp;
    cert.duality_gap = st.pp - min_g;
    cert.converged = cert.converged && cert.duality_gap <= options.tol;
    cert.delta_hat = st.pp > 0.0 ? min_g / std::sqrt(st.pp) : 0.0;
    cert.bound = cert.delta_hat > 0.0 ? r2 * st.pp / (min_g * min_g) : std::numeric_limits<double>::infinity();
    cert.coefficients = std::move(st.alpha);
    cert.entries = set.entries();
    return cert;
}

BoundReport cnn_bound(const Dataset& data, const KernelConfig& kernel,
                      const std::optional<SigmaCertificate>& certificate, const MarginOptions& options,
                      bool allow_uncertified) {
    BoundReport report;
    report.sigma = kernel.sigma();
    report.sigma_certified = certificate && certificate->covers(kernel.sigma());
    report.prototype_count = run_cnn(data).prototypes.size();
    if (data.num_classes() < 2) {
        report.vacuous = true;
        report.satisfied = true;
        return report;
    }
    if (!report.sigma_certified && !allow_uncertified) {
        throw UncertifiedSigma("sigma = " + std::to_string(kernel.sigma()) +
                               " is not covered by a neighborliness certificate");
    }
    const auto cert = margin(data, kernel, options);
    if (!(cert.delta_hat > 0.0)) {
        throw NotSeparable("no positive margin certified at sigma = " + std::to_string(kernel.sigma()));
    }
    report.radius = cert.radius;
    report.delta_hat = cert.delta_hat;
    report.duality_gap = cert.duality_gap;
    report.bound = cert.bound;
    report.satisfied = static_cast<double>(report.prototype_count) <= cert.bound * (1.0 + kBoundSlack);
    return report;
}

std::vector<double> default_sigma_grid(double sigma_star, std::size_t count) {
    if (!(sigma_star > 0.0) || count == 0) {
        throw InputError("default grid needs a positive sigma_star and count");
    }
    if (count == 1) {
        return {sigma_star};
    }
    std::vector<double> grid(count);
    const double lo = sigma_star / 100.0;
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = lo * std::pow(100.0, static_cast<double>(k) / static_cast<double>(count - 1));
    }
    grid.back() = sigma_star;
    return grid;
}

InfimumResult bound_infimum(const Dataset& data, const std::vector<double>& sigma_grid,
                            const MarginOptions& options, const ExhaustiveMode& exhaustive) {
    if (sigma_grid.empty()) {
        throw InputError("sigma grid is empty");
    }
    InfimumResult result;
    if (data.num_classes() < 2) {
        result.best = cnn_bound(data, KernelConfig(sigma_grid.front()), std::nullopt, options, true);
        result.evaluated.push_back(result.best);
        return result;
    }
    std::optional<SigmaCertificate> analytic;
    try {
        analytic = sufficient_sigma(data);
    } catch (const CertificateUnavailable&) {
    } catch (const InputError&) {
    }
    const bool can_verify = data.size() <= exhaustive.cap;
    for (double sigma : sigma_grid) {
        const KernelConfig kernel(sigma);
        bool certified = analytic && analytic->covers(sigma);
        if (!certified && can_verify) {
            certified = verify_neighborly(data, kernel, exhaustive).pass;
        }
        if (!certified) {
            result.rejected.push_back(sigma);
            continue;
        }
        auto report = cnn_bound(data, kernel, analytic, options, true);
        report.sigma_certified = true;
        if (result.evaluated.empty() || *report.bound < *result.best.bound) {
            result.best = report;
        }
        result.evaluated.push_back(std::move(report));
    }
    if (result.evaluated.empty()) {
        throw NoCertifiedSigma("no grid bandwidth could be certified neighborly");
    }
    return result;
}

}  // namespace cnnbound
