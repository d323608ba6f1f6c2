#include <gtest/gtest.h>

#include <cmath>

#include "cnnbound/cnn.hpp"
#include "cnnbound/errors.hpp"
#include "cnnbound/kernel_machine.hpp"
#include "cnnbound/neighborly.hpp"
#include "cnnbound/random.hpp"
#include "support/oracles.hpp"

using namespace cnnbound;

namespace {

Dataset line(std::vector<double> xs, std::vector<std::string> labels) {
    std::vector<Point> coords;
    for (double x : xs) {
        coords.push_back({x});
    }
    return Dataset(std::move(coords), labels);
}

std::vector<oracle::Rec> as_oracle(const DualWeightVector& w) {
    std::vector<oracle::Rec> out;
    for (const auto& r : w.records) {
        out.push_back({r.x, r.c, r.y});
    }
    return out;
}

}  // namespace

TEST(Kernel, Values) {
    const KernelConfig k(2.0);
    const Point a{1.0, 2.0};
    EXPECT_EQ(k.eval(a, a), 1.0);
    // |x - x'|^2 = 8 = 2 sigma^2
    const Point b{1.0, 2.0 + std::sqrt(8.0)};
    EXPECT_NEAR(k.eval(a, b), 0.36787944117144233, 1e-15);
    EXPECT_NEAR(k.log_eval(a, b), -1.0, 1e-15);
}

TEST(Kernel, TinyBandwidthStaysFiniteInLogDomain) {
    const KernelConfig k(1e-200);
    const Point a{0.0};
    const Point b{1e-150};
    EXPECT_EQ(k.eval(a, b), 0.0);
    const double lg = k.log_eval(a, b);
    EXPECT_TRUE(std::isfinite(lg));
    EXPECT_NEAR(lg / -0.5e100, 1.0, 1e-12);
}

TEST(Kernel, RejectsNonPositiveBandwidth) {
    EXPECT_THROW(KernelConfig(0.0), InputError);
    EXPECT_THROW(KernelConfig(-1.0), InputError);
    EXPECT_THROW(KernelConfig(std::nan("")), InputError);
}

TEST(Score, SingleRecordChannels) {
    const Point x0{0.5, -1.0};
    const DualWeightVector w{KernelConfig(1.0), 3, {{0, x0, 0, ClassId{1}}}};
    EXPECT_EQ(score(w, x0, 0), 1.0);
    EXPECT_EQ(score(w, x0, 1), -1.0);
    EXPECT_EQ(score(w, x0, 2), 0.0);  // orthogonal channel
}

TEST(Score, EmptyWeightsScoreZero) {
    const DualWeightVector w{KernelConfig(1.0), 3, {}};
    for (ClassId y = 0; y < 3; ++y) {
        EXPECT_EQ(score(w, Point{1.0}, y), 0.0);
    }
    const auto am = argmax_class(w, Point{1.0});
    EXPECT_TRUE(am.degenerate);
    EXPECT_EQ(am.cls, 0u);
    EXPECT_EQ(am.tied.size(), 3u);
}

TEST(Score, FarQueryMatchesNaiveSum) {
    const DualWeightVector w{KernelConfig(3.0), 3,
                             {{0, {0.0, 0.0}, 0, ClassId{1}}, {1, {2.0, 1.0}, 2, ClassId{0}}}};
    const Point x{9.0, 7.0};
    double maxk = 0.0;
    for (const auto& r : w.records) {
        maxk = std::max(maxk, oracle::gauss(r.x, x, 3.0));
    }
    for (ClassId y = 0; y < 3; ++y) {
        const double s = score(w, x, y);
        EXPECT_NEAR(s, oracle::naive_score(as_oracle(w), x, y, 3.0), 1e-15);
        EXPECT_LE(std::abs(s), 2.0 * maxk);
        const auto sh = shifted_scores(w, x);
        EXPECT_NEAR(sh.scaled[y] * std::exp(sh.log_shift), s, 1e-15);
    }
}

TEST(Score, ChannelOrthogonality) {
    // Records touching only channels 0 and 1 never contribute to channel 2 or 3.
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        DualWeightVector w{KernelConfig(0.5 + rng.uniform()), 4, {}};
        for (int r = 0; r < 5; ++r) {
            const ClassId c = rng.below(2);
            w.records.push_back({0, {rng.uniform(), rng.uniform()}, c, ClassId{1 - c}});
        }
        const Point x{rng.uniform(), rng.uniform()};
        EXPECT_EQ(score(w, x, 2), 0.0);
        EXPECT_EQ(score(w, x, 3), 0.0);
        // Each record is +1 on one channel and -1 on another, so scores sum to zero.
        EXPECT_NEAR(score(w, x, 0) + score(w, x, 1), 0.0, 1e-14);
    }
}

TEST(Argmax, MirrorsNearestNeighborBelowThreshold) {
    const auto t = line({0.0, 10.0}, {"A", "B"});
    const DualWeightVector w{KernelConfig(1.0), 2, {{0, {0.0}, 0, ClassId{1}}, {1, {10.0}, 1, ClassId{0}}}};
    const PrototypeSet p(t, {0, 1});
    const auto am = argmax_class(w, Point{4.0});
    EXPECT_FALSE(am.degenerate);
    EXPECT_EQ(am.cls, classify(p, Point{4.0}));
    EXPECT_EQ(am.cls, 0u);
}

TEST(Argmax, TinyBandwidthNoOverflow) {
    const auto t = line({0.0, 10.0}, {"A", "B"});
    const PrototypeSet p(t, {0, 1});
    const DualWeightVector w{KernelConfig(1e-3), 2, {{0, {0.0}, 0, ClassId{1}}, {1, {10.0}, 1, ClassId{0}}}};
    for (double x : {0.0, 3.0, 4.9, 5.1, 7.0, 10.0}) {
        const auto sh = shifted_scores(w, Point{x});
        for (double s : sh.scaled) {
            EXPECT_TRUE(std::isfinite(s));
        }
        EXPECT_TRUE(std::isfinite(sh.log_shift));
        const auto am = argmax_class(w, Point{x});
        EXPECT_FALSE(am.degenerate);
        EXPECT_EQ(am.cls, classify(p, Point{x})) << x;
    }
    // The direct scores all underflow to zero at x = 4.
    EXPECT_EQ(score(w, Point{4.0}, 0), 0.0);
    EXPECT_EQ(score(w, Point{4.0}, 1), 0.0);
}

TEST(Argmax, ShiftedMatchesNaiveAtModerateBandwidth) {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const double sigma = 0.2 + rng.uniform();
        DualWeightVector w{KernelConfig(sigma), 3, {}};
        const auto nrec = 1 + rng.below(6);
        for (std::size_t r = 0; r < nrec; ++r) {
            const ClassId c = rng.below(3);
            const ClassId y = (c + 1 + rng.below(2)) % 3;
            w.records.push_back({r, {rng.uniform(), rng.uniform()}, c, y});
        }
        const Point x{rng.uniform(), rng.uniform()};
        const auto rec = as_oracle(w);
        ClassId best = 0;
        for (ClassId y = 1; y < 3; ++y) {
            if (oracle::naive_score(rec, x, y, sigma) > oracle::naive_score(rec, x, best, sigma)) {
                best = y;
            }
        }
        const auto am = argmax_class(w, x);
        if (!am.degenerate) {
            EXPECT_EQ(am.cls, best);
        }
    }
}

TEST(Mp, TwoPointsNeighborly) {
    const auto t = line({0.0, 1.0}, {"A", "B"});
    const auto r = run_mp(t, KernelConfig(0.3), 100);
    EXPECT_TRUE(r.terminated);
    EXPECT_EQ(r.weights.records.size(), 2u);
    EXPECT_EQ(r.trace.prototypes.indices(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(r.trace.passes, 2u);
    EXPECT_FALSE(r.trace.events[0].predicted.has_value());
    EXPECT_EQ(r.weights.records[0].y, ClassId{1});  // first class other than A
}

TEST(Mp, SingleClassOneUpdate) {
    const auto t = line({0.0, 4.0, 2.0}, {"A", "A", "A"});
    const auto r = run_mp(t, KernelConfig(1.0), 10);
    EXPECT_TRUE(r.terminated);
    ASSERT_EQ(r.weights.records.size(), 1u);
    EXPECT_FALSE(r.weights.records[0].y.has_value());
    EXPECT_EQ(r.trace.events.size(), 1u);
}

TEST(Mp, PassBudgetReportsPartialTrace) {
    const auto t = line({0.0, 5.0, 6.0}, {"A", "A", "B"});
    const auto r = run_mp(t, KernelConfig(0.2), 1);
    EXPECT_FALSE(r.terminated);
    EXPECT_EQ(r.trace.passes, 1u);
    EXPECT_EQ(r.trace.events.size(), 2u);
}

TEST(Mp, MatchesCnnUnderCertifiedBandwidth) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto t = generate_uniform(seed, 5 + seed % 26, 1 + seed % 3, 2 + seed % 3);
        const auto cert = sufficient_sigma(t);
        const auto mp = run_mp(t, KernelConfig(cert.sigma_star / 2.0), 1000);
        const auto cnn = run_cnn(t);
        ASSERT_TRUE(mp.terminated);
        EXPECT_EQ(mp.trace.events, cnn.events) << "seed " << seed;
        EXPECT_EQ(mp.trace.prototypes.indices(), cnn.prototypes.indices());
        EXPECT_EQ(mp.trace.passes, cnn.passes);
        // Restricted: no source index updated twice.
        EXPECT_EQ(mp.weights.records.size(), mp.trace.prototypes.size());
    }
}

TEST(Mp, WideBandwidthCanDiverge) {
    // At a bandwidth far above the certificate the perceptron is no longer
    // the nearest-neighbor rule; it still terminates on separable data.
    const auto t = line({0.0, 1.0, 2.5}, {"A", "B", "B"});
    const auto mp = run_mp(t, KernelConfig(100.0), 10000);
    EXPECT_TRUE(mp.terminated);
    for (const auto& p : t.points()) {
        EXPECT_EQ(argmax_class(mp.weights, p.coords).cls, p.label);
    }
}
