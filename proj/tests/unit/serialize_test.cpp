#include <gtest/gtest.h>

#include "cnnbound/errors.hpp"
#include "cnnbound/serialize.hpp"

using namespace cnnbound;

TEST(Serialize, WeightsRoundTrip) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = generate_uniform(seed, 12, 2, 1 + seed % 3);
        const auto mp = run_mp(t, KernelConfig(0.05 + 0.05 * static_cast<double>(seed)), 1000);
        const auto j = to_json(mp.weights, t);
        EXPECT_EQ(weights_from_json(Json::parse(j.dump()), t), mp.weights);
        ASSERT_TRUE(j.contains("sigma"));
        for (const auto& r : j["records"]) {
            for (const char* key : {"index", "x", "c", "y"}) {
                EXPECT_TRUE(r.contains(key)) << key;
            }
        }
    }
    const auto t = generate_uniform(1, 3, 1, 2);
    EXPECT_THROW(weights_from_json(Json::parse(R"({"sigma": 1})"), t), InputError);
    EXPECT_THROW(weights_from_json(Json::parse(R"({"sigma": 1, "records": [{"index": 0, "x": [0], "c": "zz", "y": null}]})"), t),
                 InputError);
}

TEST(Serialize, CertificateRoundTrip) {
    const SigmaCertificate cert{0.6, 1.0, CertificateMethod::EmpiricalBisection, true};
    const auto j = to_json(cert);
    EXPECT_EQ(j.dump(), R"({"sigma_star":0.6,"gamma":1.0,"method":"empirical-bisection","verified":true})");
    const auto back = certificate_from_json(j);
    EXPECT_EQ(back.sigma_star, cert.sigma_star);
    EXPECT_EQ(back.method, cert.method);
    EXPECT_TRUE(back.verified);
}

TEST(Serialize, BoundReportFields) {
    BoundReport r;
    r.sigma = 0.5;
    r.sigma_certified = true;
    r.radius = 1.5;
    r.prototype_count = 3;
    const auto j = to_json(r);
    const std::vector<std::string> keys{"sigma", "sigma_certified", "R", "delta_hat", "duality_gap",
                                        "bound", "prototype_count", "satisfied"};
    for (const auto& k : keys) {
        EXPECT_TRUE(j.contains(k)) << k;
    }
    EXPECT_TRUE(j["bound"].is_null());
    EXPECT_EQ(j["R"], 1.5);
}

TEST(Serialize, TraceNamesClasses) {
    const Dataset t({{0.0}, {1.0}, {10.0}}, {"A", "A", "B"});
    const auto j = to_json(run_cnn(t));
    EXPECT_EQ(j["passes"], 2);
    EXPECT_EQ(j["events"][0]["y"], nullptr);
    EXPECT_EQ(j["events"][1]["y"], "A");
    EXPECT_EQ(j["prototypes"][1]["index"], 2);
}
