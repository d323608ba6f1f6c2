// Runs the cnnbound executable end to end and checks output and exit status.
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cnnbound/serialize.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(CNNBOUND_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) {
        out += buf.data();
    }
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

fs::path temp(const std::string& name, const std::string& content = "") {
    auto p = fs::temp_directory_path() / ("cnnbound_cli_" + name);
    if (!content.empty()) {
        std::ofstream(p) << content;
    }
    return p;
}

cnnbound::Json read_json(const fs::path& p) {
    std::ifstream in(p);
    return cnnbound::Json::parse(in);
}

}  // namespace

TEST(Cli, CnnThreePointExample) {
    const auto data = temp("three.csv", "x,label\n0,A\n1,A\n10,B\n");
    const auto report = temp("three_report.json");
    const auto r = run("cnn " + data.string() + " --report " + report.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("prototypes: 2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("indices: 0 2"), std::string::npos) << r.out;
    const auto j = read_json(report);
    EXPECT_EQ(j["command"], "cnn");
    EXPECT_EQ(j["input"]["sha256"].get<std::string>().size(), 64u);
    EXPECT_EQ(j["results"]["prototype_count"], 2);
    EXPECT_TRUE(j.contains("wall_clock_seconds"));
    EXPECT_TRUE(j.contains("tool_version"));
}

TEST(Cli, CnnSingleClass) {
    const auto data = temp("single.csv", "a,b,label\n0,0,A\n1,1,A\n2,0,A\n");
    const auto r = run("cnn " + data.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("prototypes: 1"), std::string::npos);
}

TEST(Cli, CnnShuffleStaysConsistent) {
    const auto data = temp("uniform.csv");
    ASSERT_EQ(run("gen --kind uniform --n 60 --classes 3 --seed 4 --out " + data.string()).status, 0);
    for (int seed : {1, 2}) {
        const auto report = temp("shuffle_report.json");
        ASSERT_EQ(run("cnn " + data.string() + " --shuffle-seed " + std::to_string(seed) + " --report " +
                      report.string())
                      .status,
                  0);
        EXPECT_TRUE(read_json(report)["results"]["consistent"].get<bool>());
    }
}

TEST(Cli, ReportsReplayIdentically) {
    const auto data = temp("replay.csv");
    ASSERT_EQ(run("gen --kind uniform --n 30 --seed 9 --out " + data.string()).status, 0);
    const auto a = temp("replay_a.json");
    const auto b = temp("replay_b.json");
    ASSERT_EQ(run("mp " + data.string() + " --report " + a.string()).status, 0);
    ASSERT_EQ(run("mp " + data.string() + " --report " + b.string()).status, 0);
    EXPECT_EQ(read_json(a)["results"], read_json(b)["results"]);
}

TEST(Cli, InputErrorsExitTwo) {
    const auto dup = temp("dup.csv", "x,y,label\n0,0,A\n0,0,B\n");
    EXPECT_EQ(run("cnn " + dup.string()).status, 2);
    EXPECT_EQ(run("cnn /nonexistent/file.csv").status, 2);
    EXPECT_EQ(run("nosuchcommand").status, 2);
    EXPECT_EQ(run("").status, 2);
}

TEST(Cli, EquivPassAndTie) {
    const auto data = temp("blobs.csv");
    ASSERT_EQ(run("gen --n-per-class 10 --centers '0,0:A;5,5:B;0,6:C' --seed 3 --out " + data.string()).status, 0);
    const auto r = run("equiv " + data.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);

    const auto tie = temp("tie.csv", "x,label\n-1,A\n0,B\n1,A\n");
    EXPECT_EQ(run("equiv " + tie.string()).status, 2);
}

TEST(Cli, EquivFuzz) {
    const auto r = run("equiv --fuzz 50");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("50/50 PASS"), std::string::npos) << r.out;
}

TEST(Cli, BoundTwoPointFile) {
    const auto data = temp("two.csv", "x,label\n0,A\n10,B\n");
    const auto r = run("bound " + data.string());
    EXPECT_EQ(r.status, 0);
    const auto j = cnnbound::Json::parse(r.out);
    const double sigma = j["sigma"];
    const double k = std::exp(-100.0 / (2.0 * sigma * sigma));
    EXPECT_NEAR(j["bound"].get<double>() / (2.0 / (1.0 - k)), 1.0, 0.01);
    EXPECT_TRUE(j["satisfied"].get<bool>());
    EXPECT_EQ(j["R"], std::sqrt(2.0));
}

TEST(Cli, BoundSingleClassIsVacuous) {
    const auto data = temp("single_bound.csv", "x,label\n0,A\n3,A\n");
    const auto r = run("bound " + data.string());
    EXPECT_EQ(r.status, 0);
    const auto j = cnnbound::Json::parse(r.out);
    EXPECT_TRUE(j["vacuous"].get<bool>());
    EXPECT_EQ(j["prototype_count"], 1);
}

TEST(Cli, BoundThreeClassBlobs) {
    const auto data = temp("blobs3.csv");
    ASSERT_EQ(run("gen --n-per-class 8 --centers '0,0:A;6,0:B;3,5:C' --seed 2 --out " + data.string()).status, 0);
    const auto r = run("bound " + data.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(cnnbound::Json::parse(r.out)["satisfied"].get<bool>());
}

TEST(Cli, Neighborly) {
    const auto data = temp("nb.csv", "x,label\n0,A\n10,B\n11,B\n");
    const auto r = run("neighborly " + data.string());
    EXPECT_EQ(r.status, 0);
    const auto j = cnnbound::Json::parse(r.out);
    EXPECT_NEAR(j["sigma_star"].get<double>(), 0.6005612043932249, 1e-12);
    EXPECT_TRUE(j["verified"].get<bool>());

    const auto half = run("neighborly " + data.string() + " --sigma 0.30028 --mode exhaustive");
    EXPECT_EQ(half.status, 0);
    EXPECT_NE(half.out.find("PASS"), std::string::npos);

    const auto big = temp("nb_big.csv");
    ASSERT_EQ(run("gen --kind uniform --n 20 --seed 1 --out " + big.string()).status, 0);
    EXPECT_EQ(run("neighborly " + big.string() + " --sigma 0.001 --mode exhaustive").status, 2);
    EXPECT_EQ(run("neighborly " + big.string() + " --sigma 0.001 --mode sampled --trials 50").status, 0);

    const auto wide = temp("nb_wide.csv", "x,label\n0,A\n1,B\n2.5,B\n");
    EXPECT_EQ(run("neighborly " + wide.string() + " --sigma 250").status, 1);
}

TEST(Cli, OnlineCurves) {
    const auto over = run("online --scenario overlapping --items 10000 --checkpoints 5 --seed 1");
    EXPECT_EQ(over.status, 0);
    std::istringstream in(over.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "items_seen,prototypes");
    std::vector<long> sizes;
    while (std::getline(in, line)) {
        sizes.push_back(std::stol(line.substr(line.find(',') + 1)));
    }
    ASSERT_EQ(sizes.size(), 5u);
    for (std::size_t k = 1; k < sizes.size(); ++k) {
        EXPECT_GT(sizes[k], sizes[k - 1]);
    }
    EXPECT_GT(sizes.back(), 2 * sizes.front());

    const auto sep = run("online --scenario separated --items 10000 --checkpoints 10 --seed 1");
    EXPECT_EQ(sep.status, 0);

    const auto none = run("online --items 0");
    EXPECT_EQ(none.status, 0);
    EXPECT_EQ(none.out, "items_seen,prototypes\n");
}
