// cnnbound: command-line experiments for condensed nearest neighbor, the
// kernel perceptron equivalence, and certified prototype-count bounds.
//
// Exit status: 0 success / verdict pass, 1 verdict fail, 2 usage or input error.

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cnnbound/cnnbound.hpp"

namespace {

using namespace cnnbound;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) {
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Input {
    Dataset data;
    Json fingerprint;
};

Input load_input(const std::string& path, const std::string& label) {
    const auto bytes = read_file(path);
    return {parse_csv(bytes, label, path), Json{{"path", path}, {"sha256", sha256_hex(bytes)}}};
}

// Self-describing report: replaying `argv` on the fingerprinted input
// reproduces `results` (everything except wall_clock_seconds).
class Report {
public:
    Report(std::string command, const std::vector<std::string>& argv)
        : start_(std::chrono::steady_clock::now()) {
        json_["command"] = std::move(command);
        json_["argv"] = argv;
        json_["tool_version"] = kVersion;
        json_["input"] = nullptr;
        json_["parameters"] = Json::object();
        json_["results"] = Json::object();
    }

    Json& operator[](const char* key) { return json_[key]; }

    void write(const std::string& path) {
        if (path.empty()) {
            return;
        }
        json_["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::ofstream out(path);
        if (!out) {
            throw InputError("cannot write report " + path);
        }
        out << json_.dump(2) << '\n';
    }

private:
    Json json_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw InputError("cannot parse sigma grid value '" + item + "'");
        }
    }
    if (out.empty()) {
        throw InputError("sigma grid is empty");
    }
    return out;
}

// sigma = sigma_star / 2 from the analytic certificate.
double default_sigma(const Dataset& data) { return sufficient_sigma(data).sigma_star / 2.0; }

struct CommonOptions {
    std::string dataset;
    std::string label = "label";
    std::string report;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool dataset_required = true) {
    auto* opt = cmd->add_option("dataset", o.dataset, "Training CSV with a header row");
    if (dataset_required) {
        opt->required();
    }
    cmd->add_option("--label", o.label, "Label column name")->capture_default_str();
    cmd->add_option("--report", o.report, "Write a JSON experiment report to this path");
}

// ---------------------------------------------------------------- gen

struct GenOptions {
    std::string kind = "blobs";
    std::uint64_t seed = 1;
    std::size_t n_per_class = 50;
    std::string centers = "0,0:A;10,10:B";
    double spread = 1.0;
    std::size_t n = 50;
    std::size_t dim = 2;
    std::size_t classes = 2;
    std::string out;
};

int cmd_gen(const GenOptions& o) {
    const auto data = o.kind == "uniform" ? generate_uniform(o.seed, o.n, o.dim, o.classes)
                                          : generate_blobs(o.seed, o.n_per_class, parse_centers(o.centers), o.spread);
    if (o.out.empty()) {
        std::cout << to_csv(data);
    } else {
        write_csv(data, o.out);
        std::cout << "wrote " << data.size() << " points to " << o.out << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- cnn

struct CnnOptions {
    CommonOptions common;
    std::optional<std::uint64_t> shuffle_seed;
    std::string prototypes_csv;
    std::string trace_json;
};

int cmd_cnn(const CnnOptions& o, const std::vector<std::string>& argv) {
    auto in = load_input(o.common.dataset, o.common.label);
    const auto& t = in.data;
    const auto order = o.shuffle_seed ? shuffled_order(t.size(), *o.shuffle_seed) : identity_order(t.size());
    const auto trace = run_cnn(t, order);

    Report report("cnn", argv);
    report["input"] = in.fingerprint;
    report["parameters"] = {{"shuffle_seed", o.shuffle_seed ? Json(*o.shuffle_seed) : Json(nullptr)}};
    report["results"] = {{"points", t.size()},
                         {"prototype_count", trace.prototypes.size()},
                         {"consistent", is_consistent(trace.prototypes, t)},
                         {"trace", to_json(trace)}};
    report.write(o.common.report);

    if (!o.trace_json.empty()) {
        std::ofstream(o.trace_json) << to_json(trace).dump(2) << '\n';
    }
    if (!o.prototypes_csv.empty()) {
        std::vector<LabeledPoint> kept;
        for (auto i : trace.prototypes.indices()) {
            kept.push_back(t[i]);
        }
        write_csv(Dataset(kept, t.classes()), o.prototypes_csv, o.common.label);
    }

    std::cout << "points: " << t.size() << '\n'
              << "prototypes: " << trace.prototypes.size() << '\n'
              << "passes: " << trace.passes << '\n'
              << "indices:";
    for (auto i : trace.prototypes.indices()) {
        std::cout << ' ' << i;
    }
    std::cout << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- mp

struct MpOptions {
    CommonOptions common;
    std::optional<double> sigma;
    std::size_t max_passes = 10000;
    std::string weights_json;
};

int cmd_mp(const MpOptions& o, const std::vector<std::string>& argv) {
    auto in = load_input(o.common.dataset, o.common.label);
    const auto& t = in.data;
    const double sigma = o.sigma ? *o.sigma : default_sigma(t);
    const auto r = run_mp(t, KernelConfig(sigma), o.max_passes);

    Report report("mp", argv);
    report["input"] = in.fingerprint;
    report["parameters"] = {{"sigma", sigma}, {"max_passes", o.max_passes}};
    report["results"] = {{"updates", r.weights.records.size()},
                         {"terminated", r.terminated},
                         {"trace", to_json(r.trace)},
                         {"weights", to_json(r.weights, t)}};
    report.write(o.common.report);
    if (!o.weights_json.empty()) {
        std::ofstream(o.weights_json) << to_json(r.weights, t).dump(2) << '\n';
    }

    std::cout << "sigma: " << sigma << '\n'
              << "updates: " << r.weights.records.size() << '\n'
              << "passes: " << r.trace.passes << '\n'
              << "terminated: " << (r.terminated ? "true" : "false") << '\n';
    if (!r.terminated) {
        std::cerr << "pass budget of " << o.max_passes << " exhausted; trace is partial\n";
        return kExitFail;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- equiv

struct EquivOutcome {
    bool identical;
    bool restricted;
    std::size_t cnn_updates;
    std::size_t mp_updates;
    double sigma;
};

EquivOutcome compare_traces(const Dataset& t, std::optional<double> sigma_opt) {
    const double sigma = sigma_opt ? *sigma_opt : default_sigma(t);
    const auto cnn = run_cnn(t);
    const auto mp = run_mp(t, KernelConfig(sigma), 10 * t.size() + 10);
    const bool identical = mp.terminated && mp.trace.events == cnn.events &&
                           mp.trace.prototypes.indices() == cnn.prototypes.indices();
    return {identical, mp.weights.records.size() == mp.trace.prototypes.size(), cnn.events.size(),
            mp.weights.records.size(), sigma};
}

struct EquivOptions {
    CommonOptions common;
    std::optional<double> sigma;
    std::size_t fuzz = 0;
    std::uint64_t seed = 1;
    std::size_t max_n = 30;
};

int cmd_equiv(const EquivOptions& o, const std::vector<std::string>& argv) {
    Report report("equiv", argv);
    if (o.fuzz > 0) {
        std::size_t passed = 0;
        Json runs = Json::array();
        for (std::size_t k = 0; k < o.fuzz; ++k) {
            const std::uint64_t seed = o.seed + k;
            Rng rng(seed);
            const auto n = 2 + rng.below(o.max_n - 1);
            const auto d = 1 + rng.below(3);
            const auto c = 2 + rng.below(3);
            const auto t = generate_uniform(seed, n, d, c);
            const auto r = compare_traces(t, o.sigma);
            const bool ok = r.identical && r.restricted;
            passed += ok ? 1 : 0;
            runs.push_back({{"seed", seed}, {"n", n}, {"dim", d}, {"classes", c}, {"sigma", r.sigma},
                            {"updates", r.cnn_updates}, {"pass", ok}});
        }
        report["parameters"] = {{"fuzz", o.fuzz}, {"seed", o.seed}, {"max_n", o.max_n}};
        report["results"] = {{"passed", passed}, {"runs", runs}};
        report.write(o.common.report);
        const bool all = passed == o.fuzz;
        std::cout << passed << "/" << o.fuzz << (all ? " PASS" : " FAIL") << '\n';
        return all ? kExitOk : kExitFail;
    }
    if (o.common.dataset.empty()) {
        throw InputError("equiv needs a dataset or --fuzz N");
    }
    auto in = load_input(o.common.dataset, o.common.label);
    const auto r = compare_traces(in.data, o.sigma);
    const bool ok = r.identical && r.restricted;
    report["input"] = in.fingerprint;
    report["parameters"] = {{"sigma", r.sigma}};
    report["results"] = {{"identical_traces", r.identical},
                         {"restricted", r.restricted},
                         {"cnn_updates", r.cnn_updates},
                         {"mp_updates", r.mp_updates},
                         {"verdict", ok ? "PASS" : "FAIL"}};
    report.write(o.common.report);
    std::cout << "sigma: " << r.sigma << '\n'
              << "cnn updates: " << r.cnn_updates << '\n'
              << "mp updates: " << r.mp_updates << '\n'
              << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------- bound

struct BoundOptions {
    CommonOptions common;
    std::string sigma_grid;
    double tol = 1e-8;
    std::size_t max_iters = 100000;
};

int cmd_bound(const BoundOptions& o, const std::vector<std::string>& argv) {
    auto in = load_input(o.common.dataset, o.common.label);
    const auto& t = in.data;
    const MarginOptions mopt{o.tol, o.max_iters, false};

    std::vector<double> grid;
    if (!o.sigma_grid.empty()) {
        grid = parse_grid(o.sigma_grid);
    } else if (t.num_classes() < 2) {
        grid = {1.0};
    } else {
        grid = default_sigma_grid(sufficient_sigma(t).sigma_star);
    }
    const auto res = bound_infimum(t, grid, mopt);

    Json evaluated = Json::array();
    for (const auto& r : res.evaluated) {
        evaluated.push_back(to_json(r));
    }
    Report report("bound", argv);
    report["input"] = in.fingerprint;
    report["parameters"] = {{"sigma_grid", grid}, {"tol", o.tol}, {"max_iters", o.max_iters}};
    report["results"] = {{"best", to_json(res.best)}, {"evaluated", evaluated}, {"rejected", res.rejected}};
    report.write(o.common.report);

    std::cout << to_json(res.best).dump(2) << '\n';
    return res.best.satisfied ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------- neighborly

struct NeighborlyOptions {
    CommonOptions common;
    std::optional<double> sigma;
    std::string mode = "exhaustive";
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    std::size_t cap = 8;
};

int cmd_neighborly(const NeighborlyOptions& o, const std::vector<std::string>& argv) {
    auto in = load_input(o.common.dataset, o.common.label);
    const auto& t = in.data;
    Report report("neighborly", argv);
    report["input"] = in.fingerprint;
    report["parameters"] = {{"sigma", o.sigma ? Json(*o.sigma) : Json(nullptr)},
                            {"mode", o.mode},
                            {"seed", o.seed},
                            {"trials", o.trials},
                            {"cap", o.cap}};
    const ExhaustiveMode exhaustive{o.cap};

    if (!o.sigma) {
        SigmaCertificate cert;
        try {
            cert = sufficient_sigma(t);
            if (t.size() <= o.cap) {
                cert.verified = verify_neighborly(t, KernelConfig(cert.sigma_star / 2.0), exhaustive).pass;
            }
        } catch (const CertificateUnavailable& e) {
            if (t.size() > o.cap) {
                throw;
            }
            std::cerr << e.what() << "\nfalling back to empirical bisection\n";
            const double diameter = std::sqrt(t.squared_diameter());
            cert = empirical_sigma(t, 1e-6 * diameter, 10.0 * diameter, 40, exhaustive);
        }
        report["results"] = {{"certificate", to_json(cert)}};
        report.write(o.common.report);
        std::cout << to_json(cert).dump(2) << '\n';
        return kExitOk;
    }

    const KernelConfig kernel(*o.sigma);
    VerifyResult r;
    if (o.mode == "exhaustive") {
        r = verify_neighborly(t, kernel, exhaustive);
    } else if (o.mode == "sampled") {
        r = verify_neighborly(t, kernel, SampledMode{o.seed, o.trials});
    } else {
        throw InputError("unknown mode '" + o.mode + "' (expected exhaustive or sampled)");
    }
    report["results"] = to_json(r, t);
    report.write(o.common.report);
    std::cout << (r.pass ? "PASS" : "FAIL") << " (" << r.checked << " checks)\n";
    if (r.violation) {
        std::cout << to_json(*r.violation, t).dump(2) << '\n';
    }
    return r.pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------- online

struct OnlineOptions {
    std::string scenario = "overlapping";
    std::string centers;
    double spread = 1.0;
    std::uint64_t seed = 1;
    std::size_t items = 10000;
    std::size_t checkpoints = 10;
    std::string out;
    std::string report;
};

int cmd_online(const OnlineOptions& o, const std::vector<std::string>& argv) {
    std::string centers = o.centers;
    if (centers.empty()) {
        if (o.scenario == "overlapping") {
            centers = "0,0:A;0,0:B";
        } else if (o.scenario == "separated") {
            centers = "0,0:A;20,0:B";
        } else {
            throw InputError("unknown scenario '" + o.scenario + "' (expected overlapping or separated)");
        }
    }
    BlobStream stream(o.seed, parse_centers(centers), o.spread);
    const PointStream next = [&stream]() -> std::optional<LabeledPoint> { return stream.next(); };
    const auto cps = even_checkpoints(o.items, o.checkpoints);
    const auto r = run_cnn_online(next, o.items, cps);

    std::ostringstream csv;
    csv << "items_seen,prototypes\n";
    for (const auto& s : r.curve) {
        csv << s.items_seen << ',' << s.prototypes << '\n';
    }
    if (o.out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream(o.out) << csv.str();
    }

    Json curve = Json::array();
    for (const auto& s : r.curve) {
        curve.push_back({s.items_seen, s.prototypes});
    }
    Report report("online", argv);
    report["parameters"] = {{"centers", centers}, {"spread", o.spread}, {"seed", o.seed},
                            {"items", o.items}, {"checkpoints", cps}};
    report["results"] = {{"curve", curve},
                         {"items_seen", r.items_seen},
                         {"prototypes", r.prototypes},
                         {"skipped_conflicts", r.skipped_conflicts}};
    report.write(o.report);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Condensed nearest neighbor prototype bounds via the kernel perceptron"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset as CSV");
    gen_cmd->add_option("--kind", gen.kind, "blobs or uniform")->check(CLI::IsMember({"blobs", "uniform"}));
    gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
    gen_cmd->add_option("--n-per-class", gen.n_per_class, "Samples per blob center")->capture_default_str();
    gen_cmd->add_option("--centers", gen.centers, "Blob centers as 'x,y:LABEL;...'")->capture_default_str();
    gen_cmd->add_option("--spread", gen.spread, "Blob standard deviation")->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Uniform: number of points")->capture_default_str();
    gen_cmd->add_option("--dim", gen.dim, "Uniform: dimension")->capture_default_str();
    gen_cmd->add_option("--classes", gen.classes, "Uniform: number of classes")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output CSV (stdout when omitted)");

    CnnOptions cnn;
    auto* cnn_cmd = app.add_subcommand("cnn", "Run condensed nearest neighbor");
    add_common(cnn_cmd, cnn.common);
    cnn_cmd->add_option("--shuffle-seed", cnn.shuffle_seed, "Scan in a seeded random order");
    cnn_cmd->add_option("--prototypes-csv", cnn.prototypes_csv, "Write the prototype set as CSV");
    cnn_cmd->add_option("--trace-json", cnn.trace_json, "Write the update trace as JSON");

    MpOptions mp;
    auto* mp_cmd = app.add_subcommand("mp", "Run the multiclass Gaussian-kernel perceptron");
    add_common(mp_cmd, mp.common);
    mp_cmd->add_option("--sigma", mp.sigma, "Kernel bandwidth (default: half the certified threshold)");
    mp_cmd->add_option("--max-passes", mp.max_passes)->capture_default_str();
    mp_cmd->add_option("--weights-json", mp.weights_json, "Write the dual weight vector as JSON");

    EquivOptions equiv;
    auto* equiv_cmd = app.add_subcommand("equiv", "Check that CNN and the perceptron make identical updates");
    add_common(equiv_cmd, equiv.common, false);
    equiv_cmd->add_option("--sigma", equiv.sigma, "Kernel bandwidth (default: half the certified threshold)");
    equiv_cmd->add_option("--fuzz", equiv.fuzz, "Check N random datasets instead of a file");
    equiv_cmd->add_option("--seed", equiv.seed, "First fuzz seed")->capture_default_str();
    equiv_cmd->add_option("--max-n", equiv.max_n, "Largest fuzz dataset")->capture_default_str()->check(
        CLI::Range(std::size_t{2}, std::size_t{100000}));

    BoundOptions bound;
    auto* bound_cmd = app.add_subcommand("bound", "Certified R^2/delta^2 bound on the CNN prototype count");
    add_common(bound_cmd, bound.common);
    bound_cmd->add_option("--sigma-grid", bound.sigma_grid, "Comma-separated bandwidths (default: 16-point geometric grid)");
    bound_cmd->add_option("--tol", bound.tol, "Solver duality-gap tolerance")->capture_default_str();
    bound_cmd->add_option("--max-iters", bound.max_iters)->capture_default_str();

    NeighborlyOptions nb;
    auto* nb_cmd = app.add_subcommand("neighborly", "Bandwidth certificate or neighborliness verification");
    add_common(nb_cmd, nb.common);
    nb_cmd->add_option("--sigma", nb.sigma, "Verify at this bandwidth (omit to print the certificate)");
    nb_cmd->add_option("--mode", nb.mode, "exhaustive or sampled")->capture_default_str();
    nb_cmd->add_option("--seed", nb.seed)->capture_default_str();
    nb_cmd->add_option("--trials", nb.trials)->capture_default_str();
    nb_cmd->add_option("--cap", nb.cap, "Largest dataset for exhaustive mode")->capture_default_str();

    OnlineOptions online;
    auto* online_cmd = app.add_subcommand("online", "Online CNN growth curve as CSV");
    online_cmd->add_option("--scenario", online.scenario, "overlapping or separated")->capture_default_str();
    online_cmd->add_option("--centers", online.centers, "Custom blob centers (overrides --scenario)");
    online_cmd->add_option("--spread", online.spread)->capture_default_str();
    online_cmd->add_option("--seed", online.seed)->capture_default_str();
    online_cmd->add_option("--items", online.items)->capture_default_str();
    online_cmd->add_option("--checkpoints", online.checkpoints, "Number of evenly spaced checkpoints")->capture_default_str();
    online_cmd->add_option("--out", online.out, "Output CSV (stdout when omitted)");
    online_cmd->add_option("--report", online.report, "Write a JSON experiment report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen_cmd) return cmd_gen(gen);
        if (*cnn_cmd) return cmd_cnn(cnn, args);
        if (*mp_cmd) return cmd_mp(mp, args);
        if (*equiv_cmd) return cmd_equiv(equiv, args);
        if (*bound_cmd) return cmd_bound(bound, args);
        if (*nb_cmd) return cmd_neighborly(nb, args);
        if (*online_cmd) return cmd_online(online, args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
