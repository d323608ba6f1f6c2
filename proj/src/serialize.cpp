#include "cnnbound/serialize.hpp"

#include <algorithm>

#include "cnnbound/errors.hpp"

namespace cnnbound {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

ClassId class_id(const Dataset& data, const std::string& name) {
    const auto& cs = data.classes();
    const auto it = std::find(cs.begin(), cs.end(), name);
    if (it == cs.end()) {
        throw InputError("unknown class '" + name + "'");
    }
    return static_cast<ClassId>(it - cs.begin());
}

}  // namespace

Json to_json(const UpdateEvent& e, const Dataset& data) {
    return Json{{"pass", e.pass},
                {"index", e.source_index},
                {"c", data.class_name(e.true_class)},
                {"y", e.predicted ? Json(data.class_name(*e.predicted)) : Json(nullptr)}};
}

Json to_json(const UpdateTrace& trace) {
    const auto& data = trace.prototypes.parent();
    Json prototypes = Json::array();
    for (auto i : trace.prototypes.indices()) {
        prototypes.push_back({{"index", i}, {"x", data[i].coords}, {"c", data.class_name(data[i].label)}});
    }
    Json events = Json::array();
    for (const auto& e : trace.events) {
        events.push_back(to_json(e, data));
    }
    return Json{{"passes", trace.passes}, {"prototypes", prototypes}, {"events", events}};
}

Json to_json(const DualWeightVector& w, const Dataset& data) {
    Json records = Json::array();
    for (const auto& r : w.records) {
        records.push_back({{"index", r.index},
                           {"x", r.x},
                           {"c", data.class_name(r.c)},
                           {"y", r.y ? Json(data.class_name(*r.y)) : Json(nullptr)}});
    }
    return Json{{"sigma", w.kernel.sigma()}, {"records", records}};
}

DualWeightVector weights_from_json(const Json& j, const Dataset& data) {
    try {
        DualWeightVector w{KernelConfig(j.at("sigma").get<double>()), data.num_classes(), {}};
        for (const auto& r : j.at("records")) {
            WeightRecord rec{r.at("index").get<std::size_t>(), r.at("x").get<Point>(),
                             class_id(data, r.at("c").get<std::string>()), std::nullopt};
            if (!r.at("y").is_null()) {
                rec.y = class_id(data, r.at("y").get<std::string>());
            }
            w.records.push_back(std::move(rec));
        }
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed weight vector JSON: ") + e.what());
    }
}

Json to_json(const SigmaCertificate& cert) {
    return Json{{"sigma_star", cert.sigma_star},
                {"gamma", cert.gamma},
                {"method", to_string(cert.method)},
                {"verified", cert.verified}};
}

SigmaCertificate certificate_from_json(const Json& j) {
    try {
        SigmaCertificate cert;
        cert.sigma_star = j.at("sigma_star").get<double>();
        cert.gamma = j.at("gamma").get<double>();
        const auto method = j.at("method").get<std::string>();
        if (method == "analytic-sufficient") {
            cert.method = CertificateMethod::AnalyticSufficient;
        } else if (method == "empirical-bisection") {
            cert.method = CertificateMethod::EmpiricalBisection;
        } else {
            throw InputError("unknown certificate method '" + method + "'");
        }
        cert.verified = j.at("verified").get<bool>();
        return cert;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed certificate JSON: ") + e.what());
    }
}

Json to_json(const Violation& v, const Dataset& data) {
    Json wrong = Json::array();
    for (auto c : v.wrong) {
        wrong.push_back(data.class_name(c));
    }
    return Json{{"prototypes", v.prototypes},
                {"wrong", wrong},
                {"query", v.query},
                {"argmax", data.class_name(v.argmax)},
                {"degenerate", v.degenerate},
                {"nearest_class", data.class_name(v.nearest_class)}};
}

Json to_json(const VerifyResult& r, const Dataset& data) {
    return Json{{"pass", r.pass},
                {"checked", r.checked},
                {"violation", r.violation ? to_json(*r.violation, data) : Json(nullptr)}};
}

Json to_json(const BoundReport& r) {
    return Json{{"sigma", r.sigma},
                {"sigma_certified", r.sigma_certified},
                {"R", optional_number(r.radius)},
                {"delta_hat", optional_number(r.delta_hat)},
                {"duality_gap", optional_number(r.duality_gap)},
                {"bound", optional_number(r.bound)},
                {"prototype_count", r.prototype_count},
                {"satisfied", r.satisfied},
                {"vacuous", r.vacuous}};
}

Json to_json(const MarginCertificate& cert) {
    Json support = Json::array();
    for (std::size_t a = 0; a < cert.coefficients.size(); ++a) {
        if (cert.coefficients[a] > 0.0) {
            const auto& e = cert.entries[a];
            support.push_back({{"point", e.point}, {"c", e.c}, {"y", e.y}, {"weight", cert.coefficients[a]}});
        }
    }
    return Json{{"delta_hat", cert.delta_hat},  {"R", cert.radius},
                {"duality_gap", cert.duality_gap}, {"bound", cert.bound},
                {"iterations", cert.iterations}, {"converged", cert.converged},
                {"support", support}};
}

}  // namespace cnnbound
