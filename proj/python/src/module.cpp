#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cnnbound/cnnbound.hpp"

namespace py = pybind11;
using namespace cnnbound;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

KernelConfig kernel_for(const Dataset& t, std::optional<double> sigma) {
    return KernelConfig(sigma ? *sigma : sufficient_sigma(t).sigma_star / 2.0);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Condensed nearest neighbor, the Gaussian-kernel multiclass perceptron and margin bounds";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<std::vector<Point>, const std::vector<std::string>&>(), py::arg("points"), py::arg("labels"))
        .def("__len__", &Dataset::size)
        .def_property_readonly("dim", &Dataset::dim)
        .def_property_readonly("classes", &Dataset::classes)
        .def_property_readonly("points", [](const Dataset& t) {
            std::vector<Point> out;
            for (const auto& p : t.points()) {
                out.push_back(p.coords);
            }
            return out;
        })
        .def_property_readonly("labels", [](const Dataset& t) {
            std::vector<std::string> out;
            for (const auto& p : t.points()) {
                out.push_back(t.class_name(p.label));
            }
            return out;
        })
        .def("to_csv", [](const Dataset& t, const std::string& label) { return to_csv(t, label); },
             py::arg("label") = "label");

    m.def("load_csv", [](const std::string& path, const std::string& label) { return load_csv(path, label); },
          py::arg("path"), py::arg("label") = "label");
    m.def("parse_csv", [](const std::string& text, const std::string& label) { return parse_csv(text, label); },
          py::arg("text"), py::arg("label") = "label");
    m.def("generate_uniform", &generate_uniform, py::arg("seed"), py::arg("n"), py::arg("dim"), py::arg("num_classes"));
    m.def("generate_blobs",
          [](std::uint64_t seed, std::size_t n_per_class, const std::string& centers, double spread) {
              return generate_blobs(seed, n_per_class, parse_centers(centers), spread);
          },
          py::arg("seed"), py::arg("n_per_class"), py::arg("centers"), py::arg("spread") = 1.0);

    m.def("run_cnn",
          [](const Dataset& t, std::optional<std::uint64_t> shuffle_seed) {
              const auto order = shuffle_seed ? shuffled_order(t.size(), *shuffle_seed) : identity_order(t.size());
              return to_py(to_json(run_cnn(t, order)));
          },
          py::arg("data"), py::arg("shuffle_seed") = py::none());
    m.def("run_mp",
          [](const Dataset& t, std::optional<double> sigma, std::size_t max_passes) {
              const auto r = run_mp(t, kernel_for(t, sigma), max_passes);
              py::dict out;
              out["terminated"] = r.terminated;
              out["trace"] = to_py(to_json(r.trace));
              out["weights"] = to_py(to_json(r.weights, t));
              return out;
          },
          py::arg("data"), py::arg("sigma") = py::none(), py::arg("max_passes") = 1000);

    m.def("sufficient_sigma", [](const Dataset& t) { return to_py(to_json(sufficient_sigma(t))); }, py::arg("data"));
    m.def("verify_neighborly",
          [](const Dataset& t, double sigma, const std::string& mode, std::size_t cap, std::uint64_t seed,
             std::size_t trials) {
              const KernelConfig k(sigma);
              if (mode == "exhaustive") {
                  return to_py(to_json(verify_neighborly(t, k, ExhaustiveMode{cap}), t));
              }
              if (mode == "sampled") {
                  return to_py(to_json(verify_neighborly(t, k, SampledMode{seed, trials}), t));
              }
              throw InputError("unknown mode '" + mode + "' (expected exhaustive or sampled)");
          },
          py::arg("data"), py::arg("sigma"), py::arg("mode") = "exhaustive", py::arg("cap") = 8,
          py::arg("seed") = 0, py::arg("trials") = 1000);

    m.def("margin",
          [](const Dataset& t, double sigma, double tol, std::size_t max_iters) {
              return to_py(to_json(margin(t, KernelConfig(sigma), MarginOptions{tol, max_iters, false})));
          },
          py::arg("data"), py::arg("sigma"), py::arg("tol") = 1e-8, py::arg("max_iters") = 100000);
    m.def("cnn_bound",
          [](const Dataset& t, std::optional<double> sigma, bool allow_uncertified) {
              std::optional<SigmaCertificate> cert;
              if (t.num_classes() > 1) {
                  cert = sufficient_sigma(t);
              }
              const KernelConfig k = sigma ? KernelConfig(*sigma) : kernel_for(t, std::nullopt);
              return to_py(to_json(cnn_bound(t, k, cert, {}, allow_uncertified)));
          },
          py::arg("data"), py::arg("sigma") = py::none(), py::arg("allow_uncertified") = false);
    m.def("bound_infimum",
          [](const Dataset& t, std::optional<std::vector<double>> grid) {
              const auto g = grid ? *grid : default_sigma_grid(sufficient_sigma(t).sigma_star);
              return to_py(to_json(bound_infimum(t, g).best));
          },
          py::arg("data"), py::arg("sigma_grid") = py::none());
}
