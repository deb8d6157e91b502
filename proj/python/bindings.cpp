#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "coevo/analysis.hpp"
#include "coevo/config.hpp"
#include "coevo/harness.hpp"
#include "coevo/netgen.hpp"

namespace py = pybind11;
using namespace coevo;

namespace {

RunConfig config_from(const std::string& doc) {
    return parse_run_config(nlohmann::json::parse(doc));
}

py::dict simulate(const std::string& doc) {
    const auto cfg = config_from(doc);
    const auto& sc = cfg.scenario;
    std::optional<TwoLayerNetwork> frozen;
    if (sc.freeze_network) frozen = build_scenario(sc).network;
    ReplicateRun rr;
    {
        py::gil_scoped_release release;
        rr = run_replicate(sc, sc.lambda, sc.mu, 0, frozen ? &*frozen : nullptr, cfg.snapshot_every);
    }
    py::list t, ax, ay;
    for (const auto& s : rr.run.series) {
        t.append(s.t);
        ax.append(s.avg_x);
        ay.append(s.avg_y);
    }
    py::dict out;
    out["t"] = t;
    out["avg_x"] = ax;
    out["avg_y"] = ay;
    out["x"] = std::vector<int>(rr.run.final_state.x.begin(), rr.run.final_state.x.end());
    out["y"] = rr.run.final_state.y;
    out["regime"] = std::string(to_string(rr.outcome.regime));
    out["seed"] = rr.outcome.seed;
    return out;
}

py::dict estimate_threshold(const std::string& doc, std::size_t threads) {
    const auto cfg = config_from(doc);
    ExecutionOptions exec;
    exec.threads = threads;
    ThresholdEstimate est;
    {
        py::gil_scoped_release release;
        est = lambda_sweep(cfg.scenario, cfg.lambda_grid, exec);
    }
    py::dict out;
    out["lambda_hat"] = est.lambda_hat;
    out["grid"] = est.grid;
    out["variance"] = est.variance;
    out["mean_fraction"] = est.mean_fraction;
    out["adoption_fraction"] = est.adoption_fraction;
    return out;
}

py::dict theory(std::size_t d, double alpha, double lambda) {
    py::dict out;
    const auto ls = lambda_star(d, alpha);
    out["d_star"] = d;
    out["lambda_star"] = ls ? py::cast(*ls) : py::none();
    out["paradigm_shift_excluded"] = ls && lambda < *ls;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Coevolving opinions and actions on two-layer networks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);

    m.def("lambda_star", &lambda_star, py::arg("d_star"), py::arg("alpha"),
          "Commitment threshold below which the status quo cannot be overturned, or None");
    m.def("best_response_threshold", &best_response_threshold, py::arg("lam"), py::arg("y"), py::arg("alpha"));
    m.def("logistic", &logistic, py::arg("z"));
    m.def("classify_regime",
          [](double x, double y, double band) { return std::string(to_string(classify_regime(x, y, band))); },
          py::arg("avg_x"), py::arg("avg_y"), py::arg("band") = kDefaultPlateauBand);
    m.def(
        "generate",
        [](const std::string& family, std::size_t n, std::size_t d, double p, std::uint64_t seed) {
            return generate({parse_family(family), n, d, p}, seed).edges();
        },
        py::arg("family"), py::arg("n"), py::arg("d"), py::arg("p") = 0.2, py::arg("seed") = 1,
        "Edge list of one influence-layer realization");
    m.def(
        "expected_lambda_star",
        [](const std::string& family, std::size_t n, std::size_t d, double p, double alpha, std::size_t realizations,
           std::uint64_t seed) {
            const auto s = expected_lambda_star({parse_family(family), n, d, p}, alpha, realizations, seed);
            py::dict out;
            out["mean_lambda_star"] = s.mean_lambda_star;
            out["mean_d_star"] = s.mean_d_star;
            out["not_applicable"] = s.not_applicable;
            out["realizations"] = s.realizations;
            return out;
        },
        py::arg("family"), py::arg("n"), py::arg("d"), py::arg("p") = 0.2, py::arg("alpha") = 0.5,
        py::arg("realizations") = 1000, py::arg("seed") = 1);
    m.def("theory", &theory, py::arg("d_star"), py::arg("alpha"), py::arg("lam"));
    m.def("_simulate", &simulate, py::arg("config_json"));
    m.def("_estimate_threshold", &estimate_threshold, py::arg("config_json"), py::arg("threads") = 1);
    m.def("_resolve", [](const std::string& doc) { return to_json(config_from(doc)).dump(); }, py::arg("config_json"));
}
