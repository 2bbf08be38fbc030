#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pagemig/errors.hpp"
#include "pagemig/generators.hpp"
#include "pagemig/harness.hpp"
#include "pagemig/offline_solver.hpp"
#include "pagemig/simulation.hpp"
#include "pagemig/strategies.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace pagemig;

namespace {

// Values cross the boundary as plain Python data: labels are ints, planar
// points are (x, y) pairs, structured results are dicts.
nlohmann::json to_native(py::handle obj) {
  const auto json = py::module_::import("json");
  return nlohmann::json::parse(json.attr("dumps")(obj).cast<std::string>());
}

py::object to_python(const nlohmann::json& j) {
  const auto json = py::module_::import("json");
  return json.attr("loads")(j.dump());
}

Point to_point(py::handle obj) { return point_from_json(to_native(obj)); }

RequestSequence to_sequence(py::handle start, py::handle requests) {
  RequestSequence seq;
  seq.start = to_point(start);
  for (auto item : requests) {
    seq.items.push_back(to_point(item));
  }
  return seq;
}

py::object sequence_to_python(const RequestSequence& seq) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& p : seq.items) {
    items.push_back(point_to_json(p));
  }
  return to_python({{"start", point_to_json(seq.start)}, {"requests", items}});
}

py::object pair_to_python(const PredictionPair& pair) {
  py::dict d;
  d["actual"] = sequence_to_python(pair.actual());
  d["predicted"] = sequence_to_python(pair.predicted());
  return d;
}

PredictionPair to_pair(py::handle start, py::handle actual, py::handle predicted) {
  return PredictionPair(to_sequence(start, actual), to_sequence(start, predicted));
}

py::dict row_to_python(const ResultRow& row) {
  py::dict d;
  d["instance_id"] = row.instance_id;
  d["dataset"] = row.dataset;
  d["strategy"] = row.strategy;
  d["seed"] = row.seed;
  d["D"] = row.D;
  d["sigma_or_q"] = row.sigma_or_q;
  d["runs"] = row.runs;
  d["total_cost"] = row.total_cost;
  d["cost_std"] = row.cost_std;
  d["move_cost"] = row.move_cost;
  d["serve_cost"] = row.serve_cost;
  d["switch_time"] = row.switch_time;
  d["ratio"] = row.ratio;
  d["within_bound"] = row.within_bound;
  return d;
}

Branch to_branch(const std::string& name) {
  if (name == "a") return Branch::kA;
  if (name == "b") return Branch::kB;
  throw ParameterError("branch must be 'a' or 'b', got '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_pagemig, m) {
  m.doc() = "Page migration with predictions";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<ShapeError>(m, "ShapeError", base);
  py::register_exception<BoundsError>(m, "BoundsError", base);
  py::register_exception<SizeError>(m, "SizeError", base);
  py::register_exception<StateError>(m, "StateError", base);
  py::register_exception<ParameterError>(m, "ParameterError", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<ReportError>(m, "ReportError", base);

  py::class_<Metric>(m, "Metric")
      .def_static("uniform", &Metric::uniform, "size"_a = py::none())
      .def_static("euclidean2d", &Metric::euclidean2d)
      .def_static("explicit", &Metric::explicit_matrix, "matrix"_a)
      .def_property_readonly("kind", [](const Metric& self) { return to_string(self.kind()); })
      .def_property_readonly("size", &Metric::size)
      .def("distance", [](const Metric& self, py::handle p, py::handle q) {
        return self.distance(to_point(p), to_point(q));
      })
      .def("__repr__", [](const Metric& self) { return metric_to_json(self).dump(); });

  m.def(
      "optimal_schedule",
      [](py::handle start, py::handle requests, const Metric& metric, double D) {
        return to_python(to_json(optimal_schedule(to_sequence(start, requests), metric, D)));
      },
      "start"_a, "requests"_a, "metric"_a, "D"_a);

  m.def(
      "simulate",
      [](const std::string& strategy, py::handle start, py::handle actual, py::handle predicted,
         const Metric& metric, double D, double q, double epsilon, std::uint64_t seed) {
        const auto pair = to_pair(start, actual, predicted);
        const StrategySpec spec{strategy, {{"q", q}, {"epsilon", epsilon}}};
        auto alg = make_strategy(spec, pair, metric, D, seed);
        auto out = to_json(run(*alg, pair.actual(), metric, D, seed));
        out["opt_cost"] = optimal_schedule(pair.actual(), metric, D).total_cost;
        return to_python(out);
      },
      "strategy"_a, "start"_a, "actual"_a, "predicted"_a, "metric"_a, "D"_a, "q"_a = 0.05,
      "epsilon"_a = 1.0, "seed"_a = 0);

  m.def(
      "coinflip_expected_cost",
      [](py::handle start, py::handle requests, const Metric& metric, double D) {
        return coinflip_expected_cost(to_sequence(start, requests), metric, D);
      },
      "start"_a, "requests"_a, "metric"_a, "D"_a);

  m.def(
      "check_assumption",
      [](py::handle start, py::handle actual, py::handle predicted, double D, double q,
         double epsilon) {
        return to_python(
            to_json(check_pair(to_pair(start, actual, predicted), AssumptionParams(D, q, epsilon))));
      },
      "start"_a, "actual"_a, "predicted"_a, "D"_a, "q"_a, "epsilon"_a = 1.0);

  m.def("line_process", [](std::size_t n) { return sequence_to_python(line_process(n)); },
        "n"_a);
  m.def(
      "brownian_process",
      [](std::size_t n, std::uint64_t seed) { return sequence_to_python(brownian_process(n, seed)); },
      "n"_a, "seed"_a);
  m.def(
      "gaussian_perturb",
      [](py::handle start, py::handle requests, double sigma, std::uint64_t seed) {
        return sequence_to_python(gaussian_perturb(to_sequence(start, requests), sigma, seed));
      },
      "start"_a, "requests"_a, "sigma"_a, "seed"_a);
  m.def(
      "lower_bound_instance",
      [](double D, double q, const std::string& branch) {
        return pair_to_python(lower_bound_instance(D, q, to_branch(branch)));
      },
      "D"_a, "q"_a, "branch"_a);

  m.def("derive_seed", &derive_seed, "master"_a, "tag"_a, "a"_a = 0, "b"_a = 0);
  m.attr("CSV_HEADER") = kCsvHeader;

  m.def(
      "compare",
      [](py::handle config_obj) {
        const auto config = config_from_json(to_native(config_obj));
        std::vector<ResultRow> rows;
        {
          py::gil_scoped_release release;
          rows = compare(config);
        }
        const bool ok = apply_bounds(config, rows);
        std::ostringstream csv;
        write_csv(csv, rows);
        py::list out;
        for (const auto& row : rows) {
          out.append(row_to_python(row));
        }
        py::dict result;
        result["rows"] = out;
        result["csv"] = csv.str();
        result["all_within_bounds"] = ok;
        return result;
      },
      "config"_a);

  m.def(
      "replay",
      [](py::handle config_obj, std::size_t row) {
        return csv_line(replay_row(config_from_json(to_native(config_obj)), row));
      },
      "config"_a, "row"_a);

  m.def(
      "evaluate_lower_bound",
      [](double D, double q) { return to_python(to_json(evaluate_lower_bound(D, q))); }, "D"_a,
      "q"_a);

  m.def(
      "evaluate_robust",
      [](std::size_t n, double q, double D, double far, double C, std::size_t seeds,
         std::uint64_t seed) {
        return to_python(to_json(evaluate_robust(n, q, D, far, C, seeds, seed)));
      },
      "n"_a, "q"_a, "D"_a, "far"_a, "C"_a = 30.0, "seeds"_a = 20, "seed"_a = 1);
}
