#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

#include "idlearn/dist_access.hpp"
#include "idlearn/error.hpp"
#include "idlearn/generate.hpp"
#include "idlearn/identify.hpp"
#include "idlearn/io.hpp"
#include "idlearn/learn.hpp"
#include "idlearn/scm_oracle.hpp"
#include "idlearn/verify.hpp"

namespace py = pybind11;
using namespace idlearn;

namespace {

// Python objects cross the boundary as JSON text so the file formats and the
// Python API stay the same thing.
Json from_py(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return parse_json(obj.cast<std::string>());
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return parse_json(text);
}

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::array_t<int> to_array(const SampleSet& s) {
  const auto cols = s.columns().to_vector();
  py::array_t<int> out({s.size(), cols.size()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < s.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) view(r, c) = s.at(r, cols[c]);
  }
  return out;
}

std::shared_ptr<const SampleSet> from_array(const py::array_t<int, py::array::c_style | py::array::forcecast>& a,
                                            const Admg& g) {
  if (a.ndim() != 2 || a.shape(1) != g.size()) {
    throw Error(ErrorCode::parse_error, "samples must be an (m, n) integer array in graph order");
  }
  auto view = a.unchecked<2>();
  auto s = std::make_shared<SampleSet>(g.size(), g.all());
  s->reserve(a.shape(0));
  std::vector<int> row(g.size());
  for (py::ssize_t r = 0; r < a.shape(0); ++r) {
    for (int c = 0; c < g.size(); ++c) {
      const int v = view(r, c);
      if (v < 0 || v >= g.cardinality(c)) {
        throw Error(ErrorCode::parse_error, "sample value out of range for " + g.name(c));
      }
      row[c] = v;
    }
    s->push_back(row);
  }
  return s;
}

class Model {
 public:
  explicit Model(LearnedInterventional li) : li_(std::move(li)) {}

  double eval(const py::dict& values) const {
    Assignment y(li_.graph.size());
    for (auto [k, v] : values) y.set(li_.graph.id(k.cast<std::string>()), v.cast<int>());
    y.validate(li_.graph);
    Assignment outcome(li_.graph.size());
    for (VarId v : li_.outcome()) {
      if (!y.domain().contains(v)) {
        throw Error(ErrorCode::scope_mismatch, "assignment is missing " + li_.graph.name(v));
      }
      outcome.set(v, y.get(v));
    }
    return evaluate_point(li_, outcome);
  }

  py::array_t<int> sample(std::uint64_t seed, std::size_t m) const {
    SampleSet s;
    {
      py::gil_scoped_release release;
      s = idlearn::sample(li_, seed, m);
    }
    return to_array(s);
  }

  std::vector<std::string> columns() const {
    std::vector<std::string> out;
    for (VarId v : li_.outcome()) out.push_back(li_.graph.name(v));
    return out;
  }

  py::object table() const { return to_py(to_json(evaluator_table(li_), li_.graph)); }
  py::object to_dict() const { return to_py(to_json(li_)); }
  const LearnedInterventional& get() const { return li_; }

 private:
  LearnedInterventional li_;
};

LearnConfig config(double epsilon, double delta, double alpha, int threads) {
  LearnConfig cfg;
  cfg.epsilon = epsilon;
  cfg.delta = delta;
  cfg.alpha = alpha;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Identification and learning of interventional distributions";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "identify",
      [](py::object graph, py::object query) {
        const Admg g = admg_from_json(from_py(graph));
        const QuerySpec q = query_from_json(from_py(query), g);
        IdResult r = identify(g, q.x.domain(), q.y);
        if (const auto* est = std::get_if<Estimand>(&r)) return to_py(to_json(*est));
        return to_py(to_json(std::get<HedgeWitness>(r), g));
      },
      py::arg("graph"), py::arg("query"),
      "Estimand dict (identifiable=True) or hedge dict (identifiable=False).");

  m.def(
      "latent_project", [](py::object net) { return to_py(to_json(latent_project(net_from_json(from_py(net))))); },
      py::arg("net"));

  m.def(
      "random_net",
      [](py::object graph, std::uint64_t seed, double gamma) {
        return to_py(to_json(random_net(admg_from_json(from_py(graph)), {seed, gamma, 2})));
      },
      py::arg("graph"), py::arg("seed"), py::arg("gamma") = 0.1);

  m.def(
      "oracle",
      [](py::object net_obj, py::object query) {
        const CausalBayesNet net = net_from_json(from_py(net_obj));
        const Admg g = latent_project(net);
        const QuerySpec q = query_from_json(from_py(query), g);
        return to_py({{"observational", to_json(exact_observational(net), g)},
                      {"interventional", to_json(exact_interventional(net, q.x), g)}});
      },
      py::arg("net"), py::arg("query"));

  m.def(
      "simulate",
      [](py::object net_obj, std::uint64_t seed, std::size_t count) {
        const CausalBayesNet net = net_from_json(from_py(net_obj));
        SampleSet s;
        {
          py::gil_scoped_release release;
          s = sample_observational(net, seed, count);
        }
        return to_array(s);
      },
      py::arg("net"), py::arg("seed"), py::arg("m"),
      "Observational samples as an (m, n) int array, columns in graph order.");

  py::class_<Model>(m, "Model")
      .def("eval", &Model::eval, py::arg("values"), "Probability of a full outcome {name: value}.")
      .def("sample", &Model::sample, py::arg("seed"), py::arg("m"),
           "Draws as an (m, |V \\ X|) int array; see columns.")
      .def_property_readonly("columns", &Model::columns)
      .def("table", &Model::table)
      .def("to_dict", &Model::to_dict)
      .def_static("from_dict", [](py::object d) { return Model(learned_from_json(from_py(d))); });

  m.def(
      "learn",
      [](py::object graph, py::array_t<int, py::array::c_style | py::array::forcecast> samples,
         py::object query, double epsilon, double delta, double alpha, int threads) {
        const Admg g = admg_from_json(from_py(graph));
        const QuerySpec q = query_from_json(from_py(query), g);
        auto data = from_array(samples, g);
        py::gil_scoped_release release;
        return Model(learn(data, g, q.x, config(epsilon, delta, alpha, threads)));
      },
      py::arg("graph"), py::arg("samples"), py::arg("query"), py::arg("epsilon") = 0.05,
      py::arg("delta") = 0.05, py::arg("alpha") = 0.01, py::arg("threads") = 1);

  m.def(
      "learn_exact",
      [](py::object net_obj, py::object query) {
        const CausalBayesNet net = net_from_json(from_py(net_obj));
        const Admg g = latent_project(net);
        const QuerySpec q = query_from_json(from_py(query), g);
        return Model(learn(TableAccess(exact_observational(net)), g, q.x, LearnConfig{}));
      },
      py::arg("net"), py::arg("query"), "Learner run on the exact observational table.");

  m.def(
      "verify",
      [](const Model& model, py::object net) {
        const OracleReport r = compare_to_oracle(model.get(), net_from_json(from_py(net)));
        return to_py(to_json(r, model.get().graph));
      },
      py::arg("model"), py::arg("net"));
}
