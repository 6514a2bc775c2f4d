#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dgdef/complex.hpp"
#include "dgdef/deformations.hpp"
#include "dgdef/errors.hpp"
#include "dgdef/format.hpp"
#include "dgdef/verify.hpp"

namespace py = pybind11;
using namespace dgdef;

namespace {

// Reports cross the boundary as JSON text; the package decodes them.
std::string example_json(const std::string& id, std::optional<int> wordlen, std::optional<std::pair<int, int>> window) {
  return run_example(id, {wordlen, window}).to_json().dump();
}

std::string suite_json(const std::string& name, int trials, std::uint64_t seed) {
  return run_suite(name, trials, seed).to_json().dump();
}

class PyAlgebra {
 public:
  explicit PyAlgebra(AlgPtr a) : a_(std::move(a)) {}
  static PyAlgebra parse(const std::string& text) { return PyAlgebra(parse_algebra(text)); }
  static PyAlgebra load(const std::string& path) { return PyAlgebra(load_algebra(path)); }

  std::string serialize() const { return serialize_algebra(a_); }
  std::vector<std::pair<std::string, int>> generators() const {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& g : a_->generators()) out.emplace_back(g.name, g.degree);
    return out;
  }
  std::string d(const std::string& x) const { return dgdef::d(a_->parse(x)).str(); }
  std::string mul(const std::string& x, const std::string& y) const { return (a_->parse(x) * a_->parse(y)).str(); }
  std::optional<int> degree(const std::string& x) const { return a_->parse(x).degree(); }
  std::map<int, std::size_t> cohomology(int lo, int hi, int wordlen) const {
    return dgdef::cohomology(extract_complex(a_, Truncation::window(lo, hi, wordlen), true)).dims;
  }
  std::map<int, std::size_t> tangent(int depth, const std::vector<int>& degrees, int wordlen) const {
    return tangent_obstruction_dims(a_, depth, degrees, wordlen).dims;
  }
  bool same_presentation(const PyAlgebra& other) const { return dgdef::same_presentation(a_, other.a_); }

 private:
  AlgPtr a_;
};

}  // namespace

PYBIND11_MODULE(_dgdef, m) {
  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      inst.attr("kind") = e.kind();
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  m.def("example_ids", &example_ids);
  m.def("suite_names", &suite_names);
  m.def("run_example_json", &example_json, py::arg("id"), py::arg("max_wordlen") = py::none(),
        py::arg("window") = py::none());
  m.def("run_suite_json", &suite_json, py::arg("name"), py::arg("trials"), py::arg("seed"));
  m.def("trial_seed", &trial_seed);

  py::class_<PyAlgebra>(m, "Algebra")
      .def_static("parse", &PyAlgebra::parse)
      .def_static("load", &PyAlgebra::load)
      .def("serialize", &PyAlgebra::serialize)
      .def("generators", &PyAlgebra::generators)
      .def("d", &PyAlgebra::d)
      .def("mul", &PyAlgebra::mul)
      .def("degree", &PyAlgebra::degree)
      .def("cohomology", &PyAlgebra::cohomology, py::arg("lo"), py::arg("hi"), py::arg("max_wordlen") = 8)
      .def("tangent", &PyAlgebra::tangent, py::arg("depth"), py::arg("degrees"), py::arg("max_wordlen") = 6)
      .def("same_presentation", &PyAlgebra::same_presentation)
      .def("__str__", &PyAlgebra::serialize);
}
