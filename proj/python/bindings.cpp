// SPDX-License-Identifier: Apache-2.0
#include "wtc/bounds.hpp"
#include "wtc/completion.hpp"
#include "wtc/error.hpp"
#include "wtc/experiment.hpp"
#include "wtc/io.hpp"
#include "wtc/linalg.hpp"
#include "wtc/metrics.hpp"
#include "wtc/sampling.hpp"
#include "wtc/synthetic.hpp"
#include "wtc/tvmin.hpp"
#include "wtc/weights.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace wtc;

namespace {

// Column-major (Fortran) layout matches the mode-0-fastest tensor layout.
using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;
using BArray = py::array_t<bool, py::array::f_style | py::array::forcecast>;

Shape shape_of(const py::array& a) {
  std::vector<Index> dims;
  for (py::ssize_t k = 0; k < a.ndim(); ++k) dims.push_back(static_cast<Index>(a.shape(k)));
  return Shape(std::move(dims));
}

DenseTensor to_tensor(const FArray& a) {
  const Shape shape = shape_of(a);
  std::vector<double> data(a.data(), a.data() + shape.numel());
  return DenseTensor(shape, std::move(data));
}

FArray to_array(const DenseTensor& t) {
  std::vector<py::ssize_t> dims(t.shape().dims().begin(), t.shape().dims().end());
  FArray out(dims);
  std::copy(t.values().begin(), t.values().end(), out.mutable_data());
  return out;
}

SamplingPattern to_pattern(const BArray& mask) {
  const Shape shape = shape_of(mask);
  std::vector<Index> offsets;
  const bool* m = mask.data();
  for (Index i = 0; i < shape.numel(); ++i)
    if (m[i]) offsets.push_back(i);
  return SamplingPattern(shape, std::move(offsets));
}

BArray to_mask(const SamplingPattern& p) {
  std::vector<py::ssize_t> dims(p.shape().dims().begin(), p.shape().dims().end());
  BArray out(dims);
  bool* m = out.mutable_data();
  std::fill(m, m + p.shape().numel(), false);
  for (Index off : p.offsets()) m[off] = true;
  return out;
}

Rank1Weight to_weight(const std::vector<Vector>& factors, double floor) {
  return Rank1Weight(factors, floor);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted HOSVD tensor completion";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("unfold", [](const FArray& t, Index mode) { return unfold(to_tensor(t), mode); },
        py::arg("tensor"), py::arg("mode"));
  m.def("fold",
        [](const Matrix& mat, Index mode, const std::vector<Index>& dims) {
          return to_array(fold(mat, mode, Shape(dims)));
        },
        py::arg("matrix"), py::arg("mode"), py::arg("shape"));
  m.def("mode_product",
        [](const FArray& t, const Matrix& u, Index mode) {
          return to_array(mode_product(to_tensor(t), u, mode));
        },
        py::arg("tensor"), py::arg("matrix"), py::arg("mode"));
  m.def("khatri_rao", &khatri_rao, py::arg("a"), py::arg("b"));
  m.def("frobenius_norm", [](const FArray& t) { return frobenius_norm(to_tensor(t)); });

  m.def("svd",
        [](const Matrix& a) {
          SvdResult r = svd(a);
          return py::make_tuple(r.U, r.singular_values, r.V);
        },
        "Thin SVD: returns (U, s, V) with a = U diag(s) V^T.");
  m.def("spectral_norm", [](const Matrix& a) { return spectral_norm(a); });

  m.def("gen_synthetic",
        [](const std::vector<Index>& dims, const Ranks& ranks, std::uint64_t seed) {
          return to_array(gen_synthetic(Shape(dims), ranks, seed));
        },
        py::arg("shape"), py::arg("ranks"), py::arg("seed"));
  m.def("uniform_pattern",
        [](const std::vector<Index>& dims, double rate, std::uint64_t seed) {
          return to_mask(uniform_pattern(Shape(dims), rate, seed));
        },
        py::arg("shape"), py::arg("rate"), py::arg("seed"));
  m.def("block_pattern",
        [](const std::vector<Index>& dims, double rate, std::uint64_t seed) {
          const Shape shape(dims);
          const BlockProfile prof = block_profile_for_rate(shape, rate);
          return to_mask(bernoulli_pattern(block_rank1_probability(shape, prof.u, prof.v), seed));
        },
        py::arg("shape"), py::arg("rate"), py::arg("seed"));
  m.def("observe",
        [](const FArray& t, double sigma, const BArray& mask, std::uint64_t seed) {
          return to_array(observe(to_tensor(t), sigma, to_pattern(mask), seed));
        },
        py::arg("tensor"), py::arg("sigma"), py::arg("mask"), py::arg("seed"));

  m.def("fit_rank1_weight",
        [](const BArray& mask, double floor, Index max_iters, double tol) {
          WeightFit fit = fit_rank1_weight(to_pattern(mask), {max_iters, tol, floor});
          return py::make_tuple(fit.weight.factors(), fit.objective, fit.converged);
        },
        py::arg("mask"), py::arg("floor") = 1e-6, py::arg("max_iters") = 100, py::arg("tol") = 1e-10,
        "Returns (factors, objective trace, converged).");

  m.def("complete_hosvd",
        [](const FArray& y, const Ranks& ranks) { return to_array(complete_hosvd(to_tensor(y), ranks)); },
        py::arg("observed"), py::arg("ranks"));
  m.def("complete_hosvd_p",
        [](const FArray& y, const BArray& mask, const Ranks& ranks) {
          return to_array(complete_hosvd_p(to_tensor(y), to_pattern(mask), ranks));
        },
        py::arg("observed"), py::arg("mask"), py::arg("ranks"));
  m.def("complete_hosvd_w",
        [](const FArray& y, const std::vector<Vector>& factors, const Ranks& ranks, double floor) {
          return to_array(complete_hosvd_w(to_tensor(y), to_weight(factors, floor), ranks));
        },
        py::arg("observed"), py::arg("weight"), py::arg("ranks"), py::arg("floor") = 1e-6);
  m.def("cp_complete",
        [](const FArray& y, const BArray& mask, Index rank, std::uint64_t seed) {
          CpCompleteOptions opts;
          opts.seed = seed;
          return to_array(cp_complete(to_tensor(y), to_pattern(mask), rank, opts).estimate);
        },
        py::arg("observed"), py::arg("mask"), py::arg("rank"), py::arg("seed") = 0);

  m.def("shrink", &shrink, py::arg("x"), py::arg("lam"));
  m.def("tv_minimize",
        [](const FArray& y, const BArray& mask, const FArray& init, double h, double lam,
           Index max_iters, double tol) {
          TvConfig cfg;
          cfg.step = h;
          cfg.threshold = lam;
          cfg.max_iters = max_iters;
          cfg.tol = tol;
          TvResult r = tv_minimize(to_tensor(y), to_pattern(mask), to_tensor(init), cfg);
          std::vector<double> residuals;
          for (const auto& row : r.trace) residuals.push_back(row.residual);
          return py::make_tuple(to_array(r.estimate), r.iterations, residuals);
        },
        py::arg("observed"), py::arg("mask"), py::arg("init"), py::arg("h") = 0.1,
        py::arg("lam") = 0.05, py::arg("max_iters") = 500, py::arg("tol") = 1e-4,
        "Returns (estimate, iterations, residual trace).");

  m.def("weighted_rel_error",
        [](const std::vector<Vector>& factors, const FArray& t, const FArray& est, double floor) {
          return weighted_rel_error(to_weight(factors, floor), to_tensor(t), to_tensor(est));
        },
        py::arg("weight"), py::arg("truth"), py::arg("estimate"), py::arg("floor") = 1e-6);
  m.def("rel_error", [](const FArray& t, const FArray& est) { return rel_error(to_tensor(t), to_tensor(est)); });
  m.def("snr", [](const FArray& t, const FArray& est) { return snr(to_tensor(t), to_tensor(est)); });

  m.def("thm1_bound",
        [](const std::vector<Vector>& factors, const BArray& mask, double t_inf, double sigma, double floor) {
          return thm1_bound(to_weight(factors, floor), to_pattern(mask), t_inf, sigma);
        },
        py::arg("weight"), py::arg("mask"), py::arg("t_inf"), py::arg("sigma"), py::arg("floor") = 1e-6);
  m.def("thmB1_bound",
        [](const std::vector<Vector>& factors, const BArray& mask, double t_inf, double sigma,
           const Ranks& ranks, double floor) {
          return thmB1_bound(to_weight(factors, floor), to_pattern(mask), t_inf, sigma, ranks);
        },
        py::arg("weight"), py::arg("mask"), py::arg("t_inf"), py::arg("sigma"), py::arg("ranks"),
        py::arg("floor") = 1e-6);

  m.def("encode_tensor", [](const FArray& t) { return py::bytes(encode_tensor(to_tensor(t))); });
  m.def("decode_tensor", [](const py::bytes& b) { return to_array(decode_tensor(std::string(b))); });
}
