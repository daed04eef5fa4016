// Python bindings for the beam selection core. Matrices cross the boundary
// as 2-D complex128 numpy arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>
#include <optional>
#include <utility>

#include "beamsel/channel.hpp"
#include "beamsel/io.hpp"
#include "beamsel/precoding.hpp"
#include "beamsel/selection.hpp"
#include "beamsel/sweep.hpp"

namespace py = pybind11;
using namespace beamsel;

namespace {

using ComplexArray =
    py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix matrix_from_numpy(const ComplexArray& arr) {
  if (arr.ndim() != 2) {
    throw std::invalid_argument("expected a 2-D complex array");
  }
  const auto rows = static_cast<std::size_t>(arr.shape(0));
  const auto cols = static_cast<std::size_t>(arr.shape(1));
  std::vector<cdouble> data(rows * cols);
  std::memcpy(data.data(), arr.data(), rows * cols * sizeof(cdouble));
  return ComplexMatrix(rows, cols, std::move(data));
}

py::array_t<std::complex<double>> numpy_from_matrix(const ComplexMatrix& m) {
  py::array_t<std::complex<double>> arr(
      {static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  std::memcpy(arr.mutable_data(), m.entries().data(),
              m.rows() * m.cols() * sizeof(cdouble));
  return arr;
}

py::array_t<std::complex<double>> numpy_from_vector(
    const std::vector<cdouble>& v) {
  py::array_t<std::complex<double>> arr(static_cast<py::ssize_t>(v.size()));
  std::memcpy(arr.mutable_data(), v.data(), v.size() * sizeof(cdouble));
  return arr;
}

ChannelParams make_params(std::size_t n_b, std::size_t n_u, std::size_t paths,
                          double los_var, double nlos_var,
                          std::uint64_t seed) {
  return ChannelParams{n_b, n_u, paths, los_var, nlos_var, seed};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Beamspace MIMO beam selection: greedy decremental selection, "
      "zero-forcing sum rates and their guarantees";
  m.attr("__version__") = "0.1.0";

  py::register_exception<SingularGram>(m, "SingularGramError",
                                       PyExc_ArithmeticError);
  py::register_exception<NumericalFailure>(m, "NumericalFailureError",
                                           PyExc_ArithmeticError);
  py::register_exception<InfeasibleSelection>(m, "InfeasibleSelectionError",
                                              PyExc_RuntimeError);

  py::class_<SelectionResult>(m, "SelectionResult")
      .def_readonly("selected", &SelectionResult::selected)
      .def_readonly("eliminated", &SelectionResult::eliminated)
      .def_readonly("step_costs", &SelectionResult::step_costs)
      .def_readonly("final_norm_sq", &SelectionResult::final_norm_sq)
      .def("__repr__", [](const SelectionResult& r) {
        return "SelectionResult(K=" + std::to_string(r.selected.size()) +
               ", final_norm_sq=" + std::to_string(r.final_norm_sq) + ")";
      });

  py::class_<LeverageScores>(m, "LeverageScores")
      .def_readonly("pi", &LeverageScores::pi)
      .def_readonly("p", &LeverageScores::p);

  py::class_<IdentityReport>(m, "IdentityReport")
      .def_readonly("n_b", &IdentityReport::n_b)
      .def_readonly("n_u", &IdentityReport::n_u)
      .def_readonly("full_norm_sq", &IdentityReport::full_norm_sq)
      .def_readonly("projector_trace", &IdentityReport::projector_trace)
      .def_readonly("pinv_energy", &IdentityReport::pinv_energy)
      .def_readonly("weighted_removal_sum",
                    &IdentityReport::weighted_removal_sum)
      .def_readonly("weighted_sum_evaluable",
                    &IdentityReport::weighted_sum_evaluable)
      .def_readonly("min_removal_cost", &IdentityReport::min_removal_cost)
      .def_readonly("min_removal_bound", &IdentityReport::min_removal_bound)
      .def_readonly("removal_costs", &IdentityReport::removal_costs);

  m.def(
      "steering_vector",
      [](double theta, std::size_t n_b) {
        return numpy_from_vector(steering_vector(theta, n_b));
      },
      py::arg("theta"), py::arg("n_b"),
      "Unit-norm array response at the given spatial frequency.");

  m.def("spatial_frequency", &spatial_frequency, py::arg("phi"),
        "0.5 * sin(phi) for a physical angle in [-pi/2, pi/2].");

  m.def(
      "dft_matrix",
      [](std::size_t n_b) { return numpy_from_matrix(dft_matrix(n_b)); },
      py::arg("n_b"), "Unitary beamspace transform.");

  m.def(
      "generate_spatial_channel",
      [](std::size_t n_b, std::size_t n_u, std::size_t paths, double los_var,
         double nlos_var, std::uint64_t seed, std::uint32_t trial) {
        return numpy_from_matrix(
            generate_spatial_channel(
                make_params(n_b, n_u, paths, los_var, nlos_var, seed), trial)
                .matrix);
      },
      py::arg("n_b"), py::arg("n_u"), py::arg("paths") = 2,
      py::arg("los_var") = 1.0, py::arg("nlos_var") = 0.1, py::arg("seed") = 0,
      py::arg("trial") = 0,
      "Antenna-domain multipath channel, deterministic in (seed, trial).");

  m.def(
      "generate_beamspace_channel",
      [](std::size_t n_b, std::size_t n_u, std::size_t paths, double los_var,
         double nlos_var, std::uint64_t seed, std::uint32_t trial) {
        return numpy_from_matrix(
            generate_beamspace_channel(
                make_params(n_b, n_u, paths, los_var, nlos_var, seed), trial)
                .matrix);
      },
      py::arg("n_b"), py::arg("n_u"), py::arg("paths") = 2,
      py::arg("los_var") = 1.0, py::arg("nlos_var") = 0.1, py::arg("seed") = 0,
      py::arg("trial") = 0, "Beamspace channel H, deterministic in (seed, trial).");

  m.def(
      "pinv_fro_norm_sq",
      [](const ComplexArray& h) { return pinv_fro_norm_sq(matrix_from_numpy(h)); },
      py::arg("h"), "||H^+||_F^2 = Tr((H H^H)^-1).");

  m.def(
      "zf_precoder",
      [](const ComplexArray& h) {
        return numpy_from_matrix(zf_precoder(matrix_from_numpy(h)));
      },
      py::arg("h"), "H^+ = H^H (H H^H)^-1; satisfies H @ F = I.");

  m.def("sum_rate", &sum_rate, py::arg("norm_sq"), py::arg("power"),
        py::arg("noise_var"), py::arg("n_u"),
        "n_u * log2(1 + power / (noise_var * norm_sq)).");

  m.def(
      "single_step_costs",
      [](const ComplexArray& h) {
        return single_step_costs(matrix_from_numpy(h));
      },
      py::arg("h"),
      "Per-beam removal cost; +inf where removal breaks full row rank.");

  m.def(
      "decremental_select",
      [](const ComplexArray& h, std::size_t k, bool naive) {
        const auto m_ = matrix_from_numpy(h);
        return naive ? decremental_select_naive(m_, k)
                     : decremental_select(m_, k);
      },
      py::arg("h"), py::arg("k"), py::arg("naive") = false,
      "Greedy removal down to k beams.");

  m.def(
      "exhaustive_select",
      [](const ComplexArray& h, std::size_t k, std::uint64_t cap) {
        return exhaustive_select(matrix_from_numpy(h), k, cap);
      },
      py::arg("h"), py::arg("k"), py::arg("cap") = kDefaultExhaustiveCap,
      "Optimal subset by enumeration (small problems only).");

  m.def("bound_factor", &bound_factor, py::arg("n_total"), py::arg("n_u"),
        py::arg("k"), "Norm inflation factor (n-n_u+1)/(k-n_u+1).");

  m.def("selection_norm_bound", &selection_norm_bound, py::arg("n_total"),
        py::arg("n_u"), py::arg("k"), py::arg("base_norm_sq"),
        "Guaranteed ceiling on the selected-subset norm.");

  m.def(
      "hyperbola_profile",
      [](std::size_t n_b, std::size_t n_u) {
        const auto p = hyperbola_profile(n_b, n_u);
        py::dict out;
        out["factors"] = p.factors;
        out["vertex"] = py::make_tuple(p.vertex_k, p.vertex_factor);
        return out;
      },
      py::arg("n_b"), py::arg("n_u"),
      "(K, factor) pairs for K in [n_u, n_b] plus the hyperbola vertex.");

  m.def(
      "leverage_scores",
      [](const ComplexArray& h) { return leverage_scores(matrix_from_numpy(h)); },
      py::arg("h"), "Per-beam influence scores; pi sums to 1.");

  m.def(
      "preselect",
      [](const ComplexArray& h, std::size_t k, const std::string& mode,
         double oversample, std::uint64_t seed, std::uint32_t stream) {
        RandomStream rng(seed,
                         stream_id(StreamPurpose::kPreselect, stream, 0));
        const auto res = preselect(matrix_from_numpy(h), k,
                                   preselect_mode_from_name(mode), oversample,
                                   rng);
        py::dict out;
        out["indices"] = res.indices;
        out["candidates"] = numpy_from_matrix(res.candidates);
        out["pi"] = res.scores.pi;
        return out;
      },
      py::arg("h"), py::arg("k"), py::arg("mode") = "top",
      py::arg("oversample") = 1.0, py::arg("seed") = 0, py::arg("stream") = 0,
      "Leverage-score candidate pre-selection.");

  m.def("rate_lower_bound", &rate_lower_bound, py::arg("n_c"), py::arg("n_u"),
        py::arg("k"), py::arg("candidate_norm_sq"), py::arg("power"),
        py::arg("noise_var"),
        "Rate guaranteed by greedy selection of k beams from n_c candidates.");

  m.def(
      "selection_identities",
      [](const ComplexArray& h) {
        return selection_identities(matrix_from_numpy(h));
      },
      py::arg("h"),
      "Gram-inverse identities underpinning the selection guarantee.");

  m.def(
      "run_sweep",
      [](std::size_t n_b, std::size_t n_u, std::size_t paths, double los_var,
         double nlos_var, std::uint64_t seed,
         const std::vector<std::size_t>& k_values,
         std::optional<std::vector<double>> snr_db, std::size_t trials,
         const std::string& preselect_mode, double oversample,
         std::size_t workers) {
        SweepConfig config;
        config.channel = make_params(n_b, n_u, paths, los_var, nlos_var, seed);
        config.k_values = k_values;
        config.snr_db =
            snr_db ? *snr_db : SweepConfig::default_snr_grid();
        config.trials = trials;
        config.preselect_mode = preselect_mode_from_name(preselect_mode);
        config.oversample = oversample;
        config.workers = workers;
        const auto result = run_sweep(config);

        py::list cells;
        for (const auto& c : result.cells) {
          py::dict d;
          d["K"] = c.k;
          d["snr_db"] = c.snr_db;
          d["r_full_mean"] = c.r_full_mean;
          d["r_full_std"] = c.r_full_std;
          d["r_s_mean"] = c.r_s_mean;
          d["r_s_std"] = c.r_s_std;
          d["r_s_pre_mean"] = c.r_s_pre_mean;
          d["bound_eq9_rate"] = c.bound_eq9_rate;
          d["bound_eq17_mean"] = c.bound_eq17_mean;
          d["n_c_mean"] = c.n_c_mean;
          d["epsilon_mean"] = c.epsilon_mean;
          cells.append(std::move(d));
        }
        return cells;
      },
      py::arg("n_b"), py::arg("n_u"), py::arg("paths") = 2,
      py::arg("los_var") = 1.0, py::arg("nlos_var") = 0.1, py::arg("seed") = 0,
      py::arg("k_values") = std::vector<std::size_t>{},
      py::arg("snr_db") = std::nullopt, py::arg("trials") = 100,
      py::arg("preselect") = "top", py::arg("oversample") = 1.0,
      py::arg("workers") = 1,
      "Monte Carlo sum-rate sweep; one dict per (K, SNR) cell.");
}
