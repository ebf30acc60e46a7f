#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ibilab/config.hpp"
#include "ibilab/errors.hpp"
#include "ibilab/ibi.hpp"
#include "ibilab/prolate.hpp"
#include "ibilab/runner.hpp"
#include "ibilab/simulate.hpp"

namespace py = pybind11;
using namespace ibilab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "DPSS signaling and inter-block interference laboratory (C++ core)";
  m.attr("__version__") = kVersion;

  py::register_exception<numerical_error>(m, "NumericalError");

  py::enum_<Domain>(m, "Domain")
      .value("TD", Domain::TD)
      .value("FD", Domain::FD)
      .value("PS", Domain::PS);
  py::enum_<FdSelection>(m, "FdSelection")
      .value("Natural", FdSelection::Natural)
      .value("CenteredLowPass", FdSelection::CenteredLowPass);
  py::enum_<GuardKind>(m, "GuardKind")
      .value("ZeroPrefix", GuardKind::ZeroPrefix)
      .value("CyclicPrefix", GuardKind::CyclicPrefix);

  py::class_<DpssSet>(m, "DpssSet")
      .def_readonly("length", &DpssSet::length)
      .def_readonly("half_bandwidth", &DpssSet::half_bandwidth)
      .def_readonly("order", &DpssSet::order)
      .def_readonly("sequences", &DpssSet::sequences)
      .def_readonly("eigenvalues", &DpssSet::eigenvalues)
      .def_readonly("clamped", &DpssSet::clamped);

  py::class_<PathSpec>(m, "PathSpec")
      .def(py::init<>())
      .def(py::init([](std::complex<double> gain, double delay, double doppler) {
             return PathSpec{gain, delay, doppler};
           }),
           py::arg("gain"), py::arg("delay"), py::arg("doppler") = 0.0)
      .def_readwrite("gain", &PathSpec::gain)
      .def_readwrite("delay", &PathSpec::delay)
      .def_readwrite("doppler", &PathSpec::doppler);

  py::class_<ChannelSpec>(m, "ChannelSpec")
      .def(py::init<>())
      .def_readwrite("paths", &ChannelSpec::paths)
      .def_readwrite("normalized", &ChannelSpec::normalized)
      .def_readwrite("id", &ChannelSpec::id)
      .def("delay_only", &ChannelSpec::delay_only)
      .def("total_power", &ChannelSpec::total_power);

  py::class_<SignalingBasis>(m, "SignalingBasis")
      .def_readonly("domain", &SignalingBasis::domain)
      .def_readonly("block_length", &SignalingBasis::block_length)
      .def_readonly("used_dims", &SignalingBasis::used_dims)
      .def_readonly("utilization", &SignalingBasis::utilization)
      .def_readonly("matrix", &SignalingBasis::matrix)
      .def_readonly("ps_half_bandwidth", &SignalingBasis::ps_half_bandwidth);

  py::class_<FrameLayout>(m, "FrameLayout")
      .def(py::init([](int blocks, int block_length, int guard_length, GuardKind guard) {
             return FrameLayout{blocks, block_length, guard_length, guard};
           }),
           py::arg("num_blocks"), py::arg("block_length"), py::arg("guard_length"),
           py::arg("guard") = GuardKind::ZeroPrefix)
      .def_readwrite("num_blocks", &FrameLayout::num_blocks)
      .def_readwrite("block_length", &FrameLayout::block_length)
      .def_readwrite("guard_length", &FrameLayout::guard_length)
      .def_readwrite("guard", &FrameLayout::guard)
      .def("stride", &FrameLayout::stride)
      .def("total_length", &FrameLayout::total_length);

  py::class_<CrossCorrelation>(m, "CrossCorrelation")
      .def_readonly("values", &CrossCorrelation::values)
      .def_readonly("block_length", &CrossCorrelation::block_length)
      .def("at", &CrossCorrelation::at, py::arg("lag"));

  py::class_<IbiReport>(m, "IbiReport")
      .def_readonly("domain", &IbiReport::domain)
      .def_readonly("eta", &IbiReport::eta)
      .def_readonly("used_dims", &IbiReport::used_dims)
      .def_readonly("channel_id", &IbiReport::channel_id)
      .def_readonly("per_waveform_energy", &IbiReport::per_waveform_energy)
      .def_readonly("total_energy", &IbiReport::total_energy)
      .def_readonly("s2ibi_db", &IbiReport::s2ibi_db)
      .def_readonly("bound_energy", &IbiReport::bound_energy)
      .def_readonly("s2ibi_lower_bound_db", &IbiReport::s2ibi_lower_bound_db)
      .def_readonly("bound_vacuous", &IbiReport::bound_vacuous)
      .def_readonly("truncation_mismatch_db", &IbiReport::truncation_mismatch_db);

  py::class_<BerPoint>(m, "BerPoint")
      .def_readonly("snr_db", &BerPoint::snr_db)
      .def_readonly("ber", &BerPoint::ber)
      .def_readonly("bit_count", &BerPoint::bit_count)
      .def_readonly("error_count", &BerPoint::error_count)
      .def_readonly("ci_low", &BerPoint::ci_low)
      .def_readonly("ci_high", &BerPoint::ci_high);

  py::class_<BerCurve>(m, "BerCurve")
      .def_readonly("points", &BerCurve::points)
      .def_readonly("domain", &BerCurve::domain)
      .def_readonly("eta", &BerCurve::eta)
      .def_readonly("used_dims", &BerCurve::used_dims)
      .def_readonly("channel_id", &BerCurve::channel_id)
      .def_readonly("seed", &BerCurve::seed)
      .def_readonly("num_frames", &BerCurve::num_frames);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("domain", &SimConfig::domain)
      .def_readwrite("utilization", &SimConfig::utilization)
      .def_readwrite("layout", &SimConfig::layout)
      .def_readwrite("channel", &SimConfig::channel)
      .def_readwrite("snr_grid_db", &SimConfig::snr_grid_db)
      .def_readwrite("num_frames", &SimConfig::num_frames)
      .def_readwrite("seed", &SimConfig::seed);

  m.def("sinc", &sinc, py::arg("x"));
  m.def("sinc_kernel_matrix", &sinc_kernel_matrix, py::arg("length"), py::arg("half_bandwidth"));
  m.def("generate_dpss", &generate_dpss, py::arg("length"), py::arg("half_bandwidth"),
        py::arg("order"), py::call_guard<py::gil_scoped_release>());
  m.def("delay_matrix", &delay_matrix, py::arg("size"), py::arg("delay"));
  m.def("doppler_matrix", &doppler_matrix, py::arg("size"), py::arg("doppler"));
  m.def("channel_matrix", &channel_matrix, py::arg("spec"), py::arg("size"));
  m.def("exponential_profile", &exponential_profile, py::arg("decay_rate"),
        py::arg("tap_spacing"), py::arg("max_delay"), py::arg("seed"),
        py::arg("normalize") = true);
  m.def("channel_preset", &channel_preset, py::arg("name"), py::arg("seed"));
  m.def("build_basis", &build_basis, py::arg("domain"), py::arg("block_length"),
        py::arg("utilization"), py::arg("fd_selection") = FdSelection::Natural,
        py::arg("ps_half_bandwidth") = std::nullopt);
  m.def("modulate", &modulate, py::arg("basis"), py::arg("symbols"));
  m.def("demodulate", &demodulate, py::arg("basis"), py::arg("block"));
  m.def("assemble_frame", &assemble_frame, py::arg("layout"), py::arg("blocks"));
  m.def("extract_block", &extract_block, py::arg("layout"), py::arg("frame"), py::arg("index"));
  m.def("cross_correlation", &cross_correlation, py::arg("p_r"), py::arg("p_s"));
  m.def("bandlimited_shift", &bandlimited_shift, py::arg("seq"), py::arg("center_index"),
        py::arg("shift"), py::arg("window_half_width"), py::arg("half_bandwidth") = 0.5);
  m.def(
      "tail_energy",
      [](const Eigen::VectorXcd& seq, int inner) {
        double edge = 0.0;
        const double value = tail_energy(seq, inner, &edge);
        return py::make_tuple(value, edge);
      },
      py::arg("seq_centered"), py::arg("inner_half_width"),
      "Returns (tail_energy, edge_diagnostic).");
  m.def("ibi_energy_exact", &ibi_energy_exact, py::arg("basis"), py::arg("layout"),
        py::arg("spec"), py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("ibi_bound", &ibi_bound, py::arg("basis"), py::arg("layout"), py::arg("spec"),
        py::arg("subset_size") = -1, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("s2ibi_sweep", &s2ibi_sweep, py::arg("domains"), py::arg("etas"), py::arg("spec"),
        py::arg("layout"), py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def(
      "qpsk_map", [](const std::vector<int>& bits) { return qpsk_map(bits); }, py::arg("bits"));
  m.def("qpsk_demap", &qpsk_demap, py::arg("symbols"));
  m.def(
      "awgn",
      [](const Eigen::VectorXcd& signal, double snr_db, std::uint64_t seed) {
        rng::Stream stream(seed);
        return awgn(signal, snr_db, stream);
      },
      py::arg("signal"), py::arg("snr_db"), py::arg("seed"));
  m.def("lmmse_equalize", &lmmse_equalize, py::arg("block_channel"), py::arg("observation"),
        py::arg("noise_var"));
  m.def("run_ber", &run_ber, py::arg("config"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
}
