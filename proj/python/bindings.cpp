#include "sts/codec.hpp"
#include "sts/config.hpp"
#include "sts/error.hpp"
#include "sts/phy.hpp"
#include "sts/rcrm.hpp"
#include "sts/simkit.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace py::literals;

namespace {

std::vector<sts::FieldElement> to_elements(const sts::CodeParams& params, const std::vector<std::uint64_t>& values)
{
    std::vector<sts::FieldElement> out;
    out.reserve(values.size());
    for (auto v : values)
        out.push_back(params.field().element(v));
    return out;
}

std::vector<std::uint32_t> to_values(std::span<const sts::FieldElement> c)
{
    std::vector<std::uint32_t> out;
    for (auto e : c)
        out.push_back(e.value());
    return out;
}

py::dict point_dict(const sts::SweepPoint& p)
{
    return py::dict("sir_db"_a = p.sir_db, "trials"_a = p.trials, "erasures"_a = p.erasures, "errors"_a = p.errors,
                    "false_accept_trials"_a = p.false_accept_trials, "erasure_rate"_a = p.erasure_rate,
                    "error_rate"_a = p.error_rate, "false_accept_rate"_a = p.false_accept_rate,
                    "erasure_ci"_a = py::make_tuple(p.erasure_ci.lo, p.erasure_ci.hi),
                    "error_ci"_a = py::make_tuple(p.error_ci.lo, p.error_ci.hi));
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = R"pbdoc(
        Coded single-tone signaling: GFT Reed-Solomon codec, tone-grid energy
        detection statistics, and the multi-user Monte Carlo engine.
    )pbdoc";

    py::register_exception<sts::Error>(m, "StsError", PyExc_ValueError);

    py::class_<sts::Field>(m, "Field")
        .def(py::init<std::uint32_t>(), "p"_a)
        .def_property_readonly("order", &sts::Field::order)
        .def_property_readonly("alpha", [](const sts::Field& f) { return f.alpha().value(); });

    py::class_<sts::CodeParams>(m, "CodeParams")
        .def(py::init([](std::uint32_t d, std::size_t n, std::size_t k) { return sts::CodeParams(sts::Field(d), n, k); }),
             "field"_a, "n"_a, "k"_a = 1)
        .def_property_readonly("order", &sts::CodeParams::order)
        .def_property_readonly("n", &sts::CodeParams::n)
        .def_property_readonly("k", &sts::CodeParams::k)
        .def_property_readonly("t", &sts::CodeParams::t)
        .def_property_readonly("rho", &sts::CodeParams::rho)
        .def_property_readonly("message_space", &sts::CodeParams::message_space)
        .def_property_readonly("default_tau", [](const sts::CodeParams& p) { return sts::default_tau(p); });

    m.def(
        "pack_message",
        [](const sts::CodeParams& p, std::uint64_t msg) { return to_values(sts::pack_message(msg, p).digits); },
        "params"_a, "m"_a, "Base-D digits of m, least significant first.");
    m.def(
        "unpack_message",
        [](const sts::CodeParams& p, const std::vector<std::uint64_t>& digits) {
            return sts::unpack_message(sts::Message{to_elements(p, digits)});
        },
        "params"_a, "digits"_a);
    m.def(
        "encode",
        [](const sts::CodeParams& p, std::uint64_t msg) {
            return to_values(sts::encode(msg, sts::GftContext(p)).symbols);
        },
        "params"_a, "m"_a, "Subcarrier index for each OFDM symbol.");
    m.def(
        "inverse_gft",
        [](const sts::CodeParams& p, const std::vector<std::uint64_t>& c) {
            return to_values(sts::inverse_gft(to_elements(p, c), sts::GftContext(p)));
        },
        "params"_a, "codeword"_a);
    m.def(
        "is_valid_codeword",
        [](const sts::CodeParams& p, const std::vector<std::uint64_t>& c) {
            return sts::is_valid_codeword(to_elements(p, c), sts::GftContext(p));
        },
        "params"_a, "codeword"_a);
    m.def(
        "estimate_offset",
        [](const sts::CodeParams& p, const std::vector<std::uint64_t>& c) {
            return sts::estimate_offset(to_elements(p, c), sts::GftContext(p)).value();
        },
        "params"_a, "codeword"_a);
    m.def(
        "correct_offset",
        [](const sts::CodeParams& p, const std::vector<std::uint64_t>& c, std::uint64_t delta) {
            return to_values(sts::correct_offset(to_elements(p, c), p.field().element(delta)).symbols);
        },
        "params"_a, "codeword"_a, "delta"_a);
    m.def("separability_bound", &sts::separability_bound, "n"_a, "k"_a, "d"_a);
    m.def(
        "decode_multiuser",
        [](const sts::CodeParams& p, const std::vector<std::vector<std::uint32_t>>& sets, std::size_t tau) {
            sts::DetectionGrid grid;
            grid.subcarriers = p.order();
            grid.symbols = sets;
            for (auto& s : grid.symbols)
                std::sort(s.begin(), s.end());
            sts::DecoderConfig cfg;
            cfg.tau = tau == 0 ? sts::default_tau(p) : tau;
            return sts::decode_multiuser(grid, p, cfg);
        },
        "params"_a, "detections"_a, "tau"_a = 0,
        "Messages whose tones appear in at least tau per-symbol detection sets.");

    m.def("p_false_alarm", &sts::p_false_alarm, "x"_a, "sigma2"_a, "n_rx"_a);
    m.def("p_erasure", &sts::p_erasure, "x"_a, "sigma2"_a, "p_total"_a, "n_rx"_a, "n_user"_a = 1);
    m.def("threshold_for_far", &sts::threshold_for_far, "target_far"_a, "sigma2"_a, "n_rx"_a);
    m.def(
        "papr_db",
        [](const std::vector<std::vector<std::uint32_t>>& columns, std::size_t subcarriers) {
            sts::ToneGrid grid(subcarriers, columns.size());
            for (std::size_t n = 0; n < columns.size(); ++n)
                for (auto s : columns[n]) {
                    if (s >= subcarriers)
                        throw sts::Error(sts::Errc::IndexOutOfGrid, "tone index beyond subcarrier count");
                    grid.at(s, n) += 1.0;
                }
            return sts::papr_db(grid);
        },
        "columns"_a, "subcarriers"_a, "PAPR in dB of unit tones placed at the given indices per OFDM symbol.");

    m.def(
        "rcrm_pack",
        [](std::uint32_t rid, std::uint32_t prio, std::uint32_t sinr, std::uint32_t hash) {
            return sts::rcrm_pack(sts::Rcrm{rid, prio, sinr, hash});
        },
        "resource_id"_a, "priority"_a, "target_sinr"_a, "bs_hash"_a);
    m.def(
        "rcrm_unpack",
        [](std::uint64_t msg) {
            const auto r = sts::rcrm_unpack(msg);
            return py::dict("resource_id"_a = r.resource_id, "priority"_a = r.priority,
                            "target_sinr"_a = r.target_sinr, "bs_hash"_a = r.bs_hash);
        },
        "m"_a);
    m.def("hash_bsid", &sts::hash_bsid, "bsid"_a, "timeslot"_a);

    py::class_<sts::SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("field_order", &sts::SimConfig::field_order)
        .def_readwrite("n", &sts::SimConfig::n)
        .def_readwrite("k", &sts::SimConfig::k)
        .def_readwrite("subcarriers", &sts::SimConfig::subcarriers)
        .def_readwrite("users", &sts::SimConfig::users)
        .def_readwrite("n_rx", &sts::SimConfig::n_rx)
        .def_readwrite("noise_var", &sts::SimConfig::noise_var)
        .def_readwrite("target_far", &sts::SimConfig::target_far)
        .def_readwrite("sir_db", &sts::SimConfig::sir_db)
        .def_readwrite("trials", &sts::SimConfig::trials)
        .def_readwrite("tau", &sts::SimConfig::tau)
        .def_readwrite("master_seed", &sts::SimConfig::master_seed)
        .def_readwrite("allow_over_bound", &sts::SimConfig::allow_over_bound)
        .def_readwrite("workers", &sts::SimConfig::workers)
        .def_property(
            "awgn_only", [](const sts::SimConfig& c) { return c.fading == sts::Fading::AwgnOnly; },
            [](sts::SimConfig& c, bool awgn) { c.fading = awgn ? sts::Fading::AwgnOnly : sts::Fading::Rayleigh; })
        .def("__repr__", [](const sts::SimConfig& c) { return "SimConfig(\n" + sts::render(c) + ")"; });

    m.def(
        "parse_config", [](const std::string& text) { return sts::parse_experiment(text).sim; }, "text"_a,
        "SimConfig from key = value text.");
    m.def(
        "run_trial",
        [](const sts::SimConfig& cfg, double sir_db, std::uint64_t trial_index) {
            sts::TrialOutcome o;
            {
                py::gil_scoped_release release;
                o = sts::run_trial(cfg, sir_db, trial_index);
            }
            py::list status;
            for (auto s : o.status)
                status.append(s == sts::UserStatus::Decoded ? "decoded"
                              : s == sts::UserStatus::Error ? "error"
                                                            : "erasure");
            return py::dict("sent"_a = o.sent, "status"_a = status, "decoded"_a = o.decoded,
                            "spurious"_a = o.spurious);
        },
        "config"_a, "sir_db"_a, "trial_index"_a);
    m.def(
        "run_sweep",
        [](const sts::SimConfig& cfg) {
            sts::SweepResult result;
            {
                py::gil_scoped_release release;
                result = sts::run_sweep(cfg);
            }
            py::list points;
            for (const auto& p : result.points)
                points.append(point_dict(p));
            return py::dict("points"_a = points, "csv"_a = sts::format_csv(result));
        },
        "config"_a, "Run every SIR point; returns per-point rates and the CSV text.");
    m.def(
        "validate_detection",
        [](std::vector<std::size_t> n_rx, std::vector<std::size_t> n_user, std::vector<double> far,
           std::uint64_t samples, double sir_db, std::size_t subcarriers, std::uint64_t seed) {
            sts::ValidationConfig v;
            v.n_rx = std::move(n_rx);
            v.n_user = std::move(n_user);
            v.far = std::move(far);
            v.samples = samples;
            v.sir_db = sir_db;
            v.subcarriers = subcarriers;
            v.seed = seed;
            sts::ValidationReport report;
            {
                py::gil_scoped_release release;
                report = sts::validate_detection(v);
            }
            py::list cells;
            for (const auto& c : report.cells)
                cells.append(py::dict("kind"_a = c.kind == sts::ValidationCell::Kind::FalseAlarm ? "false_alarm" : "erasure",
                                      "n_rx"_a = c.n_rx, "n_user"_a = c.n_user, "target_far"_a = c.target_far,
                                      "threshold"_a = c.threshold, "analytic"_a = c.analytic,
                                      "empirical"_a = c.empirical, "z"_a = c.z));
            return py::dict("passed"_a = report.passed(), "tone_power"_a = report.tone_power, "cells"_a = cells);
        },
        "n_rx"_a = std::vector<std::size_t>{1, 2, 4}, "n_user"_a = std::vector<std::size_t>{1, 2, 4},
        "far"_a = std::vector<double>{1e-3, 1e-2, 1e-1}, "samples"_a = 100000, "sir_db"_a = -21.0,
        "subcarriers"_a = 631, "seed"_a = 1);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
