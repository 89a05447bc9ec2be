#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wifidop/coverage.hpp"
#include "wifidop/io.hpp"
#include "wifidop/sim.hpp"

namespace py = pybind11;
using namespace wifidop;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wi-Fi RSS positioning with dilution-of-precision quality indicators";

    // Exceptions mirror the C++ hierarchy under a common wifidop Error.
    static py::exception<Error> base_exc(m, "Error");
    py::register_exception<InvalidUnit>(m, "InvalidUnit", base_exc);
    py::register_exception<NonPositivePower>(m, "NonPositivePower", base_exc);
    py::register_exception<InvalidDistance>(m, "InvalidDistance", base_exc);
    py::register_exception<UnsupportedDirection>(m, "UnsupportedDirection", base_exc);
    py::register_exception<UnknownAp>(m, "UnknownAp", base_exc);
    py::register_exception<DegenerateRange>(m, "DegenerateRange", base_exc);
    py::register_exception<InsufficientObservations>(m, "InsufficientObservations", base_exc);
    py::register_exception<SingularGeometry>(m, "SingularGeometry", base_exc);
    py::register_exception<CellTooSmall>(m, "CellTooSmall", base_exc);
    py::register_exception<InvalidPixel>(m, "InvalidPixel", base_exc);
    py::register_exception<IndexError>(m, "GridIndexError", base_exc);
    py::register_exception<ParseError>(m, "ParseError", base_exc);
    py::register_exception<ValidationError>(m, "ValidationError", base_exc);

    // radio ----------------------------------------------------------------
    m.def("dbm_to_mw", &dbm_to_mw, py::arg("level_dbm"),
          "Convert a dBm level to linear milliwatts.");
    m.def("mw_to_dbm", &mw_to_dbm, py::arg("power_mw"),
          "Convert linear milliwatts to dBm.");

    py::class_<AccessPoint>(m, "AccessPoint")
        .def(py::init([](std::string id, Vec3 position, double tx_power_mw, double tx_gain,
                         double wavelength_m) {
                 return AccessPoint{std::move(id), position, tx_power_mw, tx_gain,
                                    wavelength_m};
             }),
             py::arg("id"), py::arg("position"), py::arg("tx_power_mw") = 1.0,
             py::arg("tx_gain") = 1.0, py::arg("wavelength_m") = 0.125)
        .def_readwrite("id", &AccessPoint::id)
        .def_readwrite("position", &AccessPoint::position)
        .def_readwrite("tx_power", &AccessPoint::tx_power)
        .def_readwrite("tx_gain", &AccessPoint::tx_gain)
        .def_readwrite("wavelength", &AccessPoint::wavelength)
        .def("__repr__", [](const AccessPoint& ap) {
            return "AccessPoint('" + ap.id + "')";
        });

    py::class_<Receiver>(m, "Receiver")
        .def(py::init([](double rx_gain) { return Receiver{rx_gain}; }),
             py::arg("rx_gain") = 1.0)
        .def_readwrite("rx_gain", &Receiver::rx_gain);

    py::class_<RssScan>(m, "RssScan")
        .def(py::init([](double timestamp, std::map<std::string, double> readings,
                         std::optional<Vec3> truth) {
                 return RssScan{timestamp, std::move(readings), truth};
             }),
             py::arg("timestamp") = 0.0,
             py::arg("readings") = std::map<std::string, double>{},
             py::arg("truth") = std::nullopt)
        .def_readwrite("timestamp", &RssScan::timestamp)
        .def_readwrite("readings", &RssScan::readings)
        .def_readwrite("truth", &RssScan::truth);

    py::class_<Environment>(m, "Environment")
        .def(py::init([](std::vector<AccessPoint> aps, Receiver receiver, int dimension,
                         double ss_threshold_mw) {
                 Environment env{std::move(aps), receiver, dimension, ss_threshold_mw};
                 env.validate();
                 return env;
             }),
             py::arg("aps"), py::arg("receiver") = Receiver{}, py::arg("dimension") = 3,
             py::arg("ss_threshold_mw") = 0.0)
        .def_readwrite("aps", &Environment::aps)
        .def_readwrite("receiver", &Environment::receiver)
        .def_readwrite("dimension", &Environment::dimension)
        .def_readwrite("ss_threshold", &Environment::ss_threshold)
        .def("ap", &Environment::ap, py::arg("id"),
             py::return_value_policy::reference_internal)
        .def("validate", &Environment::validate);

    m.def("validate_scan", &validate_scan, py::arg("env"), py::arg("scan"));

    // propagation ------------------------------------------------------------
    auto model = py::class_<PropagationModel>(m, "PropagationModel");
    py::enum_<PropagationModel::Variant>(model, "Variant")
        .value("Friis", PropagationModel::Variant::Friis)
        .value("InterlinkNetworks", PropagationModel::Variant::InterlinkNetworks)
        .value("SnapWps", PropagationModel::Variant::SnapWps);
    model.def_static("friis", &PropagationModel::friis)
        .def_static("interlink", &PropagationModel::interlink)
        .def_static("snap_wps", &PropagationModel::snap_wps)
        .def_static("from_name", &PropagationModel::from_name, py::arg("name"))
        .def_readwrite("variant", &PropagationModel::variant)
        .def_readwrite("exponent", &PropagationModel::exponent)
        .def_readwrite("friis_legacy_inversion", &PropagationModel::friis_legacy_inversion)
        .def("name", &PropagationModel::name)
        .def("__repr__",
             [](const PropagationModel& mdl) { return "PropagationModel('" + mdl.name() + "')"; });

    m.def("forward_rss", &forward_rss, py::arg("model"), py::arg("ap"), py::arg("rx"),
          py::arg("distance_m"),
          "Predicted received power [mW] at a distance; path-loss models only.");
    m.def("invert_distance", &invert_distance, py::arg("model"), py::arg("ap"), py::arg("rx"),
          py::arg("rss_mw"), "Distance [m] implied by a received power.");
    m.def("snap_distance", &snap_distance, py::arg("attenuation_db"),
          "SNAP-WPS empirical range from an attenuation magnitude in dB.");
    m.def("snap_in_calibrated_range", &snap_in_calibrated_range, py::arg("attenuation_db"));
    m.def("range_sensitivity", &range_sensitivity, py::arg("model"), py::arg("ap"),
          py::arg("rx"), py::arg("signal"),
          "Signal-domain to range-domain sensitivity coefficient.");
    m.attr("EPSILON_DISTANCE") = kEpsilonDistance;

    // dop ---------------------------------------------------------------------
    py::enum_<Classification>(m, "Classification")
        .value("Good", Classification::Good)
        .value("Degraded", Classification::Degraded)
        .value("Insufficient", Classification::Insufficient);

    py::enum_<ExclusionReason>(m, "ExclusionReason")
        .value("BelowThreshold", ExclusionReason::BelowThreshold);

    py::class_<ExcludedAp>(m, "ExcludedAp")
        .def_readonly("id", &ExcludedAp::id)
        .def_readonly("reason", &ExcludedAp::reason);

    py::class_<GeometryMatrix>(m, "GeometryMatrix")
        .def(py::init([](std::vector<Vec3> rows, std::optional<std::vector<double>> ranges) {
                 GeometryMatrix g;
                 g.rows = std::move(rows);
                 g.ranges = ranges ? std::move(*ranges)
                                   : std::vector<double>(g.rows.size(), 1.0);
                 return g;
             }),
             py::arg("rows"), py::arg("ranges") = std::nullopt)
        .def_readwrite("rows", &GeometryMatrix::rows)
        .def_readwrite("ranges", &GeometryMatrix::ranges)
        .def("__len__", &GeometryMatrix::size);

    py::class_<DopAssessment>(m, "DopAssessment")
        .def_readonly("visible_count", &DopAssessment::visible_count)
        .def_readonly("qualified_count", &DopAssessment::qualified_count)
        .def_readonly("dop", &DopAssessment::dop)
        .def_readonly("classification", &DopAssessment::classification)
        .def_readonly("excluded_aps", &DopAssessment::excluded_aps)
        .def("__repr__", [](const DopAssessment& a) {
            return "DopAssessment(dop=" + format_double(a.dop) + ", " +
                   to_string(a.classification) + ")";
        });

    m.def("visible_aps", &visible_aps, py::arg("env"), py::arg("scan"),
          "APs with a reading > 0 mW, ordered by id.");
    m.def("qualify_aps", &qualify_aps, py::arg("env"), py::arg("visible"), py::arg("scan"),
          "Split the visible set by the signal-strength threshold.");
    m.def("build_geometry", &build_geometry, py::arg("env"), py::arg("user"), py::arg("aps"));
    m.def("compute_dop", &compute_dop, py::arg("geometry"), py::arg("dimension") = 3,
          "sqrt(Tr((H^T H)^-1)); infinity when under-determined or singular.");
    m.def("compute_weighted_dop", &compute_weighted_dop, py::arg("geometry"),
          py::arg("weights"), py::arg("dimension") = 3);
    m.def(
        "assess",
        [](const Environment& env, const RssScan& scan, const Vec3& user, double good_dop_max,
           std::optional<int> dimension, std::optional<PropagationModel> weighting_model) {
            AssessOptions options;
            options.good_dop_max = good_dop_max;
            options.dimension = dimension;
            options.weighting_model = weighting_model;
            return assess(env, scan, user, options);
        },
        py::arg("env"), py::arg("scan"), py::arg("user"), py::kw_only(),
        py::arg("good_dop_max") = 5.0, py::arg("dimension") = std::nullopt,
        py::arg("weighting_model") = std::nullopt,
        "Visibility census, threshold filter and geometric DOP at a position.");

    // solver --------------------------------------------------------------------
    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("max_iterations", &SolverConfig::max_iterations)
        .def_readwrite("step_tolerance", &SolverConfig::step_tolerance)
        .def_readwrite("initial_guess", &SolverConfig::initial_guess)
        .def_readwrite("model", &SolverConfig::model)
        .def_readwrite("dimension", &SolverConfig::dimension)
        .def_readwrite("good_dop_max", &SolverConfig::good_dop_max);

    py::class_<PositionFix>(m, "PositionFix")
        .def_readonly("position", &PositionFix::position)
        .def_readonly("residual_norm", &PositionFix::residual_norm)
        .def_readonly("iterations", &PositionFix::iterations)
        .def_readonly("converged", &PositionFix::converged)
        .def_readonly("assessment", &PositionFix::assessment)
        .def("__repr__", [](const PositionFix& fix) {
            return "PositionFix(position=[" + format_double(fix.position.x()) + ", " +
                   format_double(fix.position.y()) + ", " + format_double(fix.position.z()) +
                   "], converged=" + (fix.converged ? "True" : "False") + ")";
        });

    m.def("ranges_from_scan", &ranges_from_scan, py::arg("env"), py::arg("scan"),
          py::arg("model"), "Model-inverted range per qualified AP.");
    m.def("range_jacobian_row", &range_jacobian_row, py::arg("ap_position"),
          py::arg("estimate"));
    m.def("solve", &solve, py::arg("env"), py::arg("scan"),
          py::arg("config") = SolverConfig{},
          "Damped Gauss-Newton trilateration of one scan.");
    m.def("solve_trajectory", &solve_trajectory, py::arg("env"), py::arg("scans"),
          py::arg("config") = SolverConfig{},
          "Warm-started per-scan solves; failures are embedded, not thrown.");

    // coverage ---------------------------------------------------------------------
    py::class_<CoverageGrid>(m, "CoverageGrid")
        .def_readonly("width", &CoverageGrid::width)
        .def_readonly("height", &CoverageGrid::height)
        .def_readonly("pixel_size", &CoverageGrid::pixel_size)
        .def_readwrite("quality_threshold", &CoverageGrid::quality_threshold)
        .def("field_at", &CoverageGrid::field_at, py::arg("floor"), py::arg("ap_id"),
             py::arg("i"), py::arg("j"))
        .def("pixel_center", &CoverageGrid::pixel_center, py::arg("floor"), py::arg("i"),
             py::arg("j"))
        .def_property_readonly("floor_count",
                               [](const CoverageGrid& g) { return g.floors.size(); });

    py::class_<Cell>(m, "Cell")
        .def(py::init([](int floor, std::vector<std::pair<int, int>> pixels) {
                 Cell cell;
                 cell.floor = floor;
                 cell.pixels = std::move(pixels);
                 std::sort(cell.pixels.begin(), cell.pixels.end());
                 return cell;
             }),
             py::arg("floor"), py::arg("pixels"))
        .def_readonly("floor", &Cell::floor)
        .def_readonly("pixels", &Cell::pixels)
        .def("contains", &Cell::contains, py::arg("i"), py::arg("j"))
        .def("__len__", &Cell::size);

    m.def("make_coverage_grid", &make_coverage_grid, py::arg("env"), py::arg("model"),
          py::arg("width"), py::arg("height"), py::arg("pixel_size"),
          py::arg("floor_heights"), py::arg("quality_threshold"),
          "Forward-modelled field strengths on a pixel grid.");
    m.def("extract_cell", &extract_cell, py::arg("grid"), py::arg("floor"), py::arg("ap_id"));
    m.def("neighbor_count", &neighbor_count, py::arg("cell"), py::arg("pixel"));
    m.def("geometric_indicator", &geometric_indicator, py::arg("cell"),
          "Compactness indicator G'(C).");
    m.def("wlan_indicator", &wlan_indicator, py::arg("cells"),
          "Size-weighted mean of per-floor indicators.");

    // sim -----------------------------------------------------------------------------
    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init([](double sigma_db, double dropout_below, std::uint64_t seed) {
                 return NoiseModel{sigma_db, dropout_below, seed};
             }),
             py::arg("sigma_db") = 2.0, py::arg("dropout_below") = 0.0, py::arg("seed") = 0)
        .def_readwrite("sigma_db", &NoiseModel::sigma_db)
        .def_readwrite("dropout_below", &NoiseModel::dropout_below)
        .def_readwrite("seed", &NoiseModel::seed);

    py::class_<Trajectory>(m, "Trajectory")
        .def(py::init([](std::vector<Vec3> waypoints, double speed, double sample_period) {
                 return Trajectory{std::move(waypoints), speed, sample_period};
             }),
             py::arg("waypoints"), py::arg("speed") = 1.0, py::arg("sample_period") = 1.0)
        .def_readwrite("waypoints", &Trajectory::waypoints)
        .def_readwrite("speed", &Trajectory::speed)
        .def_readwrite("sample_period", &Trajectory::sample_period);

    py::class_<TrajectorySample>(m, "TrajectorySample")
        .def_readonly("time", &TrajectorySample::time)
        .def_readonly("position", &TrajectorySample::position);

    py::class_<SampleRecord>(m, "SampleRecord")
        .def_readonly("time", &SampleRecord::time)
        .def_readonly("truth", &SampleRecord::truth)
        .def_readonly("estimate", &SampleRecord::estimate)
        .def_readonly("error_m", &SampleRecord::error_m)
        .def_readonly("dop", &SampleRecord::dop)
        .def_readonly("visible", &SampleRecord::visible)
        .def_readonly("qualified", &SampleRecord::qualified)
        .def_readonly("classification", &SampleRecord::classification)
        .def_readonly("converged", &SampleRecord::converged);

    py::class_<DopBin>(m, "DopBin")
        .def_readonly("lo", &DopBin::lo)
        .def_readonly("hi", &DopBin::hi)
        .def_readonly("count", &DopBin::count)
        .def_readonly("mean_error", &DopBin::mean_error)
        .def_readonly("max_error", &DopBin::max_error);

    py::class_<ReportSummary>(m, "ReportSummary")
        .def_readonly("bins", &ReportSummary::bins)
        .def_readonly("infinite_count", &ReportSummary::infinite_count)
        .def_readonly("infinite_mean_error", &ReportSummary::infinite_mean_error)
        .def_readonly("infinite_max_error", &ReportSummary::infinite_max_error)
        .def_readonly("spearman", &ReportSummary::spearman);

    py::class_<EvaluationReport>(m, "EvaluationReport")
        .def_readonly("records", &EvaluationReport::records)
        .def_readonly("summary", &EvaluationReport::summary);

    m.def("sample_trajectory", &sample_trajectory, py::arg("trajectory"),
          "Constant-speed samples along the waypoint polyline.");
    m.def("synthesize_scan", &synthesize_scan, py::arg("env"), py::arg("truth"),
          py::arg("noise"), py::arg("model"),
          "Forward-modelled scan with log-normal shadowing and dropout.");
    m.def("spearman_rank_correlation", &spearman_rank_correlation, py::arg("xs"),
          py::arg("ys"));
    m.def("summarize", &summarize, py::arg("records"));
    m.def(
        "run_experiment",
        [](const Environment& env, const Trajectory& trajectory, const NoiseModel& noise,
           const PropagationModel& model, const SolverConfig& config, bool dop_at_truth) {
            ExperimentOptions options;
            options.dop_at_truth = dop_at_truth;
            return run_experiment(env, trajectory, noise, model, config, options);
        },
        py::arg("env"), py::arg("trajectory"), py::arg("noise"), py::arg("model"),
        py::arg("config") = SolverConfig{}, py::kw_only(), py::arg("dop_at_truth") = false,
        "Trajectory sampling, scan synthesis, warm-started solving and binning.");

    // io ---------------------------------------------------------------------------------
    m.def("load_environment", &load_environment, py::arg("path"));
    m.def("load_scans", &load_scans, py::arg("path"));
    m.def("write_scans", &write_scans, py::arg("scans"), py::arg("path"));
    m.def("load_trajectory", &load_trajectory, py::arg("path"));
    m.def("write_report", &write_report, py::arg("report"), py::arg("path"));
    m.def("load_report_records", &load_report_records, py::arg("path"));
    m.def("format_double", &format_double, py::arg("value"));
    m.def("parse_double", &parse_double, py::arg("token"));

#ifdef WIFIDOP_VERSION
#define WIFIDOP_STR_INNER(x) #x
#define WIFIDOP_STR(x) WIFIDOP_STR_INNER(x)
    m.attr("__version__") = WIFIDOP_STR(WIFIDOP_VERSION);
#else
    m.attr("__version__") = "dev";
#endif
}
