#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "wifidop/coverage.hpp"
#include "wifidop/io.hpp"
#include "wifidop/sim.hpp"

namespace {

using namespace wifidop;

Vec3 parse_xyz(const std::string& text) {
    std::vector<double> parts;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        parts.push_back(parse_double(token));
    }
    if (parts.size() != 3) {
        throw ValidationError("position", "expected x,y,z, got '" + text + "'");
    }
    return {parts[0], parts[1], parts[2]};
}

/// Accepts "-75", "-75dBm" or "-75dbm" and returns linear milliwatts.
double parse_dbm(const std::string& text) {
    std::string number = text;
    const auto strip_suffix = [&](const std::string& suffix) {
        if (number.size() >= suffix.size()) {
            std::string tail = number.substr(number.size() - suffix.size());
            for (auto& c : tail) {
                c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
            if (tail == suffix) {
                number = number.substr(0, number.size() - suffix.size());
            }
        }
    };
    strip_suffix("dbm");
    strip_suffix("db");
    return dbm_to_mw(parse_double(number));
}

void print_summary(std::ostream& out, const ReportSummary& summary) {
    out << "dop_bin,count,mean_error_m,max_error_m\n";
    for (const auto& bin : summary.bins) {
        out << '[' << format_double(bin.lo) << ',' << format_double(bin.hi) << "),"
            << bin.count << ',' << format_double(bin.mean_error) << ','
            << format_double(bin.max_error) << '\n';
    }
    out << "infinite," << summary.infinite_count << ','
        << format_double(summary.infinite_mean_error) << ','
        << format_double(summary.infinite_max_error) << '\n';
    out << "spearman_dop_error," << format_double(summary.spearman) << "\n";
}

struct CommonSolverFlags {
    int max_iterations = 50;
    double step_tolerance = 1e-6;
    double good_dop_max = 5.0;
    bool friis_legacy = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-iter", max_iterations, "Gauss-Newton iteration cap");
        cmd->add_option("--tol", step_tolerance, "convergence step tolerance [m]");
        cmd->add_option("--good-dop-max", good_dop_max,
                        "largest DOP still classified Good");
        cmd->add_flag("--friis-legacy", friis_legacy,
                      "use the wavelength-free legacy Friis inversion");
    }
};

PropagationModel make_model(const std::string& name, bool friis_legacy) {
    PropagationModel model = PropagationModel::from_name(name);
    model.friis_legacy_inversion = friis_legacy;
    return model;
}

int run_dop(const std::string& env_path, const std::string& scans_path,
            const std::string& at, bool weighted, const std::string& model_name,
            std::optional<int> dim, const CommonSolverFlags& flags) {
    const Environment env = load_environment(env_path);
    const auto scans = load_scans(scans_path);
    const Vec3 user = parse_xyz(at);

    AssessOptions options;
    options.good_dop_max = flags.good_dop_max;
    if (dim) {
        options.dimension = *dim;
    }
    if (weighted) {
        options.weighting_model = make_model(model_name, flags.friis_legacy);
    }

    std::cout << "timestamp,visible,qualified,dop,classification\n";
    for (const auto& scan : scans) {
        const auto a = assess(env, scan, user, options);
        std::cout << format_double(scan.timestamp) << ',' << a.visible_count << ','
                  << a.qualified_count << ',' << format_double(a.dop) << ','
                  << to_string(a.classification) << '\n';
    }
    return 0;
}

int run_locate(const std::string& env_path, const std::string& scans_path,
               const std::string& model_name, std::optional<int> dim,
               const std::string& init, const CommonSolverFlags& flags) {
    const Environment env = load_environment(env_path);
    const auto scans = load_scans(scans_path);

    SolverConfig cfg;
    cfg.max_iterations = flags.max_iterations;
    cfg.step_tolerance = flags.step_tolerance;
    cfg.good_dop_max = flags.good_dop_max;
    cfg.model = make_model(model_name, flags.friis_legacy);
    cfg.dimension = dim.value_or(env.dimension);
    if (!init.empty()) {
        cfg.initial_guess = parse_xyz(init);
    }

    const auto fixes = solve_trajectory(env, scans, cfg);

    const bool with_truth = std::any_of(scans.begin(), scans.end(),
                                        [](const RssScan& s) { return s.truth.has_value(); });
    std::cout << "timestamp,x,y,z,residual,iterations,converged,dop,classification";
    if (with_truth) {
        std::cout << ",truth_x,truth_y,truth_z,error_m";
    }
    std::cout << '\n';
    for (std::size_t k = 0; k < fixes.size(); ++k) {
        const auto& fix = fixes[k];
        std::cout << format_double(scans[k].timestamp) << ','
                  << format_double(fix.position.x()) << ',' << format_double(fix.position.y())
                  << ',' << format_double(fix.position.z()) << ','
                  << format_double(fix.residual_norm) << ',' << fix.iterations << ','
                  << (fix.converged ? "true" : "false") << ','
                  << format_double(fix.assessment.dop) << ','
                  << to_string(fix.assessment.classification);
        if (with_truth) {
            if (scans[k].truth) {
                const Vec3 truth = *scans[k].truth;
                std::cout << ',' << format_double(truth.x()) << ',' << format_double(truth.y())
                          << ',' << format_double(truth.z()) << ','
                          << format_double((fix.position - truth).norm());
            } else {
                std::cout << ",,,,";
            }
        }
        std::cout << '\n';
    }
    return 0;
}

int run_coverage(const std::string& env_path, const std::string& grid_spec,
                 double pixel, int floors, const std::string& q_dbm,
                 const std::string& ap_id, const std::string& model_name,
                 double floor_height, double rx_height, const std::string& dump,
                 bool friis_legacy) {
    const Environment env = load_environment(env_path);
    env.ap(ap_id);  // fail early on unknown ids

    const auto sep = grid_spec.find('x');
    if (sep == std::string::npos) {
        throw ValidationError("grid", "expected WxH, e.g. 60x40, got '" + grid_spec + "'");
    }
    const auto width = static_cast<std::size_t>(parse_double(grid_spec.substr(0, sep)));
    const auto height = static_cast<std::size_t>(parse_double(grid_spec.substr(sep + 1)));
    if (floors < 1) {
        throw ValidationError("floors", "must be >= 1");
    }

    std::vector<double> floor_heights;
    for (int k = 0; k < floors; ++k) {
        floor_heights.push_back(k * floor_height + rx_height);
    }
    const double q = parse_dbm(q_dbm);
    const auto model = make_model(model_name, friis_legacy);
    const auto grid = make_coverage_grid(env, model, width, height, pixel, floor_heights, q);

    std::vector<Cell> cells;
    for (int k = 0; k < floors; ++k) {
        const Cell cell = extract_cell(grid, k, ap_id);
        std::cout << "floor " << k << ": |C|=" << cell.size() << " G'=";
        if (cell.size() >= 2) {
            std::cout << format_double(geometric_indicator(cell));
            cells.push_back(cell);
        } else {
            std::cout << "n/a (cell too small)";
        }
        std::cout << '\n';
    }
    if (cells.empty()) {
        std::cout << "G_WLAN=n/a (no usable cell)\n";
    } else {
        std::cout << "G_WLAN=" << format_double(wlan_indicator(cells)) << '\n';
    }

    if (!dump.empty()) {
        std::ofstream out(dump);
        if (!out) {
            throw ParseError("cannot write '" + dump + "'");
        }
        out << "floor,i,j\n";
        for (const auto& cell : cells) {
            for (const auto& [i, j] : cell.pixels) {
                out << cell.floor << ',' << i << ',' << j << '\n';
            }
        }
    }
    return 0;
}

int run_simulate(const std::string& env_path, const std::string& traj_path, double sigma,
                 std::uint64_t seed, const std::string& model_name,
                 const std::string& out_path, const std::string& dropout_dbm,
                 bool dop_at_truth, std::optional<int> dim, const std::string& dump_scans,
                 const CommonSolverFlags& flags) {
    const Environment env = load_environment(env_path);
    const Trajectory trajectory = load_trajectory(traj_path);

    NoiseModel noise;
    noise.sigma_db = sigma;
    noise.seed = seed;
    noise.dropout_below = dropout_dbm.empty() ? 0.0 : parse_dbm(dropout_dbm);
    if (const char* env_seed = std::getenv("WIFIDOP_SEED")) {
        noise.seed = static_cast<std::uint64_t>(parse_double(env_seed));
    }

    SolverConfig cfg;
    cfg.max_iterations = flags.max_iterations;
    cfg.step_tolerance = flags.step_tolerance;
    cfg.good_dop_max = flags.good_dop_max;
    cfg.model = make_model(model_name, flags.friis_legacy);
    cfg.dimension = dim.value_or(env.dimension);

    ExperimentOptions options;
    options.dop_at_truth = dop_at_truth;

    const auto report = run_experiment(env, trajectory, noise, cfg.model, cfg, options);
    write_report(report, out_path);

    if (!dump_scans.empty()) {
        const auto samples = sample_trajectory(trajectory);
        std::vector<RssScan> scans;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            RssScan scan = detail::synthesize_scan_stream(env, samples[k].position, noise,
                                                          cfg.model, k);
            scan.timestamp = samples[k].time;
            scans.push_back(std::move(scan));
        }
        write_scans(scans, dump_scans);
    }

    std::cout << "samples," << report.records.size() << '\n';
    print_summary(std::cout, report.summary);
    std::cout << "report written to " << out_path << '\n';
    return 0;
}

int run_evaluate(const std::string& report_path, bool gnuplot) {
    const auto records = load_report_records(report_path);
    const auto summary = summarize(records);
    if (gnuplot) {
        std::cout << "# dop error\n";
        for (const auto& r : records) {
            std::cout << format_double(r.dop) << ' ' << format_double(r.error_m) << '\n';
        }
        std::cout << "\n\n# time dop\n";
        for (const auto& r : records) {
            std::cout << format_double(r.time) << ' ' << format_double(r.dop) << '\n';
        }
        return 0;
    }
    std::cout << "samples," << records.size() << '\n';
    print_summary(std::cout, summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wi-Fi RSS positioning toolkit with DOP quality indicators"};
    app.require_subcommand(1);
    int status = 0;

    // dop
    auto* dop_cmd = app.add_subcommand("dop", "assess scan quality at a fixed position");
    std::string dop_env, dop_scans, dop_at, dop_model = "friis";
    bool dop_weighted = false;
    std::optional<int> dop_dim;
    CommonSolverFlags dop_flags;
    dop_cmd->add_option("--env", dop_env, "environment JSON")->required();
    dop_cmd->add_option("--scans", dop_scans, "scan CSV")->required();
    dop_cmd->add_option("--at", dop_at, "hypothesized user position x,y,z")->required();
    dop_cmd->add_flag("--weighted", dop_weighted, "signal-weighted DOP (extension)");
    dop_cmd->add_option("--model", dop_model, "friis|interlink|snap-wps (for --weighted)");
    dop_cmd->add_option("--dim", dop_dim, "positioning dimension (2 or 3)");
    dop_flags.attach(dop_cmd);
    dop_cmd->callback([&] {
        status = run_dop(dop_env, dop_scans, dop_at, dop_weighted, dop_model, dop_dim,
                         dop_flags);
    });

    // locate
    auto* locate_cmd = app.add_subcommand("locate", "trilaterate positions from scans");
    std::string loc_env, loc_scans, loc_model = "friis", loc_init;
    std::optional<int> loc_dim;
    CommonSolverFlags loc_flags;
    locate_cmd->add_option("--env", loc_env, "environment JSON")->required();
    locate_cmd->add_option("--scans", loc_scans, "scan CSV")->required();
    locate_cmd->add_option("--model", loc_model, "friis|interlink|snap-wps");
    locate_cmd->add_option("--dim", loc_dim, "positioning dimension (2 or 3)");
    locate_cmd->add_option("--init", loc_init, "explicit initial guess x,y,z");
    loc_flags.attach(locate_cmd);
    locate_cmd->callback([&] {
        status = run_locate(loc_env, loc_scans, loc_model, loc_dim, loc_init, loc_flags);
    });

    // coverage
    auto* cov_cmd = app.add_subcommand("coverage", "BSS cell compactness indicators");
    std::string cov_env, cov_grid, cov_q = "-75dBm", cov_ap, cov_model = "friis", cov_dump;
    double cov_pixel = 0.5;
    double cov_floor_height = 3.0;
    double cov_rx_height = 1.5;
    int cov_floors = 1;
    bool cov_friis_legacy = false;
    cov_cmd->add_option("--env", cov_env, "environment JSON")->required();
    cov_cmd->add_option("--grid", cov_grid, "grid size as WxH pixels, e.g. 60x40")->required();
    cov_cmd->add_option("--pixel", cov_pixel, "pixel size [m]");
    cov_cmd->add_option("--floors", cov_floors, "number of floor slices");
    cov_cmd->add_option("--q", cov_q, "quality threshold, dBm (e.g. -75dBm)");
    cov_cmd->add_option("--ap", cov_ap, "access point id")->required();
    cov_cmd->add_option("--model", cov_model, "friis|interlink");
    cov_cmd->add_option("--floor-height", cov_floor_height, "floor-to-floor height [m]");
    cov_cmd->add_option("--rx-height", cov_rx_height, "receiver height above floor [m]");
    cov_cmd->add_option("--dump", cov_dump, "write pixel membership CSV here");
    cov_cmd->add_flag("--friis-legacy", cov_friis_legacy,
                      "use the wavelength-free legacy Friis inversion");
    cov_cmd->callback([&] {
        status = run_coverage(cov_env, cov_grid, cov_pixel, cov_floors, cov_q, cov_ap,
                              cov_model, cov_floor_height, cov_rx_height, cov_dump,
                              cov_friis_legacy);
    });

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "synthetic trajectory experiment");
    std::string sim_env, sim_traj, sim_model = "friis", sim_out = "report.csv";
    std::string sim_dropout = "-100dBm", sim_dump_scans;
    double sim_sigma = 2.0;
    std::uint64_t sim_seed = 42;
    bool sim_dop_at_truth = false;
    std::optional<int> sim_dim;
    CommonSolverFlags sim_flags;
    sim_cmd->add_option("--env", sim_env, "environment JSON")->required();
    sim_cmd->add_option("--trajectory", sim_traj, "trajectory JSON")->required();
    sim_cmd->add_option("--sigma", sim_sigma, "log-normal shadowing sigma [dB]");
    sim_cmd->add_option("--seed", sim_seed, "RNG seed (WIFIDOP_SEED overrides)");
    sim_cmd->add_option("--model", sim_model, "friis|interlink|snap-wps");
    sim_cmd->add_option("--out", sim_out, "report CSV path");
    sim_cmd->add_option("--dropout", sim_dropout, "receiver floor, dBm; readings below are 0");
    sim_cmd->add_flag("--dop-at-truth", sim_dop_at_truth,
                      "evaluate DOP at the true position instead of the estimate");
    sim_cmd->add_option("--dim", sim_dim, "positioning dimension (2 or 3)");
    sim_cmd->add_option("--dump-scans", sim_dump_scans, "also write the synthesized scan CSV");
    sim_flags.attach(sim_cmd);
    sim_cmd->callback([&] {
        status = run_simulate(sim_env, sim_traj, sim_sigma, sim_seed, sim_model, sim_out,
                              sim_dropout, sim_dop_at_truth, sim_dim, sim_dump_scans,
                              sim_flags);
    });

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "bin table and rank correlation of a report");
    std::string eval_report;
    bool eval_gnuplot = false;
    eval_cmd->add_option("--report", eval_report, "report CSV from simulate")->required();
    eval_cmd->add_flag("--gnuplot", eval_gnuplot, "emit plot-ready (dop,error) and (time,dop)");
    eval_cmd->callback([&] { status = run_evaluate(eval_report, eval_gnuplot); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const wifidop::Error& e) {
        std::cerr << "wifidop: error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "wifidop: error: " << e.what() << '\n';
        return 1;
    }
    return status;
}
