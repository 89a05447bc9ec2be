#include "wifidop/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "wifidop/dop.hpp"

namespace wifidop {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json parse_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("in '") + path + "': " + e.what());
    }
}

template <typename T>
T required(const json& object, const std::string& key) {
    if (!object.contains(key)) {
        throw ValidationError(key, "missing");
    }
    try {
        return object.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(key, "has the wrong type");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

double parse_double(const std::string& token) {
    const std::string text = strip(token);
    if (text.empty()) {
        throw ParseError("empty numeric field");
    }
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
        throw ParseError("malformed number '" + token + "'");
    }
    return value;
}

Environment load_environment(const std::string& path) {
    const json root = parse_json(path);

    Environment env;
    env.dimension = required<int>(root, "dimension");
    if (!root.contains("ss_threshold_dbm")) {
        throw ValidationError("ss_threshold_dbm", "missing");
    }
    if (root.at("ss_threshold_dbm").is_null()) {
        env.ss_threshold = 0.0;  // threshold disabled
    } else {
        env.ss_threshold = dbm_to_mw(required<double>(root, "ss_threshold_dbm"));
    }
    const json receiver = required<json>(root, "receiver");
    env.receiver.rx_gain = required<double>(receiver, "gain");

    const json aps = required<json>(root, "aps");
    if (!aps.is_array()) {
        throw ValidationError("aps", "must be an array");
    }
    for (const auto& entry : aps) {
        AccessPoint ap;
        ap.id = required<std::string>(entry, "id");
        ap.position = {required<double>(entry, "x"), required<double>(entry, "y"),
                       required<double>(entry, "z")};
        ap.tx_power = dbm_to_mw(required<double>(entry, "tx_power_dbm"));
        ap.tx_gain = required<double>(entry, "tx_gain");
        ap.wavelength = required<double>(entry, "wavelength_m");
        env.aps.push_back(std::move(ap));
    }
    env.validate();
    return env;
}

std::vector<RssScan> load_scans(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("'" + path + "' is empty");
    }
    const auto header = split_csv_line(strip(line));
    const bool with_truth = header.size() == 6;
    if (!(header.size() == 3 || with_truth) || header[0] != "timestamp" ||
        header[1] != "ap_id" || header[2] != "rss_dbm") {
        throw ParseError("'" + path +
                         "': expected header timestamp,ap_id,rss_dbm[,truth_x,truth_y,truth_z]");
    }

    std::map<double, RssScan> by_time;  // rows sharing a timestamp form one scan
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = strip(line);
        if (text.empty()) {
            continue;
        }
        const auto fields = split_csv_line(text);
        if (fields.size() != header.size()) {
            throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                             ": expected " + std::to_string(header.size()) + " fields");
        }
        const double timestamp = parse_double(fields[0]);
        const std::string& ap_id = fields[1];
        const double level_dbm = parse_double(fields[2]);
        double reading = 0.0;
        if (std::isfinite(level_dbm)) {
            reading = dbm_to_mw(level_dbm);
        } else if (!(level_dbm < 0.0)) {  // -inf means "not received"; +inf/nan are malformed
            throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                             ": rss_dbm must be finite or -inf");
        }

        RssScan& scan = by_time[timestamp];
        scan.timestamp = timestamp;
        if (!scan.readings.emplace(ap_id, reading).second) {
            throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                             ": duplicate reading for '" + ap_id + "'");
        }
        if (with_truth && !fields[3].empty()) {
            scan.truth = Vec3{parse_double(fields[3]), parse_double(fields[4]),
                              parse_double(fields[5])};
        }
    }

    std::vector<RssScan> scans;
    scans.reserve(by_time.size());
    for (auto& [timestamp, scan] : by_time) {
        scans.push_back(std::move(scan));
    }
    return scans;
}

void write_scans(const std::vector<RssScan>& scans, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write '" + path + "'");
    }
    const bool with_truth =
        std::any_of(scans.begin(), scans.end(), [](const RssScan& s) { return s.truth.has_value(); });
    out << "timestamp,ap_id,rss_dbm";
    if (with_truth) {
        out << ",truth_x,truth_y,truth_z";
    }
    out << '\n';
    for (const auto& scan : scans) {
        for (const auto& [ap_id, reading] : scan.readings) {
            out << format_double(scan.timestamp) << ',' << ap_id << ','
                << (reading > 0.0 ? format_double(mw_to_dbm(reading)) : "-inf");
            if (with_truth) {
                if (scan.truth) {
                    out << ',' << format_double(scan.truth->x()) << ','
                        << format_double(scan.truth->y()) << ','
                        << format_double(scan.truth->z());
                } else {
                    out << ",,,";
                }
            }
            out << '\n';
        }
    }
}

Trajectory load_trajectory(const std::string& path) {
    const json root = parse_json(path);
    Trajectory trajectory;
    trajectory.speed = required<double>(root, "speed_mps");
    trajectory.sample_period = required<double>(root, "sample_period_s");
    const json waypoints = required<json>(root, "waypoints");
    if (!waypoints.is_array() || waypoints.empty()) {
        throw ValidationError("waypoints", "must be a non-empty array");
    }
    for (const auto& wp : waypoints) {
        if (!wp.is_array() || wp.size() != 3) {
            throw ValidationError("waypoints", "each waypoint must be [x, y, z]");
        }
        trajectory.waypoints.emplace_back(wp[0].get<double>(), wp[1].get<double>(),
                                          wp[2].get<double>());
    }
    return trajectory;
}

void write_report(const EvaluationReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write '" + path + "'");
    }
    out << "time,truth_x,truth_y,truth_z,est_x,est_y,est_z,error_m,dop,visible,"
           "qualified,classification,converged\n";
    for (const auto& r : report.records) {
        out << format_double(r.time) << ',' << format_double(r.truth.x()) << ','
            << format_double(r.truth.y()) << ',' << format_double(r.truth.z()) << ','
            << format_double(r.estimate.x()) << ',' << format_double(r.estimate.y()) << ','
            << format_double(r.estimate.z()) << ',' << format_double(r.error_m) << ','
            << format_double(r.dop) << ',' << r.visible << ',' << r.qualified << ','
            << to_string(r.classification) << ',' << (r.converged ? "true" : "false") << '\n';
    }
}

std::vector<SampleRecord> load_report_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("'" + path + "' is empty");
    }
    if (strip(line) !=
        "time,truth_x,truth_y,truth_z,est_x,est_y,est_z,error_m,dop,visible,"
        "qualified,classification,converged") {
        throw ParseError("'" + path + "': unrecognized report header");
    }

    std::vector<SampleRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = strip(line);
        if (text.empty()) {
            continue;
        }
        const auto fields = split_csv_line(text);
        if (fields.size() != 13) {
            throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                             ": expected 13 fields");
        }
        SampleRecord r;
        r.time = parse_double(fields[0]);
        r.truth = {parse_double(fields[1]), parse_double(fields[2]), parse_double(fields[3])};
        r.estimate = {parse_double(fields[4]), parse_double(fields[5]), parse_double(fields[6])};
        r.error_m = parse_double(fields[7]);
        r.dop = parse_double(fields[8]);
        r.visible = static_cast<int>(parse_double(fields[9]));
        r.qualified = static_cast<int>(parse_double(fields[10]));
        r.classification = classification_from_string(fields[11]);
        if (fields[12] == "true") {
            r.converged = true;
        } else if (fields[12] == "false") {
            r.converged = false;
        } else {
            throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                             ": converged must be true or false");
        }
        records.push_back(r);
    }
    return records;
}

}  // namespace wifidop
