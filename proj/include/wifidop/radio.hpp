#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wifidop/errors.hpp"

namespace wifidop {

using Vec3 = Eigen::Vector3d;

/// Converts a dBm level to linear milliwatts. Throws InvalidUnit for non-finite input.
double dbm_to_mw(double level_dbm);

/// Converts linear milliwatts to dBm. Throws NonPositivePower when power_mw <= 0.
double mw_to_dbm(double power_mw);

/// A fixed Wi-Fi transmitter with known coordinates and radio parameters.
///
/// Powers are linear milliwatts and gains are dimensionless linear ratios;
/// dBm appears only at I/O boundaries.
struct AccessPoint {
    std::string id;
    Vec3 position = Vec3::Zero();  // meters
    double tx_power = 1.0;         // milliwatts, > 0
    double tx_gain = 1.0;          // linear, > 0
    double wavelength = 0.125;     // meters, > 0
};

struct Receiver {
    double rx_gain = 1.0;  // linear, > 0
};

/// One mobile observation: received power per AP at one instant.
///
/// A reading of 0 mW means "AP not received"; an AP absent from the map was
/// not scanned at all.
struct RssScan {
    double timestamp = 0.0;                  // seconds
    std::map<std::string, double> readings;  // AP id -> received power, milliwatts
    std::optional<Vec3> truth;               // ground-truth position (simulator only)
};

struct Environment {
    std::vector<AccessPoint> aps;
    Receiver receiver;
    int dimension = 3;          // 2 or 3
    double ss_threshold = 0.0;  // milliwatts; readings below it are excluded

    /// Returns the AP with the given id, or nullptr.
    const AccessPoint* find(const std::string& id) const;

    /// Returns the AP with the given id. Throws UnknownAp.
    const AccessPoint& ap(const std::string& id) const;

    /// Checks all invariants (positive parameters, unique ids, valid dimension).
    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// Checks that every reading is non-negative and references an AP in env.
/// Throws ValidationError or UnknownAp.
void validate_scan(const Environment& env, const RssScan& scan);

}  // namespace wifidop
