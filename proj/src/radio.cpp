#include "wifidop/radio.hpp"

#include <cmath>
#include <unordered_set>

namespace wifidop {

double dbm_to_mw(double level_dbm) {
    if (!std::isfinite(level_dbm)) {
        throw InvalidUnit("dBm level must be finite");
    }
    return std::pow(10.0, level_dbm / 10.0);
}

double mw_to_dbm(double power_mw) {
    if (!(power_mw > 0.0)) {
        throw NonPositivePower("power must be > 0 mW to express in dBm");
    }
    return 10.0 * std::log10(power_mw);
}

const AccessPoint* Environment::find(const std::string& id) const {
    for (const auto& ap : aps) {
        if (ap.id == id) {
            return &ap;
        }
    }
    return nullptr;
}

const AccessPoint& Environment::ap(const std::string& id) const {
    const AccessPoint* found = find(id);
    if (!found) {
        throw UnknownAp("unknown access point '" + id + "'");
    }
    return *found;
}

void Environment::validate() const {
    if (dimension != 2 && dimension != 3) {
        throw ValidationError("dimension", "must be 2 or 3");
    }
    if (!(ss_threshold >= 0.0) || !std::isfinite(ss_threshold)) {
        throw ValidationError("ss_threshold", "must be a finite value >= 0 mW");
    }
    if (aps.empty()) {
        throw ValidationError("aps", "at least one access point is required");
    }
    if (!(receiver.rx_gain > 0.0) || !std::isfinite(receiver.rx_gain)) {
        throw ValidationError("receiver.gain", "must be finite and > 0");
    }
    std::unordered_set<std::string> seen;
    for (const auto& ap : aps) {
        if (ap.id.empty()) {
            throw ValidationError("id", "access point id must not be empty");
        }
        if (!seen.insert(ap.id).second) {
            throw ValidationError("id", "duplicate access point id '" + ap.id + "'");
        }
        if (!ap.position.allFinite()) {
            throw ValidationError("position", "coordinates of '" + ap.id + "' must be finite");
        }
        if (!(ap.tx_power > 0.0) || !std::isfinite(ap.tx_power)) {
            throw ValidationError("tx_power", "of '" + ap.id + "' must be finite and > 0 mW");
        }
        if (!(ap.tx_gain > 0.0) || !std::isfinite(ap.tx_gain)) {
            throw ValidationError("tx_gain", "of '" + ap.id + "' must be finite and > 0");
        }
        if (!(ap.wavelength > 0.0) || !std::isfinite(ap.wavelength)) {
            throw ValidationError("wavelength", "of '" + ap.id + "' must be finite and > 0 m");
        }
    }
}

void validate_scan(const Environment& env, const RssScan& scan) {
    for (const auto& [id, reading] : scan.readings) {
        if (!env.find(id)) {
            throw UnknownAp("scan references unknown access point '" + id + "'");
        }
        if (!(reading >= 0.0) || !std::isfinite(reading)) {
            throw ValidationError("rss", "reading for '" + id + "' must be finite and >= 0 mW");
        }
    }
}

}  // namespace wifidop
