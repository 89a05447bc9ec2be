#include "wifidop/propagation.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>

namespace wifidop {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double link_budget(const AccessPoint& ap, const Receiver& rx) {
    return ap.tx_power * ap.tx_gain * rx.rx_gain;
}

}  // namespace

PropagationModel PropagationModel::from_name(const std::string& name) {
    if (name == "friis") {
        return friis();
    }
    if (name == "interlink") {
        return interlink();
    }
    if (name == "snap-wps") {
        return snap_wps();
    }
    throw ValidationError("model", "expected friis, interlink or snap-wps, got '" + name + "'");
}

std::string PropagationModel::name() const {
    switch (variant) {
        case Variant::Friis:
            return "friis";
        case Variant::InterlinkNetworks:
            return "interlink";
        case Variant::SnapWps:
            return "snap-wps";
    }
    return "?";
}

double forward_rss(const PropagationModel& model, const AccessPoint& ap,
                   const Receiver& rx, double distance_m) {
    if (model.variant == PropagationModel::Variant::SnapWps) {
        throw UnsupportedDirection("SNAP-WPS is an inverse-only empirical fit");
    }
    if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
        throw InvalidDistance("distance must be finite and > 0 m");
    }
    const double ratio = ap.wavelength / (kFourPi * distance_m);
    return link_budget(ap, rx) * std::pow(ratio, model.exponent);
}

double invert_distance(const PropagationModel& model, const AccessPoint& ap,
                       const Receiver& rx, double rss_mw) {
    if (!(rss_mw > 0.0) || !std::isfinite(rss_mw)) {
        throw NonPositivePower("received power must be finite and > 0 mW");
    }
    if (model.variant == PropagationModel::Variant::SnapWps) {
        return snap_distance(-mw_to_dbm(rss_mw));
    }
    const double ratio = link_budget(ap, rx) / rss_mw;
    if (model.variant == PropagationModel::Variant::Friis && model.friis_legacy_inversion) {
        return 0.25 * std::sqrt(ratio);
    }
    return ap.wavelength / kFourPi * std::pow(ratio, 1.0 / model.exponent);
}

bool snap_in_calibrated_range(double attenuation_db) {
    return attenuation_db >= kSnapCalibratedMin && attenuation_db <= kSnapCalibratedMax;
}

double snap_distance(double attenuation_db) {
    if (!std::isfinite(attenuation_db)) {
        throw InvalidUnit("attenuation must be finite");
    }
    if (!snap_in_calibrated_range(attenuation_db)) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            std::cerr << "wifidop: warning: SNAP-WPS attenuation " << attenuation_db
                      << " dB is outside the calibrated 15..90 dB range"
                      << " (further warnings suppressed)\n";
        }
    }
    const double s = attenuation_db;
    const double raw = 0.000198 * s * s * s - 0.025 * s * s + 1.14 * s - 14.8;
    return std::max(raw, kEpsilonDistance);
}

double range_sensitivity(const PropagationModel& model, const AccessPoint& ap,
                         const Receiver& rx, double signal) {
    if (model.variant == PropagationModel::Variant::SnapWps) {
        if (!std::isfinite(signal)) {
            throw InvalidUnit("attenuation must be finite");
        }
        const double s = signal;
        return 3.0 * 0.000198 * s * s - 2.0 * 0.025 * s + 1.14;
    }
    if (!(signal > 0.0) || !std::isfinite(signal)) {
        throw NonPositivePower("received power must be finite and > 0 mW");
    }
    const double budget = link_budget(ap, rx);
    if (model.variant == PropagationModel::Variant::Friis && model.friis_legacy_inversion) {
        return 0.25 * std::sqrt(budget);
    }
    return ap.wavelength / kFourPi * std::pow(budget, 1.0 / model.exponent);
}

}  // namespace wifidop
