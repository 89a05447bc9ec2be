#pragma once

#include <string>

#include "wifidop/radio.hpp"

namespace wifidop {

/// Lower clamp for SNAP-WPS distances; the raw cubic is negative for weak
/// attenuations and a nonpositive range would break the geometry downstream.
inline constexpr double kEpsilonDistance = 0.01;  // meters

/// Signal attenuation range the SNAP-WPS cubic was calibrated on.
inline constexpr double kSnapCalibratedMin = 15.0;  // dB
inline constexpr double kSnapCalibratedMax = 90.0;  // dB

struct PropagationModel {
    enum class Variant { Friis, InterlinkNetworks, SnapWps };

    Variant variant = Variant::Friis;
    /// Path-loss exponent: 2 for Friis, 3.5 for Interlink Networks. Unused by SnapWps.
    double exponent = 2.0;
    /// Reproduces the wavelength-free inversion d = (1/4)*sqrt(Pt*Gt*Gr/Pr)
    /// sometimes seen for the Friis model. Off by default; the default inversion
    /// restores the lambda/(4*pi) factor the forward equation requires.
    bool friis_legacy_inversion = false;

    static PropagationModel friis() { return {Variant::Friis, 2.0, false}; }
    static PropagationModel interlink() { return {Variant::InterlinkNetworks, 3.5, false}; }
    static PropagationModel snap_wps() { return {Variant::SnapWps, 0.0, false}; }

    /// Parses "friis" | "interlink" | "snap-wps". Throws ValidationError.
    static PropagationModel from_name(const std::string& name);
    std::string name() const;
};

/// Predicted received power [mW] at the given distance:
///   P_R = P_T * G_R * G_T * (lambda / (4*pi*d))^n
/// Throws InvalidDistance for d <= 0 and UnsupportedDirection for SnapWps,
/// whose empirical fit is inverse-only.
double forward_rss(const PropagationModel& model, const AccessPoint& ap,
                   const Receiver& rx, double distance_m);

/// Distance [m] implied by a received power:
///   d = (lambda / (4*pi)) * (P_T * G_T * G_R / P_R)^(1/n)
/// For SnapWps the power is converted to an attenuation magnitude
/// s = -dBm(rss) and fed to snap_distance. Throws NonPositivePower for rss <= 0.
double invert_distance(const PropagationModel& model, const AccessPoint& ap,
                       const Receiver& rx, double rss_mw);

/// SNAP-WPS empirical range from a signal attenuation magnitude s in dB
/// (positive, larger = weaker):
///   d = 0.000198*s^3 - 0.025*s^2 + 1.14*s - 14.8
/// clamped below at kEpsilonDistance. Warns (once per process) when s is
/// outside the calibrated 15..90 dB range. Throws InvalidUnit for non-finite s.
double snap_distance(double attenuation_db);

/// True when s lies inside the cubic's calibrated 15..90 dB range.
bool snap_in_calibrated_range(double attenuation_db);

/// Coefficient mapping a signal-domain perturbation to a range perturbation:
///   Friis:     c = (lambda/4pi) * sqrt(P_T*G_T*G_R)      applied to delta(1/sqrt(P_R))
///   Interlink: c = (lambda/4pi) * (P_T*G_T*G_R)^(1/3.5)  applied to delta(P_R^(-1/3.5))
///   SnapWps:   c = d'(s) = 0.000594*s^2 - 0.05*s + 1.14  applied to delta(s)
/// `signal` is the received power in mW for the path-loss models and the
/// attenuation magnitude s in dB for SnapWps (the derivative is that of the
/// unclamped cubic). Errors as invert_distance.
double range_sensitivity(const PropagationModel& model, const AccessPoint& ap,
                         const Receiver& rx, double signal);

}  // namespace wifidop
