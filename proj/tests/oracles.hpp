#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written along a different route than the
// code under test (cofactor expansions instead of Eigen, Horner instead of
// monomials, dense walking instead of closed-form interpolation).

#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "wifidop/radio.hpp"

namespace oracle {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat2 = std::array<std::array<double, 2>, 2>;

inline double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Inverse by the adjugate (cofactor transpose) formula.
inline Mat3 inverse3(const Mat3& m) {
    const double d = det3(m);
    Mat3 inv{};
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
    return inv;
}

/// sqrt(Tr((H^T H)^-1)) computed with hand-rolled cofactor arithmetic from
/// unit rows pointing user -> AP. Returns infinity when near-singular in the
/// same scale-aware sense as the implementation.
inline double trace_dop3(const std::vector<wifidop::Vec3>& rows) {
    Mat3 n{};
    for (const auto& b : rows) {
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                n[r][c] += b[r] * b[c];
            }
        }
    }
    const double trace = n[0][0] + n[1][1] + n[2][2];
    const double scale = (trace / 3.0) * (trace / 3.0) * (trace / 3.0);
    if (!(trace > 0.0) || det3(n) < 1e-10 * scale) {
        return std::numeric_limits<double>::infinity();
    }
    const Mat3 inv = inverse3(n);
    return std::sqrt(inv[0][0] + inv[1][1] + inv[2][2]);
}

/// SNAP-WPS cubic in Horner form, without the clamp.
inline double snap_horner(double s) {
    return ((0.000198 * s - 0.025) * s + 1.14) * s - 14.8;
}

/// Position after walking `s` meters along a polyline in tiny fixed steps.
inline wifidop::Vec3 walk_polyline(const std::vector<wifidop::Vec3>& waypoints, double s,
                                   double step = 1e-5) {
    wifidop::Vec3 pos = waypoints.front();
    double remaining = s;
    for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
        wifidop::Vec3 dir = waypoints[k + 1] - waypoints[k];
        const double len = dir.norm();
        if (len <= 0.0) {
            continue;
        }
        dir /= len;
        double walked = 0.0;
        while (walked + step < len) {
            if (remaining < step) {
                return pos + remaining * dir;
            }
            pos += step * dir;
            walked += step;
            remaining -= step;
        }
        const double tail = len - walked;
        if (remaining < tail) {
            return pos + remaining * dir;
        }
        pos = waypoints[k + 1];
        remaining -= tail;
    }
    return waypoints.back();
}

/// Residual sum of squares of the range system at a point.
inline double range_rss(const std::vector<std::pair<wifidop::Vec3, double>>& obs,
                        const wifidop::Vec3& p) {
    double sum = 0.0;
    for (const auto& [ap, d] : obs) {
        const double r = d - (p - ap).norm();
        sum += r * r;
    }
    return sum;
}

/// Exhaustive grid search for the minimizer of the range residual over a box.
inline wifidop::Vec3 grid_argmin(const std::vector<std::pair<wifidop::Vec3, double>>& obs,
                                 const wifidop::Vec3& lo, const wifidop::Vec3& hi,
                                 double spacing) {
    wifidop::Vec3 best = lo;
    double best_sq = std::numeric_limits<double>::infinity();
    const int nx = static_cast<int>(std::round((hi.x() - lo.x()) / spacing));
    const int ny = static_cast<int>(std::round((hi.y() - lo.y()) / spacing));
    const int nz = static_cast<int>(std::round((hi.z() - lo.z()) / spacing));
    for (int ix = 0; ix <= nx; ++ix) {
        for (int iy = 0; iy <= ny; ++iy) {
            for (int iz = 0; iz <= nz; ++iz) {
                const wifidop::Vec3 p{lo.x() + ix * spacing, lo.y() + iy * spacing,
                                      lo.z() + iz * spacing};
                const double sq = range_rss(obs, p);
                if (sq < best_sq) {
                    best_sq = sq;
                    best = p;
                }
            }
        }
    }
    return best;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random rotation from the QR factorization of a Gaussian matrix.
inline std::array<wifidop::Vec3, 3> random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    wifidop::Vec3 a{gauss(rng), gauss(rng), gauss(rng)};
    wifidop::Vec3 b{gauss(rng), gauss(rng), gauss(rng)};
    a.normalize();
    b -= a.dot(b) * a;
    b.normalize();
    const wifidop::Vec3 c = a.cross(b);
    // Columns form an orthonormal, right-handed basis; apply as row vectors.
    return {wifidop::Vec3{a.x(), b.x(), c.x()}, wifidop::Vec3{a.y(), b.y(), c.y()},
            wifidop::Vec3{a.z(), b.z(), c.z()}};
}

inline wifidop::Vec3 rotate(const std::array<wifidop::Vec3, 3>& rot, const wifidop::Vec3& v) {
    return {rot[0].dot(v), rot[1].dot(v), rot[2].dot(v)};
}

}  // namespace oracle
