#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the estimators it is used to check.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "fractalmarch/engine.hpp"
#include "fractalmarch/quatmath.hpp"

namespace oracle {

using fractalmarch::Vec3;

/// Exact distance field of the sphere of radius r around the origin.
fractalmarch::DistanceSample sphereField(const Vec3& p, double r = 1.0);

/// First t >= 0 where origin + t dir meets the sphere, if any.
std::optional<double> raySphere(const Vec3& origin, const Vec3& dir, double radius = 1.0);

/// Real-axis trace of z -> z^3 (c = 0) with the derivative carried alongside.
/// Stops once z^2 exceeds `escapeSq`; returns 0.5 |z| ln|z| / |dz|.
double cubicRealAxisTrace(double x, double escapeSq = 256.0, int maxIterations = 200);

/// Gradient by central differences with step h.
template <typename F>
Vec3 centralGradient(F&& f, const Vec3& p, double h) {
    const double gx = f(p + Vec3{h, 0, 0}) - f(p - Vec3{h, 0, 0});
    const double gy = f(p + Vec3{0, h, 0}) - f(p - Vec3{0, h, 0});
    const double gz = f(p + Vec3{0, 0, h}) - f(p - Vec3{0, 0, h});
    return Vec3{gx, gy, gz} / (2.0 * h);
}

/// Angle between two vectors in degrees.
double angleDegrees(const Vec3& a, const Vec3& b);

/// Uniform point with |p| in [rmin, rmax] (direction uniform on the sphere).
Vec3 randomShellPoint(std::mt19937_64& rng, double rmin, double rmax);

/// Projected area, in pixels, of a sphere of radius r centred on the view axis
/// at distance `dist` from a pinhole camera with the given vertical fov and
/// image height.
double projectedDiscArea(double r, double dist, double fovDegrees, int height);

/// Pixels whose primary ray hit something.
std::size_t silhouettePixels(const fractalmarch::RenderResult& result);

/// Bytes of the P6 encoding of `fb`.
std::vector<std::uint8_t> ppmBytes(const fractalmarch::Framebuffer& fb);

}  // namespace oracle
