#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "fractalmarch/marcher.hpp"
#include "fractalmarch/quatmath.hpp"

namespace fractalmarch {

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    constexpr Rgb operator+(const Rgb& o) const { return {r + o.r, g + o.g, b + o.b}; }
    constexpr Rgb operator-(const Rgb& o) const { return {r - o.r, g - o.g, b - o.b}; }
    constexpr Rgb operator*(const Rgb& o) const { return {r * o.r, g * o.g, b * o.b}; }
    constexpr Rgb operator*(double s) const { return {r * s, g * s, b * s}; }
    constexpr bool operator==(const Rgb&) const = default;
};

struct Rgba {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    double a = 1.0;

    constexpr Rgb rgb() const { return {r, g, b}; }
    static constexpr Rgba from(const Rgb& c, double a = 1.0) { return {c.r, c.g, c.b, a}; }

    constexpr Rgba operator+(const Rgba& o) const { return {r + o.r, g + o.g, b + o.b, a + o.a}; }
    constexpr Rgba operator*(double s) const { return {r * s, g * s, b * s, a * s}; }
    constexpr bool operator==(const Rgba&) const = default;
};

constexpr Rgb mix(const Rgb& a, const Rgb& b, double t) { return a * (1.0 - t) + b * t; }

struct ShadingParams {
    double reflectance = 0.1;
    int maxRecursionDepth = 3;
    Vec3 lightDirection = {0.4242640687119285, 0.7071067811865476, -0.565685424949238};  ///< towards the light
    Rgb lightColor = {1.0, 0.96, 0.9};
    Rgb ambient = {0.10, 0.11, 0.13};
    Rgb backgroundTop = {0.30, 0.42, 0.62};
    Rgb backgroundBottom = {0.86, 0.88, 0.92};
    double albedoScale = 3.5;
    double maxDepthBoost = 1.65;
    double specularExponent = 32.0;

    // Julia palette: interpolated by n / (n + juliaPaletteHalf).
    Rgb juliaBase = {0.10, 0.09, 0.08};
    Rgb juliaTip = {0.26, 0.16, 0.07};
    double juliaPaletteHalf = 8.0;

    // Mandelbulb palette: start from the base, then mix towards one color per
    // clamped orbit-trap component.
    Rgb bulbBase = {0.01, 0.01, 0.01};
    Rgb bulbTrapY = {0.10, 0.20, 0.30};
    Rgb bulbTrapZ = {0.02, 0.10, 0.30};
    Rgb bulbTrapW = {0.30, 0.10, 0.02};

    bool operator==(const ShadingParams&) const = default;
};

/// f0 + (1 - f0)(1 - cos)^5 with cos = clamp(<-incident, normal>, 0, 1).
Rgb schlickFresnel(const Vec3& incident, const Vec3& normal, const Rgb& f0);

/// Single directional light. `viewDir` points from the surface to the eye.
Rgba phong(const Rgba& albedo, const Vec3& normal, const Vec3& viewDir, const ShadingParams& params);

Rgba juliaAlbedo(const Vec3& objectPos, const std::array<double, 4>& aux, int depth,
                 const ShadingParams& params);

Rgba mandelbulbAlbedo(const std::array<double, 4>& aux, const ShadingParams& params);

/// Vertical two-color gradient used for rays that hit nothing.
Rgba background(const Vec3& dir, const ShadingParams& params);

/// Per-ray state carried through the recursion; `color` accumulates the
/// contributions of a hit on top of whatever the payload already held.
struct RadiancePayload {
    Rgba color{0.0, 0.0, 0.0, 0.0};
    int recursionDepth = 0;
};

struct SceneConfig;

/// Called once per traceRadiance invocation with its depth; tests use it to
/// watch the recursion.
using RadianceProbe = std::function<void(int depth)>;

/// Radiance along `ray`: a miss returns the background; a hit returns Phong
/// lighting plus a Fresnel-weighted reflection traced at depth + 1. At
/// depth >= maxRecursionDepth only the background is returned.
Rgba traceRadiance(const Ray& ray, int depth, const SceneConfig& scene,
                   const RadianceProbe& probe = {});

/// The shading half of traceRadiance for a ray whose nearest hit (or miss)
/// is already known. `depth` must be below maxRecursionDepth.
Rgba shadeIntersection(const Ray& ray, const std::optional<SceneHit>& found, int depth,
                       const SceneConfig& scene, const RadianceProbe& probe = {});

}  // namespace fractalmarch
