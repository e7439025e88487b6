#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fractalmarch/estimators.hpp"
#include "fractalmarch/quatmath.hpp"

namespace fractalmarch {

struct Ray {
    Vec3 origin;
    Vec3 dir;  ///< unit length

    Vec3 at(double t) const { return origin + dir * t; }
};

/// Half-space clip. Points with <x - point, normal> > 0 are removed.
struct CutPlane {
    Vec3 point;
    Vec3 normal;

    bool operator==(const CutPlane&) const = default;
};

struct MarchConfig {
    double precis = 2.5e-4;
    double tMax = 7000.0;
    int maxSteps = 1024;
    double stepClamp = 0.2;
    double boundingSphereRadius = 2.0;
    std::vector<CutPlane> cutPlanes;

    bool operator==(const MarchConfig&) const = default;
};

struct Interval {
    double tEnter = 0.0;
    double tExit = 0.0;
    /// Index of the cut plane that produced tEnter, if one did.
    std::optional<std::size_t> enteringPlane;
};

struct HitInfo {
    double t = 0.0;
    int steps = 0;
    std::array<double, 4> aux{};
    Vec3 normal;
    /// Set when the march stopped on its first sample at a cut plane, i.e. the
    /// ray entered the set through the cut face.
    std::optional<std::size_t> cutPlane;
};

/// Overlap of the ray with the solid sphere of `radius` around the origin,
/// clipped to t >= 0.
std::optional<Interval> intersectBoundingSphere(const Ray& ray, double radius);

std::optional<Interval> clipByPlanes(const Interval& interval, const Ray& ray,
                                     std::span<const CutPlane> planes);

/// Admissible marching range: [precis, tMax] intersected with the bounding
/// sphere and every cut plane.
std::optional<Interval> marchInterval(const Ray& ray, const MarchConfig& config);

struct MarchOutcome {
    std::optional<HitInfo> hit;
    int steps = 0;
};

/// Sphere tracing. `field` maps a point to a DistanceSample. A sample whose
/// distance is below `precis` (or NaN) is a hit; steps are clamped to
/// `stepClamp` so an overestimating field cannot jump across thin features.
template <typename Field>
MarchOutcome march(const Ray& ray, Field&& field, const MarchConfig& config) {
    MarchOutcome out;
    const std::optional<Interval> range = marchInterval(ray, config);
    if (!range) {
        return out;
    }
    double t = range->tEnter;
    for (int i = 0; i < config.maxSteps; ++i) {
        const DistanceSample s = field(ray.at(t));
        out.steps = i + 1;
        if (!(s.d >= config.precis)) {
            HitInfo hit;
            hit.t = t;
            hit.steps = i + 1;
            hit.aux = s.aux;
            if (i == 0) {
                hit.cutPlane = range->enteringPlane;
            }
            out.hit = hit;
            return out;
        }
        t += std::min(s.d, config.stepClamp);
        if (t > range->tExit) {
            return out;
        }
    }
    return out;
}

/// Hit with t and aux filled in; the normal is left for the caller.
template <typename Field>
std::optional<HitInfo> raycast(const Ray& ray, Field&& field, const MarchConfig& config) {
    return march(ray, std::forward<Field>(field), config).hit;
}

class Instance;

/// World-space result of intersecting one instance.
struct InstanceHit {
    HitInfo hit;        ///< t in world units along the world ray, world normal
    Vec3 objectPoint;   ///< hit position in the instance's local space
    Vec3 objectNormal;
};

/// Transforms the ray into the instance's local space, marches it, estimates
/// the normal there and brings both back to world space. Hits at or beyond
/// `closestT` are rejected.
std::optional<InstanceHit> intersectInstance(const Ray& worldRay, const Instance& instance,
                                             double closestT = std::numeric_limits<double>::infinity(),
                                             int* steps = nullptr);

struct SceneHit {
    InstanceHit hit;
    std::size_t instance = 0;
};

/// Nearest hit over all instances.
std::optional<SceneHit> intersectScene(const Ray& worldRay, std::span<const Instance> instances,
                                       int* steps = nullptr);

}  // namespace fractalmarch
