#include "fractalmarch/marcher.hpp"

#include <cmath>

#include "fractalmarch/scene.hpp"

namespace fractalmarch {

std::optional<Interval> intersectBoundingSphere(const Ray& ray, double radius) {
    const double b = dot(ray.origin, ray.dir);
    const double c = dot(ray.origin, ray.origin) - radius * radius;
    const double disc = b * b - c;
    if (disc < 0.0) {
        return std::nullopt;
    }
    const double s = std::sqrt(disc);
    const double tExit = -b + s;
    if (tExit < 0.0) {
        return std::nullopt;
    }
    return Interval{std::max(-b - s, 0.0), tExit, std::nullopt};
}

std::optional<Interval> clipByPlanes(const Interval& interval, const Ray& ray,
                                     std::span<const CutPlane> planes) {
    Interval out = interval;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        const CutPlane& plane = planes[i];
        // Kept where offset + t * slope <= 0.
        const double offset = dot(ray.origin - plane.point, plane.normal);
        const double slope = dot(ray.dir, plane.normal);
        if (slope == 0.0) {
            if (offset > 0.0) {
                return std::nullopt;
            }
            continue;
        }
        const double tPlane = -offset / slope;
        if (slope > 0.0) {
            out.tExit = std::min(out.tExit, tPlane);
        } else if (tPlane > out.tEnter) {
            out.tEnter = tPlane;
            out.enteringPlane = i;
        }
    }
    if (out.tEnter > out.tExit) {
        return std::nullopt;
    }
    return out;
}

std::optional<Interval> marchInterval(const Ray& ray, const MarchConfig& config) {
    std::optional<Interval> sphere = intersectBoundingSphere(ray, config.boundingSphereRadius);
    if (!sphere) {
        return std::nullopt;
    }
    sphere->tEnter = std::max(sphere->tEnter, config.precis);
    sphere->tExit = std::min(sphere->tExit, config.tMax);
    if (sphere->tEnter > sphere->tExit) {
        return std::nullopt;
    }
    return clipByPlanes(*sphere, ray, config.cutPlanes);
}

std::optional<InstanceHit> intersectInstance(const Ray& worldRay, const Instance& instance,
                                             double closestT, int* steps) {
    const Affine& toObject = instance.worldToObject();
    const Vec3 objectDir = toObject.applyVector(worldRay.dir);
    const double dirScale = length(objectDir);
    const Ray objectRay{toObject.applyPoint(worldRay.origin), objectDir / dirScale};

    const auto field = [&instance](const Vec3& p) { return instance.distance(p); };
    const MarchOutcome outcome = march(objectRay, field, instance.march);
    if (steps != nullptr) {
        *steps += outcome.steps;
    }
    if (!outcome.hit) {
        return std::nullopt;
    }
    // Object-space t measures |objectDir| per unit of world t.
    const double worldT = outcome.hit->t / dirScale;
    if (!(worldT < closestT)) {
        return std::nullopt;
    }

    InstanceHit result;
    result.hit = *outcome.hit;
    result.hit.t = worldT;
    result.objectPoint = objectRay.at(outcome.hit->t);

    if (outcome.hit->cutPlane) {
        result.objectNormal = normalize(instance.march.cutPlanes[*outcome.hit->cutPlane].normal);
    } else {
        const auto scalar = [&instance](const Vec3& p) { return instance.distance(p).d; };
        result.objectNormal = estimateNormal(scalar, result.objectPoint, instance.march.precis)
                                  .value_or(-objectRay.dir);
    }
    result.hit.normal = normalize(instance.normalToWorld() * result.objectNormal);
    return result;
}

std::optional<SceneHit> intersectScene(const Ray& worldRay, std::span<const Instance> instances,
                                       int* steps) {
    std::optional<SceneHit> best;
    double closest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (auto hit = intersectInstance(worldRay, instances[i], closest, steps)) {
            closest = hit->hit.t;
            best = SceneHit{*hit, i};
        }
    }
    return best;
}

}  // namespace fractalmarch
