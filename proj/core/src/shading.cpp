#include "fractalmarch/shading.hpp"

#include <algorithm>
#include <cmath>

#include "fractalmarch/scene.hpp"

namespace fractalmarch {
namespace {

Rgb clampNonNegative(const Rgb& c) {
    return {std::max(c.r, 0.0), std::max(c.g, 0.0), std::max(c.b, 0.0)};
}

double saturate(double v) { return std::clamp(v, 0.0, 1.0); }

ShadingParams withOverrides(const ShadingParams& base, const ShadingOverrides& o) {
    ShadingParams p = base;
    if (o.reflectance) {
        p.reflectance = *o.reflectance;
    }
    if (o.albedoScale) {
        p.albedoScale = *o.albedoScale;
    }
    return p;
}

}  // namespace

Rgb schlickFresnel(const Vec3& incident, const Vec3& normal, const Rgb& f0) {
    const double cosTheta = saturate(dot(-incident, normal));
    const double k = std::pow(1.0 - cosTheta, 5.0);
    return f0 + (Rgb{1.0, 1.0, 1.0} - f0) * k;
}

Rgba phong(const Rgba& albedo, const Vec3& normal, const Vec3& viewDir, const ShadingParams& params) {
    const Vec3& l = params.lightDirection;
    const Rgb a = albedo.rgb();
    const double diffuse = std::max(dot(normal, l), 0.0);
    const Vec3 r = reflect(-l, normal);
    const double specular = std::pow(std::max(dot(r, viewDir), 0.0), params.specularExponent);
    const Rgb color = params.ambient * a + a * params.lightColor * diffuse + params.lightColor * specular;
    return Rgba::from(clampNonNegative(color), albedo.a);
}

Rgba juliaAlbedo(const Vec3& objectPos, const std::array<double, 4>& aux, int depth,
                 const ShadingParams& params) {
    (void)objectPos;
    const double n = std::max(aux[0], 0.0);
    const double s = n / (n + params.juliaPaletteHalf);
    Rgb albedo = mix(params.juliaBase, params.juliaTip, s) * params.albedoScale;
    // The last bounce gets a flat boost; the original gate step(0, |y|) is 1
    // for every y, so it is applied unconditionally.
    if (depth == params.maxRecursionDepth - 1) {
        albedo = albedo + Rgb{1.0, 1.0, 1.0} * params.maxDepthBoost;
    }
    return Rgba::from(albedo);
}

Rgba mandelbulbAlbedo(const std::array<double, 4>& aux, const ShadingParams& params) {
    Rgb c = params.bulbBase;
    c = mix(c, params.bulbTrapY, saturate(aux[1]));
    c = mix(c, params.bulbTrapZ, saturate(aux[2]));
    c = mix(c, params.bulbTrapW, saturate(aux[3]));
    return Rgba::from(c * params.albedoScale);
}

Rgba background(const Vec3& dir, const ShadingParams& params) {
    const double t = saturate(0.5 * (dir.y + 1.0));
    return Rgba::from(mix(params.backgroundBottom, params.backgroundTop, t));
}

Rgba traceRadiance(const Ray& ray, int depth, const SceneConfig& scene, const RadianceProbe& probe) {
    if (probe) {
        probe(depth);
    }
    if (depth >= scene.shading.maxRecursionDepth) {
        return background(ray.dir, scene.shading);
    }
    return shadeIntersection(ray, intersectScene(ray, scene.instances), depth, scene, probe);
}

Rgba shadeIntersection(const Ray& ray, const std::optional<SceneHit>& found, int depth,
                       const SceneConfig& scene, const RadianceProbe& probe) {
    if (!found) {
        return background(ray.dir, scene.shading);
    }
    const Instance& inst = scene.instances[found->instance];
    const ShadingParams params = withOverrides(scene.shading, inst.shadingOverrides);
    const InstanceHit& hit = found->hit;
    const Vec3& n = hit.hit.normal;

    RadiancePayload payload{{0.0, 0.0, 0.0, 0.0}, depth};

    const Rgba albedo = inst.kind() == FractalKind::julia
                            ? juliaAlbedo(hit.objectPoint, hit.hit.aux, depth, params)
                            : mandelbulbAlbedo(hit.hit.aux, params);

    // Spawn the reflection 10 precis off the surface, measured in the
    // instance's own space where precis is defined.
    const Vec3 offset =
        inst.objectToWorld().applyVector(hit.objectNormal * (10.0 * inst.march.precis));
    const Ray reflection{ray.at(hit.hit.t) + offset, normalize(reflect(ray.dir, n))};
    const Rgba reflectionColor = traceRadiance(reflection, depth + 1, scene, probe);
    const Rgb fresnel = schlickFresnel(ray.dir, n, albedo.rgb());
    const Rgba reflected{params.reflectance * fresnel.r * reflectionColor.r,
                         params.reflectance * fresnel.g * reflectionColor.g,
                         params.reflectance * fresnel.b * reflectionColor.b,
                         params.reflectance * reflectionColor.a};

    const Rgba phongColor = phong(albedo, n, -ray.dir, params);
    payload.color = phongColor + reflected + payload.color;
    return payload.color;
}

}  // namespace fractalmarch
