#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fractalmarch/estimators.hpp"
#include "fractalmarch/marcher.hpp"
#include "fractalmarch/shading.hpp"
#include "fractalmarch/transform.hpp"

namespace fractalmarch {

inline constexpr int kSchemaVersion = 1;

/// Upper bound accepted for any iteration count (instances and animation).
inline constexpr int kIterationLimit = 10000;

enum class FractalKind { julia, mandelbulb };

using FractalParams = std::variant<JuliaParams, MandelbulbParams>;

struct ShadingOverrides {
    std::optional<double> reflectance;
    std::optional<double> albedoScale;

    bool operator==(const ShadingOverrides&) const = default;
};

/// A fractal placed in the world. The world-to-object transform is derived
/// from objectToWorld on construction and kept in sync by setTransform.
class Instance {
public:
    /// Throws SingularTransform for a non-invertible transform.
    Instance(FractalParams params, const Affine& objectToWorld, MarchConfig march = {});

    FractalKind kind() const {
        return std::holds_alternative<JuliaParams>(params) ? FractalKind::julia
                                                           : FractalKind::mandelbulb;
    }

    const Affine& objectToWorld() const { return objectToWorld_; }
    const Affine& worldToObject() const { return worldToObject_; }
    /// Inverse transpose of the object-to-world linear part.
    const Mat3& normalToWorld() const { return normalToWorld_; }
    void setTransform(const Affine& objectToWorld);

    /// Distance sample in object space.
    DistanceSample distance(const Vec3& objectPoint) const {
        if (const auto* julia = std::get_if<JuliaParams>(&params)) {
            return juliaDistance(objectPoint, *julia);
        }
        return mandelbulbDistance(objectPoint, std::get<MandelbulbParams>(params));
    }

    int maxIterations() const;
    void setMaxIterations(int iterations);

    FractalParams params;
    MarchConfig march;
    ShadingOverrides shadingOverrides;

    bool operator==(const Instance& o) const {
        return params == o.params && march == o.march && shadingOverrides == o.shadingOverrides &&
               objectToWorld_ == o.objectToWorld_;
    }

private:
    Affine objectToWorld_;
    Affine worldToObject_;
    Mat3 normalToWorld_;
};

/// Default bounding radius per fractal kind.
double defaultBoundingRadius(FractalKind kind);

struct Camera {
    Vec3 position = {0.0, 0.0, -3.0};
    Vec3 target = {0.0, 0.0, 0.0};
    Vec3 up = {0.0, 1.0, 0.0};
    double verticalFov = 60.0;  ///< degrees
    int width = 512;
    int height = 512;

    bool operator==(const Camera&) const = default;
};

/// Orthonormal pinhole basis derived from a camera.
struct CameraFrame {
    Vec3 position;
    Vec3 forward;
    Vec3 right;
    Vec3 up;
    double tanHalfFov = 0.0;
    double aspect = 1.0;
    int width = 1;
    int height = 1;

    /// Ray through image-plane position (px, py) in pixel units, (0, 0) being
    /// the top-left corner of the top-left pixel.
    Ray rayThrough(double px, double py) const;
};

/// Throws DegenerateBasis when `up` is parallel to the view direction or the
/// camera sits on its target.
CameraFrame makeCameraFrame(const Camera& camera);

/// Ray through the center of pixel (x, y).
Ray generatePrimaryRay(const Camera& camera, int x, int y);

struct RenderSettings {
    int supersample = 1;  ///< N for an N x N sub-pixel grid
    int tileSize = 32;

    bool operator==(const RenderSettings&) const = default;
};

struct Animation {
    int frameCount = 1;
    int iterationsStart = 1;
    int iterationsEnd = 1;
    std::vector<Quaternion> cPath;

    bool operator==(const Animation&) const = default;
};

struct SceneConfig {
    std::vector<Instance> instances;
    Camera camera;
    ShadingParams shading;
    RenderSettings render;
    std::optional<Animation> animation;

    bool operator==(const SceneConfig&) const = default;
};

/// Checks every invariant of a scene. Throws ValidationError naming the
/// offending field, DegenerateBasis or SingularTransform.
void validateScene(const SceneConfig& scene);

/// Parses and validates a scene document (JSON, `//` comments allowed).
/// Throws ParseError, ValidationError or SingularTransform.
SceneConfig loadScene(std::string_view text);

/// Reads and loads a scene file; IoError when it cannot be read.
SceneConfig loadSceneFile(const std::filesystem::path& path);

/// Canonical document for a scene. Keys are emitted in sorted order, so the
/// output is byte-stable for a given scene.
std::string serializeScene(const SceneConfig& scene);

/// Built-in scenes: julia-c0, julia-cut, mandelbulb8, combo.
SceneConfig presetScene(std::string_view name);
std::vector<std::string> presetNames();

}  // namespace fractalmarch
