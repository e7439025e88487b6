#include "fractalmarch/scene.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fractalmarch/errors.hpp"

namespace fractalmarch {

using nlohmann::json;

Instance::Instance(FractalParams params_, const Affine& objectToWorld, MarchConfig march_)
    : params(std::move(params_)), march(std::move(march_)) {
    setTransform(objectToWorld);
}

void Instance::setTransform(const Affine& objectToWorld) {
    worldToObject_ = objectToWorld.inverse();
    objectToWorld_ = objectToWorld;
    normalToWorld_ = worldToObject_.linear.transposed();
}

int Instance::maxIterations() const {
    return std::visit([](const auto& p) { return p.maxIterations; }, params);
}

void Instance::setMaxIterations(int iterations) {
    std::visit([iterations](auto& p) { p.maxIterations = iterations; }, params);
}

double defaultBoundingRadius(FractalKind kind) {
    return kind == FractalKind::julia ? 2.0 : 1.5;
}

// ---------------------------------------------------------------------------
// Camera

Ray CameraFrame::rayThrough(double px, double py) const {
    const double sx = (2.0 * px / width - 1.0) * tanHalfFov * aspect;
    const double sy = (1.0 - 2.0 * py / height) * tanHalfFov;
    return {position, normalize(forward + right * sx + up * sy)};
}

CameraFrame makeCameraFrame(const Camera& camera) {
    const Vec3 view = camera.target - camera.position;
    const double viewLen = length(view);
    if (!(viewLen > 0.0)) {
        throw DegenerateBasis("camera position coincides with its target");
    }
    CameraFrame frame;
    frame.position = camera.position;
    frame.forward = view / viewLen;
    const Vec3 side = cross(frame.forward, camera.up);
    const double sideLen = length(side);
    if (!(sideLen > 1e-12 * length(camera.up))) {
        throw DegenerateBasis("camera up vector is parallel to the view direction");
    }
    frame.right = side / sideLen;
    frame.up = cross(frame.right, frame.forward);
    frame.tanHalfFov = std::tan(camera.verticalFov * std::numbers::pi / 360.0);
    frame.aspect = static_cast<double>(camera.width) / camera.height;
    frame.width = camera.width;
    frame.height = camera.height;
    return frame;
}

Ray generatePrimaryRay(const Camera& camera, int x, int y) {
    return makeCameraFrame(camera).rayThrough(x + 0.5, y + 0.5);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string indexed(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

void requireFinite(const Vec3& v, const std::string& path) {
    if (!v.isFinite()) {
        throw ValidationError(path, "components must be finite");
    }
}

void requireFinite(const Rgb& c, const std::string& path) {
    if (!std::isfinite(c.r) || !std::isfinite(c.g) || !std::isfinite(c.b)) {
        throw ValidationError(path, "components must be finite");
    }
}

void requireRange(double v, double lo, double hi, const std::string& path) {
    if (!(v >= lo && v <= hi)) {
        std::ostringstream os;
        os << "must be in [" << lo << ", " << hi << "], got " << v;
        throw ValidationError(path, os.str());
    }
}

void requireAbove(double v, double lo, const std::string& path) {
    if (!(v > lo) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "must be finite and greater than " << lo << ", got " << v;
        throw ValidationError(path, os.str());
    }
}

void validateIterations(int iterations, const std::string& path) {
    requireRange(iterations, 1, kIterationLimit, path);
}

void validateMarch(const MarchConfig& m, const std::string& path) {
    requireAbove(m.precis, 0.0, path + ".precis");
    requireAbove(m.tMax, m.precis, path + ".tMax");
    requireRange(m.maxSteps, 1, 1 << 20, path + ".maxSteps");
    requireAbove(m.stepClamp, 0.0, path + ".stepClamp");
    requireAbove(m.boundingSphereRadius, 0.0, path + ".boundingRadius");
    for (std::size_t i = 0; i < m.cutPlanes.size(); ++i) {
        const std::string planePath = indexed(path + ".cutPlanes", i);
        requireFinite(m.cutPlanes[i].point, planePath + ".point");
        requireFinite(m.cutPlanes[i].normal, planePath + ".normal");
        if (!(length(m.cutPlanes[i].normal) > 0.0)) {
            throw ValidationError(planePath + ".normal", "must be non-zero");
        }
    }
}

void validateInstance(const Instance& inst, const std::string& path) {
    if (const auto* j = std::get_if<JuliaParams>(&inst.params)) {
        if (j->degree != 2 && j->degree != 3) {
            throw ValidationError(path + ".degree",
                                  "must be 2 or 3, got " + std::to_string(j->degree));
        }
        if (!j->c.isFinite()) {
            throw ValidationError(path + ".c", "components must be finite");
        }
        validateIterations(j->maxIterations, path + ".iterations");
        requireAbove(j->escapeRadiusSq, 1.0, path + ".escapeRadiusSq");
    } else {
        const auto& m = std::get<MandelbulbParams>(inst.params);
        requireRange(m.power, 2, 32, path + ".power");
        validateIterations(m.maxIterations, path + ".iterations");
        requireAbove(m.escapeRadiusSq, 1.0, path + ".escapeRadiusSq");
    }
    validateMarch(inst.march, path + ".march");
    if (inst.shadingOverrides.reflectance) {
        requireRange(*inst.shadingOverrides.reflectance, 0.0, 1.0, path + ".shading.reflectance");
    }
    if (inst.shadingOverrides.albedoScale) {
        requireRange(*inst.shadingOverrides.albedoScale, 0.0, 1e6, path + ".shading.albedoScale");
    }
    // Round trip through the cached inverse must hold for points in a
    // generous neighbourhood of the instance.
    const Affine& fwd = inst.objectToWorld();
    const Affine& inv = inst.worldToObject();
    for (const Vec3& p : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-3, 2, 5}}) {
        const Vec3 back = inv.applyPoint(fwd.applyPoint(p));
        if (!(length(back - p) <= 1e-9 * (1.0 + length(p)))) {
            throw SingularTransform(path + ".transform: ill-conditioned transform");
        }
    }
}

}  // namespace

void validateScene(const SceneConfig& scene) {
    const Camera& cam = scene.camera;
    requireFinite(cam.position, "camera.position");
    requireFinite(cam.target, "camera.target");
    requireFinite(cam.up, "camera.up");
    if (cam.position == cam.target) {
        throw ValidationError("camera.target", "must differ from camera.position");
    }
    if (!(cam.verticalFov > 0.0 && cam.verticalFov < 180.0)) {
        throw ValidationError("camera.fov", "must be in (0, 180) degrees");
    }
    requireRange(cam.width, 1, 16384, "camera.width");
    requireRange(cam.height, 1, 16384, "camera.height");
    try {
        (void)makeCameraFrame(cam);
    } catch (const DegenerateBasis& e) {
        throw ValidationError("camera.up", e.what());
    }

    const ShadingParams& s = scene.shading;
    requireRange(s.reflectance, 0.0, 1.0, "shading.reflectance");
    requireRange(s.maxRecursionDepth, 1, 16, "shading.maxRecursionDepth");
    requireFinite(s.lightDirection, "shading.lightDirection");
    if (std::abs(length(s.lightDirection) - 1.0) > 1e-9) {
        throw ValidationError("shading.lightDirection", "must be unit length");
    }
    requireFinite(s.lightColor, "shading.lightColor");
    requireFinite(s.ambient, "shading.ambient");
    requireFinite(s.backgroundTop, "shading.backgroundTop");
    requireFinite(s.backgroundBottom, "shading.backgroundBottom");
    requireRange(s.albedoScale, 0.0, 1e6, "shading.albedoScale");
    requireRange(s.maxDepthBoost, 0.0, 1e6, "shading.maxDepthBoost");
    requireRange(s.specularExponent, 0.0, 1e4, "shading.specularExponent");
    requireAbove(s.juliaPaletteHalf, 0.0, "shading.juliaPaletteHalf");
    for (const auto& [color, name] :
         {std::pair{s.juliaBase, "juliaBase"}, std::pair{s.juliaTip, "juliaTip"},
          std::pair{s.bulbBase, "bulbBase"}, std::pair{s.bulbTrapY, "bulbTrapY"},
          std::pair{s.bulbTrapZ, "bulbTrapZ"}, std::pair{s.bulbTrapW, "bulbTrapW"}}) {
        requireFinite(color, std::string("shading.") + name);
    }

    requireRange(scene.render.supersample, 1, 8, "render.supersample");
    requireRange(scene.render.tileSize, 1, 4096, "render.tileSize");

    for (std::size_t i = 0; i < scene.instances.size(); ++i) {
        validateInstance(scene.instances[i], indexed("instances", i));
    }

    if (scene.animation) {
        const Animation& a = *scene.animation;
        requireRange(a.frameCount, 1, 1000000, "animation.frames");
        validateIterations(a.iterationsStart, "animation.iterationsStart");
        validateIterations(a.iterationsEnd, "animation.iterationsEnd");
        for (std::size_t i = 0; i < a.cPath.size(); ++i) {
            if (!a.cPath[i].isFinite()) {
                throw ValidationError(indexed("animation.cPath", i), "components must be finite");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    void allowOnly(std::initializer_list<std::string_view> keys) const {
        const std::set<std::string_view> allowed(keys);
        for (const auto& [key, value] : node_.items()) {
            if (!allowed.contains(key)) {
                throw ValidationError(child(key), "unknown key");
            }
        }
    }

    bool has(std::string_view key) const { return node_.contains(std::string(key)); }

    const json& at(std::string_view key) const { return node_.at(std::string(key)); }

    std::string child(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    double number(std::string_view key, double fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = at(key);
        if (!v.is_number()) {
            throw ValidationError(child(key), "expected a number");
        }
        return v.get<double>();
    }

    int integer(std::string_view key, int fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = at(key);
        if (!v.is_number_integer()) {
            throw ValidationError(child(key), "expected an integer");
        }
        const auto value = v.get<long long>();
        if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
            throw ValidationError(child(key), "integer out of range");
        }
        return static_cast<int>(value);
    }

    std::string string(std::string_view key) const {
        if (!has(key)) {
            throw ValidationError(child(key), "required");
        }
        const json& v = at(key);
        if (!v.is_string()) {
            throw ValidationError(child(key), "expected a string");
        }
        return v.get<std::string>();
    }

    template <std::size_t N>
    std::array<double, N> numbers(std::string_view key) const {
        return numbersAt<N>(at(key), child(key));
    }

    Vec3 vec3(std::string_view key, const Vec3& fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const auto a = numbers<3>(key);
        return {a[0], a[1], a[2]};
    }

    Rgb rgb(std::string_view key, const Rgb& fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const auto a = numbers<3>(key);
        return {a[0], a[1], a[2]};
    }

    template <std::size_t N>
    static std::array<double, N> numbersAt(const json& v, const std::string& path) {
        if (!v.is_array() || v.size() != N) {
            throw ValidationError(path, "expected an array of " + std::to_string(N) + " numbers");
        }
        std::array<double, N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            if (!v[i].is_number()) {
                throw ValidationError(indexed(path, i), "expected a number");
            }
            out[i] = v[i].get<double>();
        }
        return out;
    }

    const std::string& path() const { return path_; }

private:
    const json& node_;
    std::string path_;
};

Quaternion quaternionAt(const json& v, const std::string& path) {
    const auto a = Reader::numbersAt<4>(v, path);
    return {a[0], a[1], a[2], a[3]};
}

// Re-normalizing an already unit vector can move its last bit, which would
// break load/serialize stability; only touch vectors that are visibly off.
Vec3 unitize(const Vec3& v) {
    const double len = length(v);
    if (len > 0.0 && std::abs(len - 1.0) > 1e-12) {
        return v / len;
    }
    return v;
}

Camera parseCamera(const Reader& r) {
    r.allowOnly({"position", "target", "up", "fov", "width", "height"});
    Camera c;
    c.position = r.vec3("position", c.position);
    c.target = r.vec3("target", c.target);
    c.up = r.vec3("up", c.up);
    c.verticalFov = r.number("fov", c.verticalFov);
    c.width = r.integer("width", c.width);
    c.height = r.integer("height", c.height);
    return c;
}

ShadingParams parseShading(const Reader& r) {
    r.allowOnly({"reflectance", "maxRecursionDepth", "lightDirection", "lightColor", "ambient",
                 "backgroundTop", "backgroundBottom", "albedoScale", "maxDepthBoost",
                 "specularExponent", "juliaBase", "juliaTip", "juliaPaletteHalf", "bulbBase",
                 "bulbTrapY", "bulbTrapZ", "bulbTrapW"});
    ShadingParams s;
    s.reflectance = r.number("reflectance", s.reflectance);
    s.maxRecursionDepth = r.integer("maxRecursionDepth", s.maxRecursionDepth);
    s.lightDirection = unitize(r.vec3("lightDirection", s.lightDirection));
    s.lightColor = r.rgb("lightColor", s.lightColor);
    s.ambient = r.rgb("ambient", s.ambient);
    s.backgroundTop = r.rgb("backgroundTop", s.backgroundTop);
    s.backgroundBottom = r.rgb("backgroundBottom", s.backgroundBottom);
    s.albedoScale = r.number("albedoScale", s.albedoScale);
    s.maxDepthBoost = r.number("maxDepthBoost", s.maxDepthBoost);
    s.specularExponent = r.number("specularExponent", s.specularExponent);
    s.juliaBase = r.rgb("juliaBase", s.juliaBase);
    s.juliaTip = r.rgb("juliaTip", s.juliaTip);
    s.juliaPaletteHalf = r.number("juliaPaletteHalf", s.juliaPaletteHalf);
    s.bulbBase = r.rgb("bulbBase", s.bulbBase);
    s.bulbTrapY = r.rgb("bulbTrapY", s.bulbTrapY);
    s.bulbTrapZ = r.rgb("bulbTrapZ", s.bulbTrapZ);
    s.bulbTrapW = r.rgb("bulbTrapW", s.bulbTrapW);
    return s;
}

Affine parseTransform(const Reader& r) {
    r.allowOnly({"matrix", "translate", "rotate", "scale"});
    if (r.has("matrix")) {
        if (r.has("translate") || r.has("rotate") || r.has("scale")) {
            throw ValidationError(r.child("matrix"),
                                  "cannot be combined with translate/rotate/scale");
        }
        return Affine::fromRowMajor(r.numbers<12>("matrix"));
    }
    Vec3 scale{1.0, 1.0, 1.0};
    if (r.has("scale")) {
        if (r.at("scale").is_number()) {
            const double s = r.at("scale").get<double>();
            scale = {s, s, s};
        } else {
            scale = r.vec3("scale", scale);
        }
    }
    return Affine::translate(r.vec3("translate", {})) *
           Affine::rotateDegrees(r.vec3("rotate", {})) * Affine::scale(scale);
}

MarchConfig parseMarch(const Reader& r, MarchConfig m) {
    r.allowOnly({"precis", "tMax", "maxSteps", "stepClamp", "boundingRadius", "cutPlanes"});
    m.precis = r.number("precis", m.precis);
    m.tMax = r.number("tMax", m.tMax);
    m.maxSteps = r.integer("maxSteps", m.maxSteps);
    m.stepClamp = r.number("stepClamp", m.stepClamp);
    m.boundingSphereRadius = r.number("boundingRadius", m.boundingSphereRadius);
    if (r.has("cutPlanes")) {
        const json& planes = r.at("cutPlanes");
        const std::string path = r.child("cutPlanes");
        if (!planes.is_array()) {
            throw ValidationError(path, "expected an array");
        }
        for (std::size_t i = 0; i < planes.size(); ++i) {
            const Reader p(planes[i], indexed(path, i));
            p.allowOnly({"point", "normal"});
            if (!p.has("normal")) {
                throw ValidationError(p.child("normal"), "required");
            }
            m.cutPlanes.push_back({p.vec3("point", {}), p.vec3("normal", {})});
        }
    }
    return m;
}

Instance parseInstance(const Reader& r) {
    const std::string kind = r.string("kind");
    FractalParams params;
    if (kind == "julia") {
        r.allowOnly({"kind", "c", "degree", "iterations", "escapeRadiusSq", "transform", "march",
                     "shading"});
        JuliaParams j;
        if (r.has("c")) {
            j.c = quaternionAt(r.at("c"), r.child("c"));
        }
        j.degree = r.integer("degree", j.degree);
        j.maxIterations = r.integer("iterations", j.maxIterations);
        j.escapeRadiusSq = r.number("escapeRadiusSq", j.escapeRadiusSq);
        params = j;
    } else if (kind == "mandelbulb") {
        r.allowOnly({"kind", "power", "iterations", "escapeRadiusSq", "transform", "march",
                     "shading"});
        MandelbulbParams m;
        m.power = r.integer("power", m.power);
        m.maxIterations = r.integer("iterations", m.maxIterations);
        m.escapeRadiusSq = r.number("escapeRadiusSq", m.escapeRadiusSq);
        params = m;
    } else {
        throw ValidationError(r.child("kind"), "must be \"julia\" or \"mandelbulb\"");
    }

    MarchConfig march;
    march.boundingSphereRadius = defaultBoundingRadius(
        kind == "julia" ? FractalKind::julia : FractalKind::mandelbulb);
    if (r.has("march")) {
        march = parseMarch(Reader(r.at("march"), r.child("march")), march);
    }
    Affine transform;
    if (r.has("transform")) {
        transform = parseTransform(Reader(r.at("transform"), r.child("transform")));
    }
    Instance inst = [&] {
        try {
            return Instance(params, transform, march);
        } catch (const SingularTransform& e) {
            throw SingularTransform(r.child("transform") + ": " + e.what());
        }
    }();
    if (r.has("shading")) {
        const Reader s(r.at("shading"), r.child("shading"));
        s.allowOnly({"reflectance", "albedoScale"});
        if (s.has("reflectance")) {
            inst.shadingOverrides.reflectance = s.number("reflectance", 0.0);
        }
        if (s.has("albedoScale")) {
            inst.shadingOverrides.albedoScale = s.number("albedoScale", 0.0);
        }
    }
    return inst;
}

Animation parseAnimation(const Reader& r) {
    r.allowOnly({"frames", "iterationsStart", "iterationsEnd", "cPath"});
    Animation a;
    a.frameCount = r.integer("frames", a.frameCount);
    a.iterationsStart = r.integer("iterationsStart", a.iterationsStart);
    a.iterationsEnd = r.integer("iterationsEnd", a.iterationsStart);
    if (r.has("cPath")) {
        const json& path = r.at("cPath");
        if (!path.is_array()) {
            throw ValidationError(r.child("cPath"), "expected an array");
        }
        for (std::size_t i = 0; i < path.size(); ++i) {
            a.cPath.push_back(quaternionAt(path[i], indexed(r.child("cPath"), i)));
        }
    }
    return a;
}

std::pair<std::size_t, std::size_t> lineColumn(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace

SceneConfig loadScene(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        const auto [line, column] = lineColumn(text, e.byte);
        throw ParseError("scene parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + e.what(),
                         line, column);
    }

    const Reader root(doc, "");
    root.allowOnly({"schema", "camera", "shading", "render", "instances", "animation"});
    if (!root.has("schema")) {
        throw ValidationError("schema", "required");
    }
    if (root.integer("schema", 0) != kSchemaVersion) {
        throw ValidationError("schema", "unsupported version (expected " +
                                            std::to_string(kSchemaVersion) + ")");
    }
    if (!root.has("camera")) {
        throw ValidationError("camera", "required");
    }

    SceneConfig scene;
    scene.camera = parseCamera(Reader(root.at("camera"), "camera"));
    if (root.has("shading")) {
        scene.shading = parseShading(Reader(root.at("shading"), "shading"));
    }
    if (root.has("render")) {
        const Reader r(root.at("render"), "render");
        r.allowOnly({"supersample", "tileSize"});
        scene.render.supersample = r.integer("supersample", scene.render.supersample);
        scene.render.tileSize = r.integer("tileSize", scene.render.tileSize);
    }
    if (root.has("instances")) {
        const json& list = root.at("instances");
        if (!list.is_array()) {
            throw ValidationError("instances", "expected an array");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            scene.instances.push_back(parseInstance(Reader(list[i], indexed("instances", i))));
        }
    }
    if (root.has("animation")) {
        scene.animation = parseAnimation(Reader(root.at("animation"), "animation"));
    }
    validateScene(scene);
    return scene;
}

SceneConfig loadSceneFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open scene file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed reading scene file " + path.string());
    }
    return loadScene(buffer.str());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json toJson(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json toJson(const Rgb& c) { return json::array({c.r, c.g, c.b}); }
json toJson(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

json toJson(const Instance& inst) {
    json out;
    if (const auto* j = std::get_if<JuliaParams>(&inst.params)) {
        out["kind"] = "julia";
        out["c"] = toJson(j->c);
        out["degree"] = j->degree;
        out["iterations"] = j->maxIterations;
        out["escapeRadiusSq"] = j->escapeRadiusSq;
    } else {
        const auto& m = std::get<MandelbulbParams>(inst.params);
        out["kind"] = "mandelbulb";
        out["power"] = m.power;
        out["iterations"] = m.maxIterations;
        out["escapeRadiusSq"] = m.escapeRadiusSq;
    }
    const auto matrix = inst.objectToWorld().toRowMajor();
    out["transform"]["matrix"] = json(matrix);
    json march;
    march["precis"] = inst.march.precis;
    march["tMax"] = inst.march.tMax;
    march["maxSteps"] = inst.march.maxSteps;
    march["stepClamp"] = inst.march.stepClamp;
    march["boundingRadius"] = inst.march.boundingSphereRadius;
    march["cutPlanes"] = json::array();
    for (const CutPlane& p : inst.march.cutPlanes) {
        march["cutPlanes"].push_back({{"point", toJson(p.point)}, {"normal", toJson(p.normal)}});
    }
    out["march"] = march;
    if (inst.shadingOverrides.reflectance || inst.shadingOverrides.albedoScale) {
        json s = json::object();
        if (inst.shadingOverrides.reflectance) {
            s["reflectance"] = *inst.shadingOverrides.reflectance;
        }
        if (inst.shadingOverrides.albedoScale) {
            s["albedoScale"] = *inst.shadingOverrides.albedoScale;
        }
        out["shading"] = s;
    }
    return out;
}

}  // namespace

std::string serializeScene(const SceneConfig& scene) {
    json doc;
    doc["schema"] = kSchemaVersion;
    const Camera& c = scene.camera;
    doc["camera"] = {{"position", toJson(c.position)}, {"target", toJson(c.target)},
                     {"up", toJson(c.up)},             {"fov", c.verticalFov},
                     {"width", c.width},               {"height", c.height}};
    const ShadingParams& s = scene.shading;
    doc["shading"] = {{"reflectance", s.reflectance},
                      {"maxRecursionDepth", s.maxRecursionDepth},
                      {"lightDirection", toJson(s.lightDirection)},
                      {"lightColor", toJson(s.lightColor)},
                      {"ambient", toJson(s.ambient)},
                      {"backgroundTop", toJson(s.backgroundTop)},
                      {"backgroundBottom", toJson(s.backgroundBottom)},
                      {"albedoScale", s.albedoScale},
                      {"maxDepthBoost", s.maxDepthBoost},
                      {"specularExponent", s.specularExponent},
                      {"juliaBase", toJson(s.juliaBase)},
                      {"juliaTip", toJson(s.juliaTip)},
                      {"juliaPaletteHalf", s.juliaPaletteHalf},
                      {"bulbBase", toJson(s.bulbBase)},
                      {"bulbTrapY", toJson(s.bulbTrapY)},
                      {"bulbTrapZ", toJson(s.bulbTrapZ)},
                      {"bulbTrapW", toJson(s.bulbTrapW)}};
    doc["render"] = {{"supersample", scene.render.supersample},
                     {"tileSize", scene.render.tileSize}};
    doc["instances"] = json::array();
    for (const Instance& inst : scene.instances) {
        doc["instances"].push_back(toJson(inst));
    }
    if (scene.animation) {
        const Animation& a = *scene.animation;
        json anim = {{"frames", a.frameCount},
                     {"iterationsStart", a.iterationsStart},
                     {"iterationsEnd", a.iterationsEnd}};
        anim["cPath"] = json::array();
        for (const Quaternion& q : a.cPath) {
            anim["cPath"].push_back(toJson(q));
        }
        doc["animation"] = anim;
    }
    return doc.dump(2) + "\n";
}

}  // namespace fractalmarch
