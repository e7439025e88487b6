#include <algorithm>
#include <array>
#include <string_view>

#include "fractalmarch/errors.hpp"
#include "fractalmarch/scene.hpp"

namespace fractalmarch {
namespace {

struct Preset {
    std::string_view name;
    std::string_view document;
};

// c for julia-cut and combo was picked by eye from a handful of test renders.
constexpr std::array<Preset, 4> kPresets{{
    {"julia-c0", R"({
  // c = 0: the filled Julia set of z^3 is exactly the unit ball.
  "schema": 1,
  "camera": {"position": [0, 0, -3], "target": [0, 0, 0], "up": [0, 1, 0],
             "fov": 60, "width": 512, "height": 512},
  "instances": [{"kind": "julia", "c": [0, 0, 0, 0], "degree": 3}]
})"},
    {"julia-cut", R"({
  "schema": 1,
  "camera": {"position": [1.6, 1.2, -2.4], "target": [0, 0, 0], "up": [0, 1, 0],
             "fov": 50, "width": 512, "height": 512},
  "instances": [{
    "kind": "julia", "c": [-0.45, 0.45, 0.3, 0.0], "degree": 3,
    "march": {"cutPlanes": [
      {"point": [0, 0.05, 0], "normal": [0, 1, 0]},
      {"point": [0, 0, -0.1], "normal": [-0.3, 0, -1]}
    ]}
  }]
})"},
    {"mandelbulb8", R"({
  "schema": 1,
  "camera": {"position": [1.7, 1.1, -2.2], "target": [0, -0.05, 0], "up": [0, 1, 0],
             "fov": 45, "width": 512, "height": 512},
  "instances": [{"kind": "mandelbulb", "power": 8, "iterations": 4}]
})"},
    {"combo", R"({
  "schema": 1,
  "camera": {"position": [0, 1.4, -4.6], "target": [0, 0, 0], "up": [0, 1, 0],
             "fov": 50, "width": 512, "height": 512},
  "instances": [
    {"kind": "julia", "c": [-0.45, 0.45, 0.3, 0.0], "degree": 3,
     "transform": {"translate": [-1.15, 0, 0]}},
    {"kind": "mandelbulb", "power": 8,
     "transform": {"translate": [1.15, 0, 0], "rotate": [0, 30, 0]}}
  ]
})"},
}};

}  // namespace

SceneConfig presetScene(std::string_view name) {
    const auto it = std::find_if(kPresets.begin(), kPresets.end(),
                                 [name](const Preset& p) { return p.name == name; });
    if (it == kPresets.end()) {
        throw ValidationError("preset", "unknown preset \"" + std::string(name) + "\"");
    }
    return loadScene(it->document);
}

std::vector<std::string> presetNames() {
    std::vector<std::string> names;
    for (const Preset& p : kPresets) {
        names.emplace_back(p.name);
    }
    return names;
}

}  // namespace fractalmarch
