#pragma once

// Wire format shared by the view server and its browser client.
//
// Client -> server: JSON text messages tagged by "type":
//   {"type": "set_camera", "position": [3], "target": [3], "up": [3], "fov": deg}
//   {"type": "set_fractal_params", "instance": i, "c": [4], "degree" | "power": n,
//    "iterations": n, "cutPlanes": [{"point": [3], "normal": [3]}, ...]}
//   {"type": "set_quality", "width": n, "height": n, "maxRecursionDepth": n}
//   {"type": "request_full_frame"}
//
// Server -> client:
//   text   {"type": "ack", "generation": g}
//          {"type": "error", "reason": "..."}
//          {"type": "level_complete", "generation": g, "level": 8|4|2|1}
//          {"type": "frame_complete", "generation": g}
//   binary tile frame: 13-byte little-endian header
//          generation u32 | level u8 | x0 u16 | y0 u16 | w u16 | h u16
//          followed by w*h*4 RGBA bytes. Coordinates are in the pixel grid of
//          the level, i.e. the full image downscaled by `level`.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fractalmarch/errors.hpp"
#include "fractalmarch/marcher.hpp"
#include "fractalmarch/quatmath.hpp"

namespace fractalmarch::protocol {

inline constexpr std::size_t kTileHeaderSize = 13;

/// Progressive levels as downscale factors, coarse to fine.
inline constexpr std::array<std::uint8_t, 4> kLevels{8, 4, 2, 1};

struct TileFrame {
    std::uint32_t generation = 0;
    std::uint8_t level = 1;
    std::uint16_t x0 = 0;
    std::uint16_t y0 = 0;
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::vector<std::uint8_t> rgba;

    bool operator==(const TileFrame&) const = default;
};

std::vector<std::uint8_t> encodeTile(const TileFrame& tile);

/// nullopt when the header is short or the payload size does not match.
std::optional<TileFrame> decodeTile(std::span<const std::uint8_t> bytes);

struct SetCamera {
    Vec3 position;
    Vec3 target;
    std::optional<Vec3> up;
    std::optional<double> fov;
};

struct SetFractalParams {
    std::size_t instance = 0;
    std::optional<Quaternion> c;
    std::optional<int> degree;
    std::optional<int> power;
    std::optional<int> iterations;
    std::optional<std::vector<CutPlane>> cutPlanes;
};

struct SetQuality {
    std::optional<int> width;
    std::optional<int> height;
    std::optional<int> maxRecursionDepth;
};

struct RequestFullFrame {};

using ControlMessage = std::variant<SetCamera, SetFractalParams, SetQuality, RequestFullFrame>;

/// Malformed or schema-violating control message.
class InvalidMessage : public Error {
public:
    using Error::Error;
};

/// Throws InvalidMessage.
ControlMessage parseControl(std::string_view text);

std::string ackMessage(std::uint32_t generation);
std::string errorMessage(std::string_view reason);
std::string levelCompleteMessage(std::uint32_t generation, std::uint8_t level);
std::string frameCompleteMessage(std::uint32_t generation);

}  // namespace fractalmarch::protocol
