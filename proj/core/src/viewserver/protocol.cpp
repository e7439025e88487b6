#include "fractalmarch/protocol.hpp"

#include <limits>
#include <set>

#include <nlohmann/json.hpp>

namespace fractalmarch::protocol {

using nlohmann::json;

namespace {

void putU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint16_t getU16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

void allowOnly(const json& obj, std::initializer_list<std::string_view> keys) {
    const std::set<std::string_view> allowed(keys);
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw InvalidMessage("unknown key \"" + key + "\"");
        }
    }
}

template <std::size_t N>
std::array<double, N> numbers(const json& obj, std::string_view key) {
    const json& v = obj.at(std::string(key));
    if (!v.is_array() || v.size() != N) {
        throw InvalidMessage(std::string(key) + ": expected " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        if (!v[i].is_number()) {
            throw InvalidMessage(std::string(key) + ": expected numbers");
        }
        out[i] = v[i].get<double>();
    }
    return out;
}

Vec3 vec3(const json& obj, std::string_view key) {
    const auto a = numbers<3>(obj, key);
    return {a[0], a[1], a[2]};
}

std::optional<int> optionalInt(const json& obj, std::string_view key) {
    if (!obj.contains(std::string(key))) {
        return std::nullopt;
    }
    const json& v = obj.at(std::string(key));
    if (!v.is_number_integer()) {
        throw InvalidMessage(std::string(key) + ": expected an integer");
    }
    const auto value = v.get<long long>();
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
        throw InvalidMessage(std::string(key) + ": integer out of range");
    }
    return static_cast<int>(value);
}

std::vector<CutPlane> cutPlanes(const json& v) {
    if (!v.is_array()) {
        throw InvalidMessage("cutPlanes: expected an array");
    }
    std::vector<CutPlane> planes;
    for (const json& p : v) {
        if (!p.is_object()) {
            throw InvalidMessage("cutPlanes: expected objects");
        }
        allowOnly(p, {"point", "normal"});
        if (!p.contains("normal")) {
            throw InvalidMessage("cutPlanes: normal is required");
        }
        planes.push_back({p.contains("point") ? vec3(p, "point") : Vec3{}, vec3(p, "normal")});
    }
    return planes;
}

}  // namespace

std::vector<std::uint8_t> encodeTile(const TileFrame& tile) {
    std::vector<std::uint8_t> out;
    out.reserve(kTileHeaderSize + tile.rgba.size());
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<std::uint8_t>((tile.generation >> shift) & 0xFF));
    }
    out.push_back(tile.level);
    putU16(out, tile.x0);
    putU16(out, tile.y0);
    putU16(out, tile.width);
    putU16(out, tile.height);
    out.insert(out.end(), tile.rgba.begin(), tile.rgba.end());
    return out;
}

std::optional<TileFrame> decodeTile(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kTileHeaderSize) {
        return std::nullopt;
    }
    TileFrame t;
    t.generation = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
                   (static_cast<std::uint32_t>(bytes[2]) << 16) |
                   (static_cast<std::uint32_t>(bytes[3]) << 24);
    t.level = bytes[4];
    t.x0 = getU16(bytes, 5);
    t.y0 = getU16(bytes, 7);
    t.width = getU16(bytes, 9);
    t.height = getU16(bytes, 11);
    const std::size_t expected = static_cast<std::size_t>(t.width) * t.height * 4;
    if (bytes.size() - kTileHeaderSize != expected) {
        return std::nullopt;
    }
    t.rgba.assign(bytes.begin() + kTileHeaderSize, bytes.end());
    return t;
}

ControlMessage parseControl(std::string_view text) {
    json msg;
    try {
        msg = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidMessage(std::string("malformed message: ") + e.what());
    }
    if (!msg.is_object() || !msg.contains("type") || !msg.at("type").is_string()) {
        throw InvalidMessage("message must be an object with a string \"type\"");
    }
    const std::string type = msg.at("type").get<std::string>();
    try {
        if (type == "set_camera") {
            allowOnly(msg, {"type", "position", "target", "up", "fov"});
            if (!msg.contains("position") || !msg.contains("target")) {
                throw InvalidMessage("set_camera requires position and target");
            }
            SetCamera m;
            m.position = vec3(msg, "position");
            m.target = vec3(msg, "target");
            if (msg.contains("up")) {
                m.up = vec3(msg, "up");
            }
            if (msg.contains("fov")) {
                if (!msg.at("fov").is_number()) {
                    throw InvalidMessage("fov: expected a number");
                }
                m.fov = msg.at("fov").get<double>();
            }
            return m;
        }
        if (type == "set_fractal_params") {
            allowOnly(msg, {"type", "instance", "c", "degree", "power", "iterations", "cutPlanes"});
            SetFractalParams m;
            const std::optional<int> index = optionalInt(msg, "instance");
            if (!index || *index < 0) {
                throw InvalidMessage("instance: a non-negative index is required");
            }
            m.instance = static_cast<std::size_t>(*index);
            if (msg.contains("c")) {
                const auto c = numbers<4>(msg, "c");
                m.c = Quaternion{c[0], c[1], c[2], c[3]};
            }
            m.degree = optionalInt(msg, "degree");
            m.power = optionalInt(msg, "power");
            m.iterations = optionalInt(msg, "iterations");
            if (msg.contains("cutPlanes")) {
                m.cutPlanes = cutPlanes(msg.at("cutPlanes"));
            }
            return m;
        }
        if (type == "set_quality") {
            allowOnly(msg, {"type", "width", "height", "maxRecursionDepth"});
            return SetQuality{optionalInt(msg, "width"), optionalInt(msg, "height"),
                              optionalInt(msg, "maxRecursionDepth")};
        }
        if (type == "request_full_frame") {
            allowOnly(msg, {"type"});
            return RequestFullFrame{};
        }
    } catch (const json::exception& e) {
        throw InvalidMessage(std::string("malformed message: ") + e.what());
    }
    throw InvalidMessage("unknown message type \"" + type + "\"");
}

std::string ackMessage(std::uint32_t generation) {
    return json{{"type", "ack"}, {"generation", generation}}.dump();
}

std::string errorMessage(std::string_view reason) {
    return json{{"type", "error"}, {"reason", std::string(reason)}}.dump();
}

std::string levelCompleteMessage(std::uint32_t generation, std::uint8_t level) {
    return json{{"type", "level_complete"}, {"generation", generation}, {"level", level}}.dump();
}

std::string frameCompleteMessage(std::uint32_t generation) {
    return json{{"type", "frame_complete"}, {"generation", generation}}.dump();
}

}  // namespace fractalmarch::protocol
