#pragma once

#include <cmath>
#include <optional>

namespace fractalmarch {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3&) const = default;

    bool isFinite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalize(const Vec3& v) { return v / length(v); }

/// Mirror `d` about the plane with unit normal `n`.
constexpr Vec3 reflect(const Vec3& d, const Vec3& n) { return d - n * (2.0 * dot(d, n)); }

/// Quaternion w + xi + yj + zk, w being the scalar part.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    /// Throws std::domain_error when any component is NaN or infinite.
    static Quaternion checked(double w, double x, double y, double z);

    static constexpr Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }

    /// Embeds a 3D point as the slice (p.x, p.y, p.z, 0); p.x lands in the
    /// scalar part.
    static constexpr Quaternion fromSlice(const Vec3& p) { return {p.x, p.y, p.z, 0.0}; }

    constexpr Quaternion operator+(const Quaternion& o) const {
        return {w + o.w, x + o.x, y + o.y, z + o.z};
    }
    constexpr Quaternion operator-(const Quaternion& o) const {
        return {w - o.w, x - o.x, y - o.y, z - o.z};
    }
    constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
    constexpr bool operator==(const Quaternion&) const = default;

    bool isFinite() const {
        return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

/// Hamilton product.
constexpr Quaternion qMul(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

// The imaginary cross terms of q*q cancel, leaving the cheap closed form.
constexpr Quaternion qSquare(const Quaternion& q) {
    return {q.w * q.w - q.x * q.x - q.y * q.y - q.z * q.z, 2.0 * q.w * q.x, 2.0 * q.w * q.y,
            2.0 * q.w * q.z};
}

constexpr Quaternion qCube(const Quaternion& q) { return qMul(q, qSquare(q)); }

constexpr double qLength2(const Quaternion& q) {
    return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

/// Triplex "nth power" plus offset: r^n (sin b sin a, cos b, sin b cos a) + c
/// with r = |w|, b = n acos(w.y / r), a = n atan2(w.x, w.z).
///
/// The polar axis is +y. The textbook form of this power puts cos(n theta) in
/// the third coordinate instead; both describe the same surface up to an axis
/// permutation, and the y-up variant is the one the renderer's shading and
/// bounding conventions assume.
///
/// Returns nullopt when |w| = 0, where the spherical angles are undefined.
std::optional<Vec3> triplexPowAdd(const Vec3& w, int n, const Vec3& c);

}  // namespace fractalmarch
