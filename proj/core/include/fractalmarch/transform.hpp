#pragma once

#include <array>

#include "fractalmarch/quatmath.hpp"

namespace fractalmarch {

struct Mat3 {
    std::array<std::array<double, 3>, 3> m{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;
    double determinant() const;
    bool operator==(const Mat3&) const = default;
};

/// x -> linear * x + translation
struct Affine {
    Mat3 linear;
    Vec3 translation;

    Vec3 applyPoint(const Vec3& p) const { return linear * p + translation; }
    Vec3 applyVector(const Vec3& v) const { return linear * v; }

    /// Throws SingularTransform when the linear part is not invertible.
    Affine inverse() const;

    /// Row-major 3x4 [linear | translation].
    std::array<double, 12> toRowMajor() const;
    static Affine fromRowMajor(const std::array<double, 12>& values);

    static Affine identity() { return {}; }
    static Affine translate(const Vec3& t);
    static Affine scale(const Vec3& s);
    /// Rotation by Euler angles in degrees, applied about x, then y, then z.
    static Affine rotateDegrees(const Vec3& angles);

    Affine operator*(const Affine& o) const;
    bool operator==(const Affine&) const = default;
};

}  // namespace fractalmarch
