#include "fractalmarch/transform.hpp"

#include <cmath>
#include <numbers>

#include "fractalmarch/errors.hpp"

namespace fractalmarch {

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
        }
    }
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.m[i][j] = m[j][i];
        }
    }
    return r;
}

double Mat3::determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Affine Affine::inverse() const {
    const auto& a = linear.m;
    const double det = linear.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-300) {
        throw SingularTransform("instance transform is not invertible (determinant " +
                                std::to_string(det) + ")");
    }
    const double inv = 1.0 / det;
    Affine r;
    r.linear.m = {{{(a[1][1] * a[2][2] - a[1][2] * a[2][1]) * inv,
                    (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * inv,
                    (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * inv},
                   {(a[1][2] * a[2][0] - a[1][0] * a[2][2]) * inv,
                    (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * inv,
                    (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * inv},
                   {(a[1][0] * a[2][1] - a[1][1] * a[2][0]) * inv,
                    (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * inv,
                    (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * inv}}};
    r.translation = -(r.linear * translation);
    return r;
}

std::array<double, 12> Affine::toRowMajor() const {
    const auto& a = linear.m;
    return {a[0][0], a[0][1], a[0][2], translation.x, a[1][0], a[1][1],
            a[1][2], translation.y, a[2][0], a[2][1], a[2][2], translation.z};
}

Affine Affine::fromRowMajor(const std::array<double, 12>& v) {
    Affine r;
    r.linear.m = {{{v[0], v[1], v[2]}, {v[4], v[5], v[6]}, {v[8], v[9], v[10]}}};
    r.translation = {v[3], v[7], v[11]};
    return r;
}

Affine Affine::translate(const Vec3& t) {
    Affine r;
    r.translation = t;
    return r;
}

Affine Affine::scale(const Vec3& s) {
    Affine r;
    r.linear.m = {{{s.x, 0.0, 0.0}, {0.0, s.y, 0.0}, {0.0, 0.0, s.z}}};
    return r;
}

Affine Affine::rotateDegrees(const Vec3& angles) {
    const double k = std::numbers::pi / 180.0;
    const double cx = std::cos(angles.x * k), sx = std::sin(angles.x * k);
    const double cy = std::cos(angles.y * k), sy = std::sin(angles.y * k);
    const double cz = std::cos(angles.z * k), sz = std::sin(angles.z * k);
    Mat3 rx, ry, rz;
    rx.m = {{{1.0, 0.0, 0.0}, {0.0, cx, -sx}, {0.0, sx, cx}}};
    ry.m = {{{cy, 0.0, sy}, {0.0, 1.0, 0.0}, {-sy, 0.0, cy}}};
    rz.m = {{{cz, -sz, 0.0}, {sz, cz, 0.0}, {0.0, 0.0, 1.0}}};
    Affine r;
    r.linear = rz * ry * rx;
    return r;
}

Affine Affine::operator*(const Affine& o) const {
    Affine r;
    r.linear = linear * o.linear;
    r.translation = linear * o.translation + translation;
    return r;
}

}  // namespace fractalmarch
