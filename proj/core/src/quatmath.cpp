#include "fractalmarch/quatmath.hpp"

#include <algorithm>
#include <stdexcept>

namespace fractalmarch {

Quaternion Quaternion::checked(double w, double x, double y, double z) {
    Quaternion q{w, x, y, z};
    if (!q.isFinite()) {
        throw std::domain_error("quaternion component is not finite");
    }
    return q;
}

std::optional<Vec3> triplexPowAdd(const Vec3& w, int n, const Vec3& c) {
    const double r = length(w);
    if (r == 0.0) {
        return std::nullopt;
    }
    // Rounding can push |w.y| / r past 1 on the polar axis.
    const double b = n * std::acos(std::clamp(w.y / r, -1.0, 1.0));
    const double a = n * std::atan2(w.x, w.z);
    const double rn = std::pow(r, n);
    const double sb = std::sin(b);
    return Vec3{sb * std::sin(a), std::cos(b), sb * std::cos(a)} * rn + c;
}

}  // namespace fractalmarch
