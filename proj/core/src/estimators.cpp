#include "fractalmarch/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace fractalmarch {
namespace {

// Orbits that shrink towards an attracting cycle drive |z|^2 and the squared
// derivative towards zero; below this they would underflow and turn the
// estimate into 0 * inf.
constexpr double kUnderflowFloor = 1e-200;

double finishEstimate(double m2, double scale) {
    if (!(m2 > 0.0) || !std::isfinite(scale)) {
        return 0.0;
    }
    return 0.25 * std::log(m2) * scale;
}

}  // namespace

DistanceSample juliaDistance(const Vec3& p, const JuliaParams& params) {
    Quaternion z = Quaternion::fromSlice(p);
    const double factor = params.derivativeFactor();
    double dz2 = 1.0;
    double m2 = 0.0;
    double n = 0.0;
    for (int i = 0; i < params.maxIterations; ++i) {
        if (params.degree == 3) {
            dz2 *= factor * qLength2(qSquare(z));
            z = qCube(z) + params.c;
        } else {
            dz2 *= factor * qLength2(z);
            z = qSquare(z) + params.c;
        }
        m2 = qLength2(z);
        if (m2 > params.escapeRadiusSq) {
            break;
        }
        n += 1.0;
        if (m2 < kUnderflowFloor || dz2 < kUnderflowFloor) {
            break;
        }
    }
    DistanceSample out;
    out.d = dz2 > 0.0 ? finishEstimate(m2, std::sqrt(m2 / dz2)) : 0.0;
    out.aux = {n, 0.0, 0.0, 0.0};
    return out;
}

DistanceSample mandelbulbDistance(const Vec3& p, const MandelbulbParams& params) {
    const Vec3 c = p;
    Vec3 w = c;
    double m = dot(w, w);
    std::array<double, 4> trap{std::abs(w.x), std::abs(w.y), std::abs(w.z), m};
    double dz = 1.0;
    const int power = params.power;
    for (int i = 0; i < params.maxIterations; ++i) {
        dz = power * std::pow(std::sqrt(m), power - 1) * dz + 1.0;
        // r^n -> 0 as r -> 0, so the power of the origin is the origin.
        w = triplexPowAdd(w, power, c).value_or(c);
        trap[0] = std::min(trap[0], std::abs(w.x));
        trap[1] = std::min(trap[1], std::abs(w.y));
        trap[2] = std::min(trap[2], std::abs(w.z));
        trap[3] = std::min(trap[3], m);
        m = dot(w, w);
        if (m > params.escapeRadiusSq) {
            break;
        }
    }
    DistanceSample out;
    out.d = finishEstimate(m, std::sqrt(m) / dz);
    out.aux = {m, trap[1], trap[2], trap[3]};
    return out;
}

}  // namespace fractalmarch
