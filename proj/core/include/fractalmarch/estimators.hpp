#pragma once

// Distance estimators for quaternion Julia sets and the Mandelbulb.
//
// Both follow the same construction. For f(z) = z^p + c, the potential
// G(z) = lim log|f^n(z)| / p^n vanishes on the set and tends to log|z| far
// away from it. A first-order Taylor step towards the nearest set point z + e
// gives 0 = G(z) + <grad G(z), e> + O(|e|^2); the triangle inequality and
// Cauchy-Schwarz then turn that into |e| >= |G(z)| / |grad G(z)|. Substituting
// the limit forms of G and grad G yields
//
//     d(z) = lim |f^n(z)| log|f^n(z)| / |(f^n)'(z)|
//
// which is evaluated by iterating the orbit f^{n+1} = (f^n)^p + c together
// with its derivative (f^{n+1})' = p (f^n)^{p-1} (f^n)', starting at
// (f^0)' = 1, until the orbit escapes. The returned value is half of the
// expression above: 0.25 log(m) sqrt(m / dz^2) with m = |f^n|^2.

#include <array>
#include <optional>

#include "fractalmarch/quatmath.hpp"

namespace fractalmarch {

struct JuliaParams {
    Quaternion c{};
    int degree = 3;           ///< 2 or 3
    int maxIterations = 200;
    double escapeRadiusSq = 256.0;

    /// degree^2, the factor applied to |z^(degree-1)|^2 in the derivative update.
    double derivativeFactor() const { return static_cast<double>(degree) * degree; }

    bool operator==(const JuliaParams&) const = default;
};

struct MandelbulbParams {
    int power = 8;
    int maxIterations = 4;
    double escapeRadiusSq = 256.0;

    bool operator==(const MandelbulbParams&) const = default;
};

/// Distance estimate plus the orbit data shading needs.
///
/// Julia: aux[0] holds the count of non-escaping iterations.
/// Mandelbulb: aux = (final |w|^2, trap.y, trap.z, trap.w).
struct DistanceSample {
    double d = 0.0;
    std::array<double, 4> aux{};
};

DistanceSample juliaDistance(const Vec3& p, const JuliaParams& params);

DistanceSample mandelbulbDistance(const Vec3& p, const MandelbulbParams& params);

/// Step scale of the tetrahedral stencil relative to the marching precision
/// (1/sqrt(3), so the stencil points sit at distance `precis`).
inline constexpr double kNormalStepScale = 0.5773;

inline constexpr std::array<Vec3, 4> kTetrahedron{{
    {1.0, -1.0, -1.0},
    {-1.0, -1.0, 1.0},
    {-1.0, 1.0, -1.0},
    {1.0, 1.0, 1.0},
}};

/// Gradient direction of `field` at `p` from four samples on a tetrahedron.
///
/// With m = sum_i v_i f(p + h v_i) and sum_i v_i = 0, each term is
/// v_i h <v_i, grad f> to first order, and sum_i (v_i)_x v_i = (4, 0, 0) (same
/// for y and z), so m / 4h approximates grad f. Only the direction is
/// returned. Returns nullopt when the stencil sum is below 1e-20 in magnitude.
template <typename Field>
std::optional<Vec3> estimateNormal(Field&& field, const Vec3& p, double precis) {
    const double h = kNormalStepScale * precis;
    Vec3 sum{};
    for (const Vec3& v : kTetrahedron) {
        sum += v * static_cast<double>(field(p + v * h));
    }
    const double len = length(sum);
    if (!(len >= 1e-20) || !std::isfinite(len)) {
        return std::nullopt;
    }
    return sum / len;
}

}  // namespace fractalmarch
