// Copyright 2026 The bincue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bincue/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bincue/error.hpp"

namespace bincue {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
const double kSqrtHalf = std::sqrt(0.5);

// Reduces deg to r in [-45, 45] and quadrant q in {0,1,2,3} with
// deg = 90*q + r (mod 360).
void Reduce(double deg, int& q, double& r) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  const double k = std::round(d / 90.0);
  r = d - 90.0 * k;
  q = static_cast<int>(k) % 4;
}

double SinReduced(double r) {
  if (r == 45.0) return kSqrtHalf;
  if (r == -45.0) return -kSqrtHalf;
  return std::sin(r * kDegToRad);
}

double CosReduced(double r) {
  if (std::fabs(r) == 45.0) return kSqrtHalf;
  return std::cos(r * kDegToRad);
}

void RequireFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InputError(std::string(what) + " must be finite");
  }
}

}  // namespace

double sind(double deg) {
  int q;
  double r;
  Reduce(deg, q, r);
  switch (q) {
    case 0:
      return SinReduced(r);
    case 1:
      return CosReduced(r);
    case 2:
      return -SinReduced(r);
    default:
      return -CosReduced(r);
  }
}

double cosd(double deg) {
  int q;
  double r;
  Reduce(deg, q, r);
  switch (q) {
    case 0:
      return CosReduced(r);
    case 1:
      return -SinReduced(r);
    case 2:
      return -CosReduced(r);
    default:
      return SinReduced(r);
  }
}

double atan2d(double y, double x) {
  if (y == 0.0) {
    if (x >= 0.0) return 0.0;
    return std::signbit(y) ? -180.0 : 180.0;
  }
  if (x == 0.0) return y > 0.0 ? 90.0 : -90.0;
  if (std::fabs(x) == std::fabs(y)) {
    const double a = x > 0.0 ? 45.0 : 135.0;
    return y > 0.0 ? a : -a;
  }
  return std::atan2(y, x) * kRadToDeg;
}

double wrap_azimuth(double deg) {
  if (deg >= -180.0 && deg < 180.0) return deg;
  double d = std::fmod(deg + 180.0, 360.0);
  if (d < 0.0) d += 360.0;
  return d - 180.0;
}

DirectionSpherical make_spherical(double azimuth_deg, double elevation_deg) {
  RequireFinite(azimuth_deg, "azimuth");
  RequireFinite(elevation_deg, "elevation");
  if (elevation_deg < -90.0 || elevation_deg > 90.0) {
    throw InputError("elevation " + std::to_string(elevation_deg) +
                     " deg outside [-90, 90]");
  }
  return {wrap_azimuth(azimuth_deg), elevation_deg};
}

DirectionInteraural make_interaural(double lateral_deg, double polar_deg) {
  RequireFinite(lateral_deg, "lateral angle");
  RequireFinite(polar_deg, "polar angle");
  if (lateral_deg < -90.0 || lateral_deg > 90.0) {
    throw InputError("lateral angle " + std::to_string(lateral_deg) +
                     " deg outside [-90, 90]");
  }
  double p = std::fmod(polar_deg + 90.0, 360.0);
  if (p < 0.0) p += 360.0;
  return {lateral_deg, (polar_deg >= -90.0 && polar_deg < 270.0) ? polar_deg : p - 90.0};
}

SourcePosition make_position(double azimuth_deg, double elevation_deg,
                             double distance_m) {
  RequireFinite(distance_m, "distance");
  if (distance_m <= 0.0) {
    throw InputError("distance must be positive, got " +
                     std::to_string(distance_m));
  }
  return {make_spherical(azimuth_deg, elevation_deg), distance_m};
}

Vec3 unit_vector(const DirectionSpherical& d) {
  const double c = cosd(d.elevation_deg);
  return {c * cosd(d.azimuth_deg), c * sind(d.azimuth_deg),
          sind(d.elevation_deg)};
}

Vec3 to_cartesian(const SourcePosition& p) {
  const Vec3 u = unit_vector(p.direction);
  return {u.x * p.distance_m, u.y * p.distance_m, u.z * p.distance_m};
}

SourcePosition from_cartesian(const Vec3& v) {
  const double r = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  if (!(r > 0.0)) throw InputError("cannot take direction of the origin");
  const double el = atan2d(v.z, std::hypot(v.x, v.y));
  const double az = (v.x == 0.0 && v.y == 0.0) ? 0.0 : atan2d(v.y, v.x);
  return {{wrap_azimuth(az) + 0.0, el + 0.0}, r};
}

DirectionInteraural spherical_to_interaural(const DirectionSpherical& d) {
  const Vec3 u = unit_vector(d);
  const double lateral = atan2d(u.y, std::hypot(u.x, u.z));
  double polar = 0.0;
  if (u.x != 0.0 || u.z != 0.0) {
    polar = atan2d(u.z, u.x);
    if (polar < -90.0) polar += 360.0;
  }
  return {lateral + 0.0, polar + 0.0};
}

DirectionSpherical interaural_to_spherical(const DirectionInteraural& d) {
  const double c = cosd(d.lateral_deg);
  const double x = c * cosd(d.polar_deg);
  const double y = sind(d.lateral_deg);
  const double z = c * sind(d.polar_deg);
  const double el = atan2d(z, std::hypot(x, y));
  const double az = (x == 0.0 && y == 0.0) ? 0.0 : atan2d(y, x);
  return {wrap_azimuth(az) + 0.0, el + 0.0};
}

double wrap_polar_difference(double a_deg, double b_deg) {
  double d = std::fmod(a_deg - b_deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d + 0.0;
}

SourcePosition jitter_position(const SourcePosition& p, double max_offset_m,
                               Rng& rng) {
  if (!(max_offset_m >= 0.0)) {
    throw InputError("jitter offset must be >= 0");
  }
  if (max_offset_m == 0.0) return p;
  std::uniform_real_distribution<double> offset(-max_offset_m, max_offset_m);
  Vec3 v = to_cartesian(p);
  v.x += offset(rng);
  v.y += offset(rng);
  v.z += offset(rng);
  const double r = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  if (r < 1e-3) {
    throw NumericError("jittered position collapsed onto the listener");
  }
  return from_cartesian(v);
}

}  // namespace bincue
