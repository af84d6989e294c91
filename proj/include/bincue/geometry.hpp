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

// Angular coordinate systems. Degrees at every API boundary; azimuth and
// lateral angle are positive to the listener's left. Cartesian frame:
// x forward, y left, z up.

#pragma once

#include "bincue/random.hpp"

namespace bincue {

struct DirectionSpherical {
  double azimuth_deg = 0.0;    // [-180, 180)
  double elevation_deg = 0.0;  // [-90, 90]
};

struct DirectionInteraural {
  double lateral_deg = 0.0;  // [-90, 90]
  double polar_deg = 0.0;    // [-90, 270)
};

struct SourcePosition {
  DirectionSpherical direction;
  double distance_m = 1.0;  // > 0
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Trigonometry in degrees, exact at multiples of 90 and symmetric about 45
// (sind(45) == cosd(45)), so grid directions map without rounding noise.
double sind(double deg);
double cosd(double deg);
double atan2d(double y, double x);

// Wraps into [-180, 180).
double wrap_azimuth(double deg);

// Wraps azimuth and validates elevation; throws InputError when elevation
// is outside [-90, 90] or either value is not finite.
DirectionSpherical make_spherical(double azimuth_deg, double elevation_deg);
DirectionInteraural make_interaural(double lateral_deg, double polar_deg);
SourcePosition make_position(double azimuth_deg, double elevation_deg,
                             double distance_m);

Vec3 unit_vector(const DirectionSpherical& d);
Vec3 to_cartesian(const SourcePosition& p);
// Throws InputError for the origin.
SourcePosition from_cartesian(const Vec3& v);

// lateral = asin(y), polar = atan2(z, x) mapped into [-90, 270). At the
// lateral poles (x = z = 0) the polar angle is 0.
DirectionInteraural spherical_to_interaural(const DirectionSpherical& d);
DirectionSpherical interaural_to_spherical(const DirectionInteraural& d);

// Signed minimal difference a - b on the circle, in (-180, 180].
double wrap_polar_difference(double a_deg, double b_deg);

// Uniform offset in [-max, +max] per cartesian axis. Throws InputError for a
// negative offset and NumericError when the result lands within 1 mm of the
// origin.
SourcePosition jitter_position(const SourcePosition& p, double max_offset_m,
                               Rng& rng);

}  // namespace bincue
