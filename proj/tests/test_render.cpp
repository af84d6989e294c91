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


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "bincue/cues.hpp"
#include "bincue/error.hpp"
#include "bincue/render.hpp"
#include "bincue/wav.hpp"

using namespace bincue;

namespace {

constexpr int kRate = 48000;

double db_energy_ratio(std::span<const double> a, std::span<const double> b) {
  return 10 * std::log10(energy(a) / energy(b));
}

SampledSignal decay(double t30, double dur, std::uint64_t seed) {
  Rng r(seed);
  SampledSignal s = white_noise(dur, kRate, r);
  for (std::size_t i = 0; i < s.size(); ++i)
    s.samples[i] *= std::exp(-0.5 * std::log(1e6) * (i / double(kRate)) / t30);
  return s;
}

}  // namespace

TEST_CASE("distance gain rules") {
  CHECK(distance_gain_db(2, 1, -6) == doctest::Approx(-6.0));
  CHECK(distance_gain_db(1, 1, -6) == 0.0);
  CHECK(distance_gain_db(1, 1, -3) == 0.0);
  CHECK(distance_gain_db(2, 1, -3) == doctest::Approx(-3.0));
  CHECK(distance_gain_db(0.5, 1, -6) == doctest::Approx(6.0));
  CHECK_THROWS_AS(distance_gain_db(0, 1, -6), InputError);
}

TEST_CASE("spherical head IR: frontal symmetry") {
  const HeadModel head;
  const auto ir = spherical_head_ir(head, make_position(0, 0, 1.5), kRate);
  CHECK(std::abs(ir.left_delay_s - ir.right_delay_s) < 1e-6);
  CHECK(std::abs(db_energy_ratio(ir.pair.left.samples, ir.pair.right.samples)) < 0.01);
}

TEST_CASE("spherical head IR: lateral delay matches Woodworth") {
  const HeadModel head;
  const auto ir = spherical_head_ir(head, make_position(90, 0, 100), kRate);
  const double want = head.head_radius_m / head.speed_of_sound_m_s *
                      (std::numbers::pi / 2 + 1);
  CHECK(std::abs((ir.right_delay_s - ir.left_delay_s) - want) < 25e-6);
  CHECK(energy(ir.pair.left.samples) > energy(ir.pair.right.samples));
}

TEST_CASE("spherical head IR: level difference grows when near") {
  const HeadModel head;
  const auto near = spherical_head_ir(head, make_position(90, 0, 0.5), kRate);
  const auto far = spherical_head_ir(head, make_position(90, 0, 2.0), kRate);
  CHECK(db_energy_ratio(near.pair.left.samples, near.pair.right.samples) >
        db_energy_ratio(far.pair.left.samples, far.pair.right.samples));
  CHECK_THROWS_AS(spherical_head_ir(head, make_position(0, 0, 0.05), kRate),
                  InputError);
}

TEST_CASE("spherical head IR: mirror symmetry") {
  const HeadModel head;
  for (double az : {15.0, 60.0, 120.0, 170.0}) {
    const auto a = spherical_head_ir(head, make_position(az, 0, 1), kRate);
    const auto b = spherical_head_ir(head, make_position(-az, 0, 1), kRate);
    REQUIRE(a.pair.size() == b.pair.size());
    for (std::size_t i = 0; i < a.pair.size(); ++i)
      REQUIRE(std::abs(a.pair.left.samples[i] - b.pair.right.samples[i]) < 1e-12);
  }
}

TEST_CASE("model validation") {
  HeadModel h;
  h.head_radius_m = -1;
  CHECK_THROWS_AS(h.validate(), InputError);
  h = HeadModel{};
  h.shadow_cutoff_contra_hz = 20000;
  CHECK_THROWS_AS(h.validate(), InputError);

  auto room = RoomAcoustics::table_defaults();
  CHECK_NOTHROW(room.validate());
  room.t30_s.pop_back();
  CHECK_THROWS_AS(room.validate(), InputError);
  room = RoomAcoustics::table_defaults();
  room.t30_s[2] = -0.1;
  CHECK_THROWS_AS(room.validate(), InputError);
}

TEST_CASE("decay estimation on exponential tails") {
  const auto s = decay(0.581, 1.5, 3);
  CHECK(estimate_t30(s.samples, kRate) == doctest::Approx(0.581).epsilon(0.1));
  CHECK(estimate_edt(s.samples, kRate) ==
        doctest::Approx(estimate_t30(s.samples, kRate)).epsilon(0.1));

  std::vector<double> impulse(4800, 0.0);
  impulse[0] = 1.0;
  CHECK_THROWS_AS(estimate_t30(impulse, kRate), NumericError);

  // A tail buried in a -20 dB noise floor is rejected.
  auto noisy = decay(0.5, 1.0, 4);
  Rng r(9);
  const auto floor = white_noise(1.0, kRate, r);
  for (std::size_t i = 0; i < noisy.size(); ++i) noisy.samples[i] += 0.1 * floor.samples[i];
  CHECK_THROWS_AS(estimate_t30(noisy.samples, kRate), NumericError);

  const auto curve = schroeder_curve_db(s.samples);
  CHECK(curve.front() == doctest::Approx(0.0));
  for (std::size_t i = 1; i < curve.size(); ++i) REQUIRE(curve[i] <= curve[i - 1]);
}

TEST_CASE("reverberation tail matches the room") {
  const HeadModel head;
  const auto room = RoomAcoustics::table_defaults();
  const auto design = design_tail(room, head, kRate, 1.0);
  double sum = 0;
  for (double w : design.band_energy) sum += w;
  CHECK(sum == doctest::Approx(1.0));

  Rng r(0);
  const auto tail = synth_reverb_tail(design, room, kRate, r);
  CHECK(std::abs(db_energy_ratio(tail.left.samples, tail.right.samples)) < 0.5);
  const auto bands = octave_filterbank(tail.left, room.band_centers_hz, FilterEdge::kZero);
  for (std::size_t k = 0; k < bands.size(); ++k) {
    CAPTURE(room.band_centers_hz[k]);
    CHECK(estimate_t30(bands[k].samples, kRate) ==
          doctest::Approx(room.t30_s[k]).epsilon(0.1));
  }
  CHECK(estimate_t30(tail.left.samples, kRate) ==
        doctest::Approx(*room.broadband_t30_s).epsilon(0.1));

  CHECK_THROWS_AS(synth_reverb_tail(room, head, kRate, 0.5, r), InputError);
}

TEST_CASE("tail band energy decays in every 50 ms window") {
  const HeadModel head;
  const auto room = RoomAcoustics::table_defaults();
  const auto design = design_tail(room, head, kRate, 1.0);
  const std::size_t win = kRate / 20;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng r(seed), again(seed);
    const auto bands = synth_reverb_tail_bands(design, room, kRate, r);
    const auto tail = synth_reverb_tail(design, room, kRate, again);
    REQUIRE(bands.size() == room.band_centers_hz.size());
    std::vector<double> sum(tail.size(), 0.0);
    for (const auto& b : bands)
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += b.left.samples[i];
    for (std::size_t i = 0; i < sum.size(); ++i)
      REQUIRE(std::abs(sum[i] - tail.left.samples[i]) < 1e-12);

    for (std::size_t k = 0; k < bands.size(); ++k) {
      double prev = HUGE_VAL;
      for (std::size_t w = 0; w + win <= bands[k].size(); w += win) {
        const double e =
            energy(std::span<const double>(bands[k].left.samples).subspan(w, win)) +
            energy(std::span<const double>(bands[k].right.samples).subspan(w, win));
        CAPTURE(seed);
        CAPTURE(room.band_centers_hz[k]);
        CAPTURE(w);
        REQUIRE(e < prev);
        prev = e;
      }
    }
  }
}

TEST_CASE("tail coherence is low") {
  const HeadModel head;
  const auto room = RoomAcoustics::table_defaults();
  const auto design = design_tail(room, head, kRate, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(100 + seed);
    const auto tail = synth_reverb_tail(design, room, kRate, r);
    CAPTURE(seed);
    CHECK(iacc(tail) < 0.5);
  }
}

TEST_CASE("rendering") {
  const HeadModel head;
  Rng r(12);
  const auto burst = white_burst(r);

  Rng a(1);
  const auto front = render(burst, make_position(0, 0, 1), head, nullptr, a);
  CHECK(std::abs(db_energy_ratio(front.pair.left.samples, front.pair.right.samples)) < 0.1);

  Rng b(1), c(1);
  const auto one = render(burst, make_position(0, 0, 1), head, nullptr, b);
  const auto two = render(burst, make_position(0, 0, 2), head, nullptr, c);
  CHECK(db_energy_ratio(one.pair.left.samples, two.pair.left.samples) ==
        doctest::Approx(6.02).epsilon(0.1 / 6.02));

  const auto room = RoomAcoustics::table_defaults();
  Rng d(5), e(5);
  const auto near = render(burst, make_position(30, 0, 0.5), head, &room, d);
  const auto far = render(burst, make_position(30, 0, 2.0), head, &room, e);
  CHECK(iacc(far.pair) < iacc(near.pair));
}

TEST_CASE("rendering is linear before headroom scaling") {
  const HeadModel head;
  Rng r(44);
  auto x = white_burst(r);
  for (double& v : x.samples) v *= 0.25;
  auto y = x;
  for (double& v : y.samples) v *= 3.0;
  const auto ir = spherical_head_ir(head, make_position(-70, 0, 1.2), kRate);
  const auto room = RoomAcoustics::table_defaults();
  Rng t(3);
  const auto tail = synth_reverb_tail(room, head, kRate, 1.0, t);
  const auto rx = render_with_ir(x, ir, &room, &tail, false);
  const auto ry = render_with_ir(y, ir, &room, &tail, false);
  for (std::size_t i = 0; i < rx.pair.size(); ++i) {
    REQUIRE(std::abs(3.0 * rx.pair.left.samples[i] - ry.pair.left.samples[i]) < 1e-9);
    REQUIRE(std::abs(3.0 * rx.pair.right.samples[i] - ry.pair.right.samples[i]) < 1e-9);
  }
  // With headroom scaling on, nothing exceeds full scale.
  for (double& v : y.samples) v *= 40.0;
  const auto loud = render_with_ir(y, ir, &room, &tail);
  CHECK(loud.headroom_gain < 1.0);
  double peak = 0;
  for (double v : loud.pair.left.samples) peak = std::max(peak, std::abs(v));
  for (double v : loud.pair.right.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak <= 1.0);
}

TEST_CASE("convolution paths agree") {
  Rng r(8);
  const auto x = white_noise(0.05, kRate, r), h1 = white_noise(0.001, kRate, r),
             h2 = white_noise(0.02, kRate, r);
  for (const auto* h : {&h1, &h2}) {
    const auto y = convolve(x.samples, h->samples);
    REQUIRE(y.size() == x.size() + h->size() - 1);
    for (std::size_t n : {std::size_t{0}, y.size() / 3, y.size() - 1}) {
      double want = 0;
      for (std::size_t j = 0; j < h->size(); ++j)
        if (n >= j && n - j < x.size()) want += x.samples[n - j] * h->samples[j];
      CHECK(y[n] == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("measured IR set") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "bincue_irset_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const HeadModel head;
  std::ofstream m(dir / "manifest.csv");
  m << "file,azimuth_deg,elevation_deg,distance_m\n";
  for (double az : {0.0, 90.0, -90.0}) {
    const auto ir = spherical_head_ir(head, make_position(az, 0, 1), kRate);
    const std::string name = "ir_" + std::to_string(int(az)) + ".wav";
    wav::write_pcm16(dir / name, kRate, {ir.pair.left.samples, ir.pair.right.samples});
    m << name << "," << az << ",0,1\n";
  }
  m.close();
  const auto set = MeasuredIrSet::load(dir);
  CHECK(set.size() == 3);
  const auto got = set.direct_ir(make_position(80, 0, 1.0), kRate);
  CHECK(energy(got.pair.left.samples) > 10 * energy(got.pair.right.samples));
  CHECK(got.onset_index > 0);
  CHECK_THROWS_AS(set.direct_ir(make_position(0, 0, 1), 44100), InputError);

  std::ofstream bad(dir / "manifest.csv");
  bad << "file,azimuth\n";
  bad.close();
  CHECK_THROWS_AS(MeasuredIrSet::load(dir), InputError);
  CHECK_THROWS_AS(MeasuredIrSet::load(dir / "nope"), InputError);
  fs::remove_all(dir);
}
