#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ckmbeam/array_channel.hpp"

using namespace ckmbeam;

TEST_SUITE("array_channel") {
  TEST_CASE("zero angle gives the all-ones steering vector") {
    const auto a = steering_vector(0.0, 8);
    REQUIRE(a.size() == 8);
    for (const auto& x : a) CHECK(std::abs(x - cdouble{1.0, 0.0}) < 1e-12);
  }

  TEST_CASE("adjacent DFT angles are orthogonal") {
    const int n = 16;
    const auto a = steering_vector(2.0 / n, n);
    const auto b = steering_vector(0.0, n);
    cdouble dot{};
    for (int m = 0; m < n; ++m) dot += std::conj(a[m]) * b[m];
    CHECK(std::abs(dot) < 1e-9);
  }

  TEST_CASE("angle outside [-1, 1) is rejected") {
    CHECK_THROWS(steering_vector(1.0, 4));
    CHECK_THROWS(steering_vector(-1.5, 4));
  }

  TEST_CASE("broadside receiver has zero LoS angle") {
    Environment env;
    ArrayConfig arr;
    arr.bs_position = {10, 10};
    const auto ch = synthesize_channel(env, arr, {10, 30});
    REQUIRE(!ch.paths.empty());
    CHECK(ch.paths.front().line_of_sight);
    CHECK(std::abs(ch.paths.front().spatial_angle) < 1e-12);
  }

  TEST_CASE("doubling the LoS distance halves the gain") {
    Environment env;
    ArrayConfig arr;
    const auto near = synthesize_channel(env, arr, {3, 4});
    const auto far = synthesize_channel(env, arr, {6, 8});
    CHECK(std::abs(far.paths.front().complex_gain) ==
          doctest::Approx(std::abs(near.paths.front().complex_gain) / 2).epsilon(1e-9));
  }

  TEST_CASE("channel synthesis is deterministic") {
    Environment env;
    env.scatterers = {{{5, 20}, 0.4}, {{-8, 12}, 0.3}};
    ArrayConfig arr;
    const auto a = synthesize_channel(env, arr, {2, 15});
    const auto b = synthesize_channel(env, arr, {2, 15});
    REQUIRE(a.paths.size() == b.paths.size());
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
      CHECK(a.paths[i].complex_gain == b.paths[i].complex_gain);
      CHECK(a.paths[i].spatial_angle == b.paths[i].spatial_angle);
    }
  }

  TEST_CASE("receiver on the BS is an error") {
    Environment env;
    ArrayConfig arr;
    CHECK_THROWS(synthesize_channel(env, arr, arr.bs_position));
  }

  TEST_CASE("max_paths truncates to the strongest paths") {
    Environment env;
    env.max_paths = 2;
    env.scatterers = {{{5, 20}, 0.4}, {{-8, 12}, 0.3}, {{9, 9}, 0.2}};
    ArrayConfig arr;
    const auto ch = synthesize_channel(env, arr, {2, 15});
    CHECK(ch.paths.size() <= 2);
  }

  TEST_CASE("an obstacle attenuates the LoS path") {
    Environment open;
    Environment blocked;
    blocked.obstacles = {{{-5, 5}, {5, 5}}};
    ArrayConfig arr;
    const auto a = synthesize_channel(open, arr, {0, 10});
    const auto b = synthesize_channel(blocked, arr, {0, 10});
    double los_a = 0, los_b = 0;
    for (const auto& p : a.paths) if (p.line_of_sight) los_a = std::abs(p.complex_gain);
    for (const auto& p : b.paths) if (p.line_of_sight) los_b = std::abs(p.complex_gain);
    CHECK(los_b < los_a * 0.1);
  }

  TEST_CASE("matched probe returns |g| sqrt(N)") {
    const int n = 8;
    ChannelRealization ch;
    ch.paths.push_back({cdouble{0.3, -0.4}, 0.25, true});
    auto f = steering_vector(0.25, n);
    for (auto& x : f) x /= std::sqrt(double(n));
    Rng rng(1);
    CHECK(probe(ch, f, 0.0, rng) == doctest::Approx(0.5 * std::sqrt(8.0)).epsilon(1e-12));
  }

  TEST_CASE("orthogonal probe returns zero") {
    const int n = 8;
    ChannelRealization ch;
    ch.paths.push_back({cdouble{1.0, 0.0}, 0.0, true});
    auto f = steering_vector(2.0 / n, n);
    Rng rng(1);
    CHECK(probe(ch, f, 0.0, rng) < 1e-12);
  }

  TEST_CASE("pure noise has Rayleigh mean sigma sqrt(pi)/2") {
    const int n = 4;
    const CVector h(n, cdouble{});
    const CVector f(n, cdouble{0.5, 0.0});
    Rng rng(42);
    const double sigma = 2.0;
    double sum = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) sum += probe(h, f, sigma, rng);
    CHECK(sum / draws == doctest::Approx(sigma * std::sqrt(std::numbers::pi) / 2).epsilon(0.01));
  }

  TEST_CASE("random scatterers respect their bounds") {
    const auto s = random_scatterers(50, {0, 0}, {10, 20}, 0.2, 0.6, 9);
    REQUIRE(s.size() == 50);
    for (const auto& x : s) {
      CHECK(x.position.x >= 0);
      CHECK(x.position.x <= 10);
      CHECK(x.position.y >= 0);
      CHECK(x.position.y <= 20);
      CHECK(x.reflection >= 0.2);
      CHECK(x.reflection <= 0.6);
    }
    CHECK(random_scatterers(50, {0, 0}, {10, 20}, 0.2, 0.6, 9).front().position == s.front().position);
  }
}
