#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "shadowlab/gallery.hpp"

using namespace shadowlab;

namespace {

std::vector<std::vector<Rat>> matrix_of(const FiniteMetricSpace& s) {
  std::vector<std::vector<Rat>> m(s.size(), std::vector<Rat>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) m[i][j] = s.dist(i, j);
  return m;
}

}  // namespace

TEST_CASE("circle rotations", "[gallery]") {
  const auto id4 = circle_rotation(4, 0);
  CHECK(id4.size() == 4);
  CHECK(diameter(id4.space()) == Rat(1, 2));
  for (int i = 0; i < 4; ++i) CHECK(id4.apply(i) == i);

  const auto half = circle_rotation(4, 2);
  CHECK(orbit(half, 0).period() == 2);
  CHECK(orbit(half, 1).period() == 2);
  CHECK_FALSE(is_minimal(half));

  CHECK(is_minimal(circle_rotation(5, 2)));

  CHECK_THROWS_AS(circle_rotation(1, 0), BadParams);
  CHECK_THROWS_AS(circle_rotation(4, 4), BadParams);
  CHECK_THROWS_AS(circle_rotation(4, -1), BadParams);
}

TEST_CASE("odometers", "[gallery]") {
  const auto two = odometer(1);
  CHECK(two.size() == 2);
  CHECK(two.space().dist(0, 1) == Rat(1));
  CHECK(two.apply(0) == 1);
  CHECK(two.apply(1) == 0);

  const auto od2 = odometer(2);
  CHECK(od2.space().dist(0, 2) == Rat(1, 2));
  CHECK(od2.space().dist(0, 1) == Rat(1));
  CHECK(orbit(od2, 0).period() == 4);
  CHECK(is_minimal(od2));
  CHECK(od2.space().label(2) == "01");  // little-endian bits

  CHECK_THROWS_AS(odometer(0), BadParams);
}

TEST_CASE("cat maps", "[gallery]") {
  for (int n = 2; n <= 6; ++n) {
    const auto cat = cat_map(n);  // constructor validates bijectivity
    CHECK(cat.size() == static_cast<std::size_t>(n * n));
    CHECK(cat.apply(0) == 0);  // (0,0) is fixed
  }
  const auto cat5 = cat_map(5);
  long long ord = 1;
  std::vector<char> seen(cat5.size(), 0);
  for (std::size_t x = 0; x < cat5.size(); ++x) {
    if (seen[x]) continue;
    long long len = 0;
    int t = static_cast<int>(x);
    do {
      seen[static_cast<std::size_t>(t)] = 1;
      t = cat5.apply(t);
      ++len;
    } while (t != static_cast<int>(x));
    ord = std::lcm(ord, len);
  }
  CHECK(perm_order(cat5) == ord);
}

TEST_CASE("cantor plus interval construction", "[gallery]") {
  const auto small = cantor_plus_interval(1, 2);
  REQUIRE(small.size() == 4);
  CHECK(small.labels() == std::vector<std::string>{"0/1", "2/3", "1/1", "2/1"});
  CHECK(small.dist(0, 1) == Rat(2, 3));

  CHECK(cantor_plus_interval(2, 5).size() == 9);
  CHECK(cantor_plus_interval(3, 9).size() == 17);

  const auto scales = cantor_documented_scales(3, 9);
  CHECK(scales.eps == Rat(2, 27));
  CHECK(scales.delta == Rat(1, 8));
  CHECK(cantor_merge_gap(5) == Rat(1, 4));

  CHECK_THROWS_AS(cantor_plus_interval(0, 5), BadParams);
  CHECK_THROWS_AS(cantor_plus_interval(2, 1), BadParams);
}

TEST_CASE("random systems are deterministic and valid", "[gallery]") {
  CHECK(random_system(1, 7).size() == 1);

  for (auto kind : {RandomMetricKind::euclidean_square, RandomMetricKind::random_tree}) {
    const auto a = random_system(6, 1, kind);
    const auto b = random_system(6, 1, kind);
    CHECK(a.fwd() == b.fwd());
    CHECK(a.space().labels() == b.space().labels());
    CHECK(matrix_of(a.space()) == matrix_of(b.space()));
    CHECK_FALSE(find_metric_violation(matrix_of(a.space())).has_value());
  }
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    CHECK_FALSE(find_metric_violation(matrix_of(random_system(8, seed).space())).has_value());
    CHECK_FALSE(find_metric_violation(
                    matrix_of(random_system(8, seed, RandomMetricKind::random_tree).space()))
                    .has_value());
  }
  CHECK_THROWS_AS(random_system(0, 1), BadParams);
}

TEST_CASE("gallery maps are isometries where documented", "[gallery][property]") {
  CHECK(is_isometry(circle_rotation(9, 4)));
  CHECK(is_isometry(odometer(4)));
  for (int n = 2; n <= 9; ++n)
    for (int k = 0; k < n; ++k)
      CHECK(is_minimal(circle_rotation(n, k)) == (std::gcd(k, n) == 1));
  for (int levels = 1; levels <= 5; ++levels) CHECK(is_minimal(odometer(levels)));
}

TEST_CASE("gallery spec dispatch", "[gallery]") {
  GallerySpec spec;
  spec.kind = GalleryKind::odometer;
  spec.levels = 2;
  CHECK(make_gallery_system(spec).size() == 4);
  spec.kind = GalleryKind::cantor_plus_interval;
  spec.level = 2;
  spec.grid = 5;
  const auto cant = make_gallery_system(spec);
  CHECK(cant.size() == 9);
  CHECK(is_isometry(cant));  // identity map
  spec.kind = GalleryKind::random_system;
  spec.n = 5;
  spec.seed = 3;
  CHECK(make_gallery_system(spec).size() == 5);
}
