#include <gtest/gtest.h>

#include <cmath>

#include "intdim/errors.hpp"
#include "intdim/generators.hpp"
#include "intdim/schedule.hpp"

using namespace intdim;

// Reference radii below were evaluated with 30-digit arithmetic (mpmath).

TEST(Schedule, VolumeRate) {
  const auto s = make_schedule(VolumeRate{3.0, std::nullopt}, 100);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s.radii[0], 0.358438976143668, 1e-13);
  EXPECT_TRUE(std::holds_alternative<VolumeRate>(s.provenance));
  EXPECT_NO_THROW(make_schedule(VolumeRate{3.5, 3}, 100));
  EXPECT_THROW(make_schedule(VolumeRate{3.0, 3}, 100), InputError);
}

TEST(Schedule, UniformPointwiseRate) {
  const auto s = make_schedule(UniformPointwiseRate{1.0, 1.0, 2.0, std::nullopt}, 1000);
  EXPECT_NEAR(s.radii[0], 0.288293091858712, 1e-13);
  const auto t = make_schedule(UniformPointwiseRate{21.0, 1.0, 3.0, 2}, 2000);
  EXPECT_NEAR(t.radii[0], 0.656158979358235, 1e-13);
  // the bound (4*2+12)/1 = 20 is strict
  EXPECT_THROW(make_schedule(UniformPointwiseRate{20.0, 1.0, 3.0, 2}, 2000), InputError);
  try {
    make_schedule(UniformPointwiseRate{1.0, 1.0, 2.0, 2}, 1000);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("(4d+12)/delta^2"), std::string::npos);
  }
}

TEST(Schedule, PointwiseRate) {
  const auto s = make_schedule(PointwiseRate{10.0, 1.0, 2.0}, 500);
  EXPECT_NEAR(s.radii[0], 0.352550935282327, 1e-13);
  try {
    make_schedule(PointwiseRate{9.0, 1.0, 2.0}, 500);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("C > 28/(3 delta)"), std::string::npos);
  }
}

TEST(Schedule, CorrelationRate) {
  const auto s = make_schedule(CorrelationRate{0.5, 2.0}, 2000);
  EXPECT_NEAR(s.radii[0], 0.156055251491973, 1e-13);
  EXPECT_THROW(make_schedule(CorrelationRate{0.0, 2.0}, 2000), InputError);
}

TEST(Schedule, RatesShrinkWithN) {
  for (std::size_t n = 10; n < 100000; n *= 3) {
    const double a = make_schedule(VolumeRate{2.5, std::nullopt}, n).radii[0];
    const double b = make_schedule(VolumeRate{2.5, std::nullopt}, n * 3).radii[0];
    EXPECT_LT(b, a);
  }
  EXPECT_THROW(make_schedule(VolumeRate{2.0, std::nullopt}, 1), InputError);
}

TEST(Schedule, LogLogGrid) {
  const auto s = make_schedule(LogLogGrid{0.01, 0.1, 3}, 10);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.radii[0], 0.1);
  EXPECT_NEAR(s.radii[1], 0.0316227766016838, 1e-15);
  EXPECT_EQ(s.radii[2], 0.01);
  EXPECT_EQ(s.ascending().front(), 0.01);

  const auto g = make_schedule(LogLogGrid{0.002, 0.3, 17}, 10);
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_LT(g.radii[i], g.radii[i - 1]);
    EXPECT_NEAR(g.radii[i] / g.radii[i - 1], g.radii[1] / g.radii[0], 1e-12);
  }
  EXPECT_THROW(make_schedule(LogLogGrid{0.1, 0.01, 3}, 10), InputError);
  EXPECT_THROW(make_schedule(LogLogGrid{0.1, 0.1, 3}, 10), InputError);
  EXPECT_EQ(make_schedule(LogLogGrid{0.1, 0.1, 1}, 10).size(), 1u);
}

TEST(Schedule, ExplicitRadii) {
  const auto s = explicit_schedule({0.1, 0.5, 0.2});
  EXPECT_EQ(s.radii, (std::vector<double>{0.5, 0.2, 0.1}));
  EXPECT_THROW(explicit_schedule({}), InputError);
  EXPECT_THROW(explicit_schedule({0.1, 0.1}), InputError);
  EXPECT_THROW(explicit_schedule({0.1, 0.0}), InputError);
}

TEST(Schedule, OrderStatistic) {
  std::vector<double> v(2500);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(v.size() - i);
  EXPECT_EQ(quantile_order_statistic(v, 0.9), 2250.0);
  EXPECT_EQ(quantile_order_statistic(v, 1.0), 2500.0);
  EXPECT_EQ(quantile_order_statistic({3.0, 1.0, 2.0}, 0.5), 2.0);
  EXPECT_EQ(quantile_order_statistic({3.0}, 0.01), 3.0);
  EXPECT_THROW(quantile_order_statistic({}, 0.5), InputError);
  EXPECT_THROW(quantile_order_statistic({1.0}, 0.0), InputError);
}

TEST(Schedule, DefaultGridScalesWithTheData) {
  GeneratorSpec g;
  g.ambient_dim = 3;
  g.intrinsic_dim = 3;
  g.seed = 3;
  const auto c = sample(g, 1000);
  const auto s = default_schedule(c);
  ASSERT_EQ(s.size(), 20u);
  EXPECT_LT(s.radii.back(), s.radii.front());
  EXPECT_GT(s.radii.back(), 0.0);

  std::vector<double> halved = c.coords();
  for (auto& v : halved) v *= 0.5;
  const auto h = default_schedule(PointCloud(halved, 3));
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(h.radii[i], 0.5 * s.radii[i]);

  EXPECT_THROW(default_schedule(PointCloud({1.0, 1.0, 1.0}, 1)), InputError);
}

TEST(Schedule, Describe) {
  EXPECT_EQ(describe(LogLogGrid{0.01, 0.1, 3}), "loglog_grid(0.01, 0.1, 3)");
  EXPECT_NE(describe(PointwiseRate{10, 1, 2}).find("pointwise_rate"), std::string::npos);
}
