#include "toponet/topostats.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace toponet;

namespace {

struct Featurized {
  PersistenceDiagram diag;
  CliqueProfile profile;
};

Featurized featurize(const WeightedNetwork& net, int d_max = 3, double rho_max = 0.25) {
  const auto filt = build_filtration(net);
  return {compute_persistence(filt, d_max), track_profile(filt, rho_max)};
}

WeightedNetwork random_net(int n, std::uint64_t seed, double p = 1.0) {
  std::mt19937_64 rng(seed);
  return WeightedNetwork(oracle::random_weights(n, rng, p));
}

}  // namespace

TEST_SUITE("topostats") {

TEST_CASE("beta_bar is the area under the Betti curve") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto net = random_net(9, seed, 0.8);
    const auto f = featurize(net);
    const auto total = static_cast<double>(pair_count(9));
    // Betti curves are constant between filtration steps, so midpoints integrate exactly.
    std::vector<double> mid;
    for (int t = 0; t < static_cast<int>(total); ++t) mid.push_back((t + 0.5) / total);
    for (int d = 0; d <= 3; ++d) {
      const auto curve = betti_curve(f.diag, d, mid);
      double area = 0;
      for (int b : curve) area += b / total;
      CHECK(beta_bar(f.diag, d) == doctest::Approx(area).epsilon(1e-12));
    }
  }
}

TEST_CASE("mu_bar_0 is the mean death density over the pair count") {
  const auto f = featurize(random_net(10, 4));
  double deaths = 0;
  for (const auto& iv : f.diag.in_dim(0)) deaths += iv.essential() ? 1.0 : iv.death;
  CHECK(mu_bar(f.diag, 0) == doctest::Approx(deaths / pair_count(10)));
  // one component survives and n-1 merges happen at or before the spanning tree completes
  CHECK(f.diag.in_dim(0).size() == 10);
}

TEST_CASE("mu_bar weights lifetimes by birth") {
  PersistenceDiagram diag;
  diag.node_count = 5;
  diag.d_max = 1;
  diag.intervals = {{{0, 0.1}, {0, 0.2}, {0, 0.3}, {0, 0.4}, {0, std::numeric_limits<double>::infinity()}},
                    {{0.5, 0.7}, {0.6, std::numeric_limits<double>::infinity()}}};
  CHECK(beta_bar(diag, 0) == doctest::Approx(2.0));
  CHECK(beta_bar(diag, 1) == doctest::Approx(0.2 + 0.4));
  CHECK(mu_bar(diag, 0) == doctest::Approx(2.0 / 10));
  CHECK(mu_bar(diag, 1) == doctest::Approx(0.5 * 0.2 + 0.6 * 0.4));
}

TEST_CASE("log-normal fit of a hand-built profile") {
  CliqueProfile p;
  p.grid = {0.0, 0.1, 0.2, 0.4};
  p.steps = {0, 1, 2, 4};
  for (std::int64_t c : {0, 1, 2, 1}) {
    MaximalCliqueVector v;
    v.counts = {0, 0, c};
    v.omega = c ? 3 : 2;
    p.rows.push_back(v);
  }
  const auto fit = lognormal_fit(p, 3);
  const double mu = (std::log(0.1) + 2 * std::log(0.2) + std::log(0.4)) / 4;
  const double var =
      (std::pow(std::log(0.1) - mu, 2) + 2 * std::pow(std::log(0.2) - mu, 2) + std::pow(std::log(0.4) - mu, 2)) / 4;
  CHECK(fit.mu == doctest::Approx(mu));
  CHECK(fit.sigma == doctest::Approx(std::sqrt(var)));
  CHECK(lognormal_fit(p, 5) == LogNormalFit{0, 0});
  CHECK_THROWS(lognormal_fit(p, 0));
}

TEST_CASE("rescaling the density axis shifts mu and keeps sigma") {
  const auto f = featurize(random_net(12, 8));
  auto scaled = f.profile;
  for (auto& rho : scaled.grid) rho *= 3.0;
  for (int k = 2; k <= f.profile.max_omega(); ++k) {
    const auto a = lognormal_fit(f.profile, k);
    const auto b = lognormal_fit(scaled, k);
    if (a == LogNormalFit{}) continue;
    CHECK(b.mu == doctest::Approx(a.mu + std::log(3.0)));
    CHECK(b.sigma == doctest::Approx(a.sigma).epsilon(1e-9));
  }
}

TEST_CASE("log-normal density integrates to one") {
  const LogNormalFit fit{-2.0, 0.5};
  double area = 0;
  const double h = 1e-4;
  for (double x = h / 2; x < 5; x += h) area += lognormal_pdf(x, fit) * h;
  CHECK(area == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(lognormal_pdf(-1, fit) == 0);
}

TEST_CASE("feature vector layout") {
  const auto f = featurize(random_net(11, 3));
  const int omega = f.profile.max_omega();
  const auto tf = assemble_features(f.diag, f.profile, omega + 2, "X", 4);
  CHECK(tf.values.size() == 2 * 4 + 2 * (omega + 2));
  CHECK(tf.network == "X");
  CHECK(tf.sample == 4);
  for (int d = 0; d <= 3; ++d) {
    CHECK(tf.beta_bar(d) == beta_bar(f.diag, d));
    CHECK(tf.mu_bar(d) == mu_bar(f.diag, d));
  }
  for (int k = 1; k <= omega + 2; ++k) CHECK(tf.lognormal(k) == lognormal_fit(f.profile, k));
  CHECK(tf.lognormal(omega + 1) == LogNormalFit{0, 0});
  const auto names = feature_names(3, omega + 2);
  CHECK(names.size() == static_cast<std::size_t>(tf.values.size()));
  CHECK(names.front() == "beta_bar_0");
  CHECK(names[4] == "mu_bar_0");
  CHECK(names[8] == "mu_1");
  CHECK(names[9] == "sigma_1");
}

TEST_CASE("k_max below the clique number is an error naming the network") {
  const auto f = featurize(fixture::weighted(6, fixture::complete_edges(6), 2), 3, 1.0);
  REQUIRE(f.profile.max_omega() == 6);
  try {
    assemble_features(f.diag, f.profile, 5, "K6 test");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("K6 test") != std::string::npos);
  }
}

TEST_CASE("feature table round-trips exactly") {
  std::vector<TopoFeatures> rows;
  for (int s = 0; s < 3; ++s) {
    const auto f = featurize(random_net(10, 20 + s));
    rows.push_back(assemble_features(f.diag, f.profile, 10, "model " + std::to_string(s), s));
  }
  std::stringstream buf;
  write_feature_table(buf, rows);
  CHECK(buf.str().rfind("model,sample,beta_bar_0,", 0) == 0);
  const auto back = read_feature_table(buf);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].network == rows[i].network);
    CHECK(back[i].sample == rows[i].sample);
    CHECK(back[i].d_max == 3);
    CHECK(back[i].k_max == 10);
    CHECK(back[i].values == rows[i].values);
  }
}

}
