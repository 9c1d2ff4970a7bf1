#include <catch2/catch_amalgamated.hpp>

#include <csvt/estimator.hpp>
#include <csvt/rng.hpp>

namespace {

csvt::DataMatrix random_matrix(Eigen::Index p, Eigen::Index n,
                               csvt::rng::Engine& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  csvt::DataMatrix X(p, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < p; ++i) X(i, j) = gauss(eng);
  return X;
}

}  // namespace

TEST_CASE("threshold pinned values", "[estimator]") {
  auto a = csvt::threshold(20, 100, csvt::TnRule::log_n());
  REQUIRE(a.threshold == Catch::Approx(19.077306140987673).epsilon(1e-12));
  REQUIRE(std::abs(a.threshold - 19.077) < 5e-4);
  REQUIRE(a.tn == std::log(100.0));

  auto b = csvt::threshold(1, 4, csvt::TnRule::explicit_value(0.0));
  REQUIRE(b.threshold == 3.0);

  auto c = csvt::threshold(100, 1000000, csvt::TnRule::log_n());
  REQUIRE(c.threshold == Catch::Approx(1023.8155105579642).epsilon(1e-12));
}

TEST_CASE("threshold input validation", "[estimator]") {
  REQUIRE_THROWS_AS(csvt::threshold(1, 1, csvt::TnRule::log_n()),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(csvt::threshold(0, 4, csvt::TnRule::log_n()),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(csvt::TnRule::explicit_value(-0.5), std::invalid_argument);
  REQUIRE_NOTHROW(csvt::threshold(1, 2, csvt::TnRule::log_n()));
}

TEST_CASE("estimate on a zero matrix", "[estimator]") {
  csvt::DataMatrix Z = csvt::DataMatrix::Zero(5, 8);
  auto rep = csvt::csvt_estimate(Z, csvt::TnRule::explicit_value(1.0));
  REQUIRE(rep.count_above == 0);
  REQUIRE(rep.k_hat == 1);
  REQUIRE(csvt::raw_count(Z, csvt::TnRule::explicit_value(1.0)) == 0);
}

TEST_CASE("estimate rejects single-sample input", "[estimator]") {
  csvt::DataMatrix X = csvt::DataMatrix::Ones(5, 1);
  REQUIRE_THROWS_AS(csvt::csvt_estimate(X), std::invalid_argument);
}

TEST_CASE("shift invariance of the estimate", "[estimator]") {
  auto eng = csvt::rng::make_engine(101);
  csvt::DataMatrix X = random_matrix(10, 25, eng);
  csvt::DataMatrix Y = X;
  Y.colwise() += Eigen::VectorXd::Constant(10, 250.0);
  auto a = csvt::csvt_estimate(X, csvt::TnRule::explicit_value(0.0));
  auto b = csvt::csvt_estimate(Y, csvt::TnRule::explicit_value(0.0));
  REQUIRE(a.count_above == b.count_above);
  REQUIRE(a.k_hat == b.k_hat);
}

TEST_CASE("count is monotone in the slack term", "[estimator]") {
  auto eng = csvt::rng::make_engine(55);
  csvt::DataMatrix X = 3.0 * random_matrix(12, 30, eng);
  int prev = std::numeric_limits<int>::max();
  for (double tn : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    auto rep = csvt::csvt_estimate(X, csvt::TnRule::explicit_value(tn));
    REQUIRE(rep.count_above <= prev);
    prev = rep.count_above;
  }
}

TEST_CASE("thresholding is strict", "[estimator]") {
  csvt::DataMatrix X = csvt::DataMatrix::Zero(3, 4);
  for (Eigen::Index j = 0; j < 4; ++j) X(0, j) = (j % 2 == 0) ? 100.0 : -100.0;
  const double sigma =
      csvt::singular_values_centered(X).singular_values[0];
  const double d = std::sqrt(3.0) + std::sqrt(4.0);
  auto below = csvt::csvt_estimate(X, csvt::TnRule::explicit_value(sigma - d - 1e-12));
  auto above = csvt::csvt_estimate(X, csvt::TnRule::explicit_value(sigma - d + 1e-12));
  REQUIRE(below.count_above == 1);
  REQUIRE(above.count_above == 0);
}

TEST_CASE("estimate respects the rank ceiling", "[estimator]") {
  auto eng = csvt::rng::make_engine(88);
  for (auto [p, n] : {std::pair<Eigen::Index, Eigen::Index>{20, 5}, {5, 20},
                      {8, 8}}) {
    csvt::DataMatrix X = 50.0 * random_matrix(p, n, eng);
    auto rep = csvt::csvt_estimate(X, csvt::TnRule::explicit_value(0.0));
    REQUIRE(rep.k_hat >= 1);
    REQUIRE(rep.count_above <= std::min<Eigen::Index>(p, n - 1));
    REQUIRE(rep.k_hat <= std::min<Eigen::Index>(p, n - 1) + 1);
  }
}
