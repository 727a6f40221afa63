#include "fixtures.hpp"
#include "flunow/stats.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace flunow;
using fixtures::code_of;
using fixtures::series;

TEST_CASE("pearson examples") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(pearson(std::span<const double>(x), std::span<const double>(std::vector<double>{2, 4, 6, 8, 10})).r ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(std::span<const double>(x), std::span<const double>(std::vector<double>{5, 4, 3, 2, 1})).r ==
        doctest::Approx(-1.0).epsilon(1e-15));
  // Frozen from the definitional oracle: sqrt(0.6).
  const std::vector<double> y{2, 4, 5, 4, 5};
  CHECK(pearson(std::span<const double>(x), std::span<const double>(y)).r ==
        doctest::Approx(0.774596669241483).epsilon(1e-13));

  const std::vector<std::pair<double, double>> pairs{{1, 2}, {2, 4}, {3, 5}, {4, 4}, {5, 5}};
  CHECK(pearson(pairs).r == doctest::Approx(0.774596669241483).epsilon(1e-13));
  CHECK(pearson(pairs).n == 5);

  Eigen::VectorXd ex(5), ey(5);
  ex << 1, 2, 3, 4, 5;
  ey << 2, 4, 5, 4, 5;
  CHECK(pearson(ex, ey).r == doctest::Approx(0.774596669241483).epsilon(1e-13));
  Eigen::VectorXf fx = ex.cast<float>(), fy = ey.cast<float>();
  CHECK(pearson(fx, fy).r == doctest::Approx(0.7745967).epsilon(1e-5));
}

TEST_CASE("pearson errors") {
  const std::vector<double> c{3, 3, 3, 3};
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(code_of([&] { pearson(std::span<const double>(c), std::span<const double>(v)); }) ==
        ErrorCode::ZeroVariance);
  const std::vector<double> two{1, 2};
  CHECK(code_of([&] { pearson(std::span<const double>(two), std::span<const double>(two)); }) ==
        ErrorCode::TooFewPairs);
  CHECK(code_of([&] { pearson(std::span<const double>(v), std::span<const double>(two)); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("pearson agrees with the definitional oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(3, 300);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(len(rng));
    const auto x = fixtures::gaussian_noise(n, rng(), 50.0, 20.0);
    auto y = fixtures::gaussian_noise(n, rng());
    for (std::size_t i = 0; i < n; ++i) y[i] += 0.05 * x[i];
    const double got = pearson(std::span<const double>(x), std::span<const double>(y)).r;
    CHECK(std::fabs(got - oracle::definitional_pearson(x, y)) <= 1e-12);
  }
}

TEST_CASE("pearson invariances") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = fixtures::gaussian_noise(40, rng());
    const auto y = fixtures::gaussian_noise(40, rng());
    const double base = pearson(std::span<const double>(x), std::span<const double>(y)).r;
    CHECK(base >= -1.0);
    CHECK(base <= 1.0);
    CHECK(pearson(std::span<const double>(y), std::span<const double>(x)).r == doctest::Approx(base).epsilon(1e-14));

    const double a = scale(rng), b = shift(rng);
    std::vector<double> xa(x.size()), xn(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      xa[i] = a * x[i] + b;
      xn[i] = -a * x[i] + b;
    }
    CHECK(std::fabs(pearson(std::span<const double>(xa), std::span<const double>(y)).r - base) <= 1e-12);
    CHECK(std::fabs(pearson(std::span<const double>(xn), std::span<const double>(y)).r + base) <= 1e-12);
  }
}

TEST_CASE("student t tail") {
  CHECK(student_t_two_sided_p(1.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(student_t_two_sided_p(0.0, 5) == doctest::Approx(1.0).epsilon(1e-14));
  // Frozen from the quadrature oracle.
  CHECK(std::fabs(student_t_two_sided_p(2.5, 8) - 0.0369420377136238) <= 1e-8);
  CHECK(std::fabs(student_t_two_sided_p(0.3, 30) - 0.766246105284352) <= 1e-8);
  CHECK(student_t_two_sided_p(-2.5, 8) == student_t_two_sided_p(2.5, 8));
  CHECK(student_t_two_sided_p(std::numeric_limits<double>::infinity(), 4) == 0.0);
  CHECK(code_of([] { student_t_two_sided_p(1.0, 0); }) == ErrorCode::InvalidDof);
  CHECK(code_of([] { student_t_two_sided_p(std::nan(""), 3); }) == ErrorCode::InvalidArgument);

  CHECK(student_t_critical(0.05, 10) == doctest::Approx(2.228138852).epsilon(1e-9));
  CHECK(student_t_two_sided_p(student_t_critical(0.01, 17), 17) == doctest::Approx(0.01).epsilon(1e-9));

  for (int dof : {1, 2, 3, 5, 8, 13, 40, 200}) {
    double prev = 1.0;
    for (double t = 0.25; t < 12.0; t += 0.25) {
      const double p = student_t_two_sided_p(t, dof);
      CHECK(p < prev);
      CHECK(p > 0.0);
      prev = p;
      if (dof >= 3 && t <= 6.0) CHECK(std::fabs(p - oracle::t_two_sided_by_quadrature(t, dof)) <= 1e-8);
    }
  }
}

TEST_CASE("incomplete beta edge values") {
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  // I_x(1, 1) = x and I_x(a, b) = 1 - I_{1-x}(b, a).
  CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(regularized_incomplete_beta(2.5, 4.0, 0.35) ==
        doctest::Approx(1.0 - regularized_incomplete_beta(4.0, 2.5, 0.65)).epsilon(1e-12));
}

TEST_CASE("correlate NA handling") {
  SUBCASE("constant input") {
    const auto r = correlate(series({4, 4, 4, 4, 4}), series({1, 2, 3, 4, 5}), ShiftSpec(0));
    REQUIRE(r.na());
    CHECK(*r.na_reason == NaReason::ZeroVariance);
    CHECK(std::isnan(r.r));
  }
  SUBCASE("too few pairs after shifting") {
    const auto r = correlate(series({1, 2, 3, 4}), series({1, 3, 2, 5}), ShiftSpec(2));
    REQUIRE(r.na());
    CHECK(*r.na_reason == NaReason::TooFewPairs);
    CHECK(r.n == 2);
  }
  SUBCASE("not significant keeps r and p") {
    const auto r = correlate(series({1, 2, 3, 4, 5}), series({2, 4, 5, 4, 5}), ShiftSpec(0));
    REQUIRE(r.na());
    CHECK(*r.na_reason == NaReason::NotSignificant);
    CHECK(r.r == doctest::Approx(0.774596669241483));
    CHECK(r.p_value > 0.05);
    SignificanceConfig loose{0.2};
    CHECK_FALSE(correlate(series({1, 2, 3, 4, 5}), series({2, 4, 5, 4, 5}), ShiftSpec(0), loose).na());
  }
  SUBCASE("perfect correlation is significant") {
    const auto r = correlate(series({1, 2, 3, 4}), series({3, 5, 7, 9}), ShiftSpec(0));
    CHECK_FALSE(r.na());
    CHECK(r.p_value == 0.0);
  }
  SUBCASE("shift reads the case series k weeks later") {
    const auto x = series({0, 1, 5, 2, 8, 3, 9, 4, 1, 0});
    std::vector<double> yv{7, 7};
    yv.insert(yv.end(), x.values().begin(), x.values().end() - 2);
    const auto y = series(yv);
    const auto at2 = correlate(x, y, ShiftSpec(2));
    CHECK(at2.r == doctest::Approx(1.0));
    CHECK(at2.n == 8);
  }
  CHECK(code_of([] { SignificanceConfig{1.5}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { SignificanceConfig{0.0}.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("p-values track a permutation test") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = fixtures::gaussian_noise(30, rng());
    auto y = fixtures::gaussian_noise(30, rng());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.3 * x[i];
    const auto r = correlate_values(x, y);
    CHECK(std::fabs(r.p_value - oracle::permutation_p(x, y, 4000, rng())) <= 0.03);
  }
}

TEST_CASE("ranking order") {
  auto cell = [](double r) {
    CorrelationResult c;
    c.r = r;
    c.p_value = 0.001;
    c.n = 50;
    return c;
  };
  std::vector<RankedQuery> scored{
      {"swine flu", cell(0.30)},        {"H1N1 vaccine", cell(0.43)},
      {"H1N1 virus", cell(0.30)},       {"flu symptoms", CorrelationResult::unavailable(NaReason::ZeroVariance, 50)},
      {"H1N1", cell(0.50)},             {"virus H1N1", cell(0.39)},
      {"H1N1 Egypt", cell(0.30)},       {"avian flu", CorrelationResult::unavailable(NaReason::NotSignificant, 50)},
  };
  const auto ranked = rank_results(scored);
  std::vector<std::string> labels;
  for (const auto& q : ranked) labels.push_back(q.label);
  CHECK(labels == std::vector<std::string>{"H1N1", "H1N1 vaccine", "virus H1N1", "H1N1 Egypt", "H1N1 virus",
                                           "swine flu", "avian flu", "flu symptoms"});

  // Idempotent, and independent of input order.
  CHECK(rank_results(ranked).size() == ranked.size());
  std::reverse(scored.begin(), scored.end());
  std::vector<std::string> again;
  for (const auto& q : rank_results(scored)) again.push_back(q.label);
  CHECK(again == labels);
}

TEST_CASE("rank_queries scores each panel column") {
  const auto y = series({1, 5, 2, 8, 3, 9, 4, 7, 2, 6, 1, 8});
  std::vector<double> strong(y.values().begin(), y.values().end());
  std::vector<double> weak = strong;
  weak[0] += 4;
  weak[5] -= 4;
  const auto panel = QueryPanel({series(weak, "weak"), series(strong, "strong"), series(std::vector<double>(12, 1.0), "flat")});
  const auto ranked = rank_queries(panel, y, ShiftSpec(0));
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].label == "strong");
  CHECK(ranked[1].label == "weak");
  CHECK(ranked[2].label == "flat");
  CHECK(*ranked[2].result.na_reason == NaReason::ZeroVariance);
}
