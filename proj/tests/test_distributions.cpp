#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "aud/distributions.hpp"
#include "aud/random.hpp"

namespace {

using aud::LawKind;
using aud::ServiceLaw;

constexpr LawKind kLaws[] = {LawKind::exponential, LawKind::uniform, LawKind::deterministic};

// E[g(X)] by quadrature against the density; deterministic laws evaluate g
// at the atom.
template <class G>
double expectation(const ServiceLaw& law, G g) {
  const double mu = law.rate();
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  switch (law.kind()) {
    case LawKind::exponential:
      return Quad::integrate([&](double x) { return g(x) * mu * std::exp(-mu * x); }, 0.0,
                             80.0 / mu, 12, 1e-14);
    case LawKind::uniform:
      return Quad::integrate([&](double x) { return g(x) * mu / 2.0; }, 0.0, 2.0 / mu, 12, 1e-14);
    case LawKind::deterministic:
      return g(1.0 / mu);
  }
  return 0.0;
}

TEST(Distributions, MgfMatchesQuadrature) {
  for (LawKind kind : kLaws) {
    for (double mu : {0.5, 1.5, 4.0}) {
      const ServiceLaw law(kind, mu);
      for (double s : {-20.0, -3.0, -0.75, -1e-6, 0.0, 0.2}) {
        const double oracle = expectation(law, [s](double x) { return std::exp(s * x); });
        EXPECT_NEAR(law.mgf(s), oracle, 1e-10 * std::max(1.0, oracle))
            << aud::to_string(kind) << " mu=" << mu << " s=" << s;
      }
    }
  }
}

TEST(Distributions, MeanFromMgfDerivative) {
  const double h = 1e-5;
  for (LawKind kind : kLaws) {
    const ServiceLaw law(kind, 1.5);
    const double fd = (law.mgf(h) - law.mgf(-h)) / (2 * h);
    EXPECT_NEAR(fd, 1.0 / 1.5, 1e-8) << aud::to_string(kind);
  }
}

TEST(Distributions, SecondMomentMatchesQuadrature) {
  for (LawKind kind : kLaws) {
    const ServiceLaw law(kind, 1.5);
    EXPECT_NEAR(law.second_moment(), expectation(law, [](double x) { return x * x; }), 1e-12);
    EXPECT_NEAR(law.mean(), expectation(law, [](double x) { return x; }), 1e-12);
  }
}

TEST(Distributions, MgfMinusOneKeepsPrecisionNearZero) {
  for (LawKind kind : kLaws) {
    const ServiceLaw law(kind, 1.5);
    const double s = 1e-9;
    // First-order term s E[S] dominates.
    EXPECT_NEAR(law.mgf_minus_one(s) / s, law.mean(), 1e-8) << aud::to_string(kind);
  }
}

TEST(Distributions, MgfStaysPositiveFarInTheLeftTail) {
  // exp(-44) is far below double epsilon relative to 1.
  EXPECT_GT(ServiceLaw::deterministic(1.5).mgf(-66.0), 0.0);
  EXPECT_NEAR(ServiceLaw::deterministic(1.5).mgf(-66.0) / std::exp(-44.0), 1.0, 1e-12);
}

TEST(Distributions, ExponentialMgfRejectsDivergentArgument) {
  EXPECT_THROW(ServiceLaw::exponential(1.5).mgf(1.5), aud::DomainError);
  EXPECT_THROW(ServiceLaw::exponential(1.5).mgf(3.0), aud::DomainError);
  EXPECT_NO_THROW(ServiceLaw::uniform(1.5).mgf(3.0));
}

TEST(Distributions, RejectsNonPositiveRates) {
  EXPECT_THROW(ServiceLaw::exponential(0.0), aud::ConfigError);
  EXPECT_THROW(ServiceLaw::uniform(-1.0), aud::ConfigError);
  EXPECT_THROW(aud::DecisionLaw::periodic(0.0), aud::ConfigError);
}

TEST(Distributions, ParsesLawNames) {
  EXPECT_EQ(aud::parse_law_kind("exp"), LawKind::exponential);
  EXPECT_EQ(aud::parse_law_kind("exponential"), LawKind::exponential);
  EXPECT_EQ(aud::parse_law_kind("uniform"), LawKind::uniform);
  EXPECT_EQ(aud::parse_law_kind("det"), LawKind::deterministic);
  EXPECT_EQ(aud::parse_decision_kind("periodic"), aud::DecisionKind::periodic);
  EXPECT_THROW(aud::parse_law_kind("gamma"), aud::ConfigError);
  EXPECT_THROW(aud::parse_decision_kind("bursty"), aud::ConfigError);
}

// Kolmogorov-Smirnov distance of 1e5 draws against the analytic CDF.
TEST(Distributions, SamplesFollowTheCdf) {
  for (LawKind kind : {LawKind::exponential, LawKind::uniform}) {
    const ServiceLaw law(kind, 1.5);
    aud::RandomStream rng(42, 7);
    std::vector<double> xs(100'000);
    for (auto& x : xs) x = law.sample(rng);
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = law.cdf(xs[i]);
      d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    EXPECT_LT(d, 0.01) << aud::to_string(kind);
  }
}

TEST(Distributions, SampleMomentsMatch) {
  for (LawKind kind : kLaws) {
    const ServiceLaw law(kind, 1.5);
    aud::RandomStream rng(1, 2);
    double sum = 0.0, sum2 = 0.0;
    const int n = 400'000;
    for (int i = 0; i < n; ++i) {
      const double x = law.sample(rng);
      sum += x;
      sum2 += x * x;
    }
    EXPECT_NEAR(sum / n, law.mean(), 0.005) << aud::to_string(kind);
    EXPECT_NEAR(sum2 / n, law.second_moment(), 0.01) << aud::to_string(kind);
  }
}

TEST(RandomStream, SubstreamsAreReproducibleAndDistinct) {
  aud::RandomStream a(5, 0), b(5, 0), c(5, 1), d(6, 0);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform01();
    EXPECT_EQ(x, b.uniform01());
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
    differs_stream |= x != c.uniform01();
    differs_seed |= x != d.uniform01();
  }
  EXPECT_TRUE(differs_stream);
  EXPECT_TRUE(differs_seed);
}

TEST(DecisionLaw, PeriodicSamplesAreConstant) {
  aud::RandomStream rng(1, 1);
  const auto law = aud::DecisionLaw::periodic(15.0);
  EXPECT_TRUE(law.is_periodic());
  EXPECT_DOUBLE_EQ(law.period(), 1.0 / 15.0);
  EXPECT_DOUBLE_EQ(law.sample(rng), 1.0 / 15.0);
  EXPECT_EQ(law.kendall_symbol(), 'D');
  EXPECT_EQ(aud::DecisionLaw::poisson(1.0).kendall_symbol(), 'M');
}

}  // namespace
