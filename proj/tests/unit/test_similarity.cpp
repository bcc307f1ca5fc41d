#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "simcorr/distributions.hpp"
#include "simcorr/errors.hpp"
#include "simcorr/similarity.hpp"

using namespace simcorr;

TEST(Fisher, Examples) {
  EXPECT_EQ(fisher(0.0), 0.0);
  EXPECT_NEAR(fisher(0.5), 0.5 * std::log(3.0), 1e-15);
  EXPECT_NEAR(fisher(0.5), 0.549306, 5e-7);
  EXPECT_EQ(fisher(-0.5), -fisher(0.5));
  EXPECT_THROW(fisher(1.0), DomainError);
  EXPECT_THROW(fisher(-1.2), DomainError);
}

TEST(InverseFisher, Examples) {
  EXPECT_EQ(inverse_fisher(0.0), 0.0);
  EXPECT_NEAR(inverse_fisher(0.549306), 0.5, 1e-6);
  EXPECT_LT(inverse_fisher(10.0), 1.0);
  EXPECT_GT(inverse_fisher(10.0), 0.99999999);
  EXPECT_THROW(inverse_fisher(std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(inverse_fisher(std::nan("")), DomainError);
}

TEST(PhiR, BivariateExamples) {
  EXPECT_NEAR(phi_r(1.0, 2.0), 0.5 * std::log(9.0), 1e-15);
  EXPECT_NEAR(phi_r(1.0, -2.0), -0.5 * std::log(9.0), 1e-15);
  try {
    phi_r(1.0, 1.0);
    FAIL() << "expected a degenerate observation";
  } catch (const DegenerateObservation& e) {
    EXPECT_EQ(e.locus(), DegenerateLocus::equal);
  }
  try {
    phi_r(2.0, -2.0);
    FAIL();
  } catch (const DegenerateObservation& e) {
    EXPECT_EQ(e.locus(), DegenerateLocus::opposite);
  }
  try {
    phi_r(0.0, 0.0);
    FAIL();
  } catch (const DegenerateObservation& e) {
    EXPECT_EQ(e.locus(), DegenerateLocus::origin);
  }
}

TEST(PhiR, ExtremeMagnitudesDoNotOverflow) {
  EXPECT_NEAR(phi_r(1e300, 2e300), std::log(3.0), 1e-14);
  EXPECT_NEAR(phi_r(1e-300, 2e-300), std::log(3.0), 1e-14);
  EXPECT_NEAR(phi_r(5e-324, 1e-323), std::log(3.0), 1e-14);
}

TEST(PhiR, MultivariateExamples) {
  const double a[] = {1.0, 2.0};
  EXPECT_NEAR(phi_r(a), 0.5 * std::log(4.5 / 0.5), 1e-15);
  const double b[] = {2.0, 1.0, 1.0};
  EXPECT_NEAR(phi_r(b), std::log((16.0 / 3.0) / (2.0 / 3.0)) / 3.0, 1e-15);
  EXPECT_NEAR(phi_r(b), 0.693147, 5e-7);
  const double ones[] = {1.0, 1.0, 1.0};
  try {
    phi_r(ones);
    FAIL();
  } catch (const DegenerateObservation& e) {
    EXPECT_EQ(e.locus(), DegenerateLocus::along_ones);
  }
  const double orth[] = {1.0, -2.0, 1.0};
  try {
    phi_r(orth);
    FAIL();
  } catch (const DegenerateObservation& e) {
    EXPECT_EQ(e.locus(), DegenerateLocus::orthogonal_to_ones);
  }
  const double zero[] = {0.0, 0.0, 0.0, 0.0};
  EXPECT_THROW(phi_r(zero), DegenerateObservation);
}

TEST(GammaHat, Examples) {
  EXPECT_NEAR(gamma_hat(Sample::from_rows({{1, 2}, {2, 1}})).gamma_hat, 1.098612, 5e-7);
  EXPECT_EQ(gamma_hat(Sample::from_rows({{1, 2}, {1, -2}})).gamma_hat, 0.0);
  try {
    gamma_hat(Sample::from_rows({{1, 1}}));
    FAIL();
  } catch (const DegenerateObservation& e) {
    ASSERT_TRUE(e.row().has_value());
    EXPECT_EQ(*e.row(), 0u);
  }
  try {
    gamma_hat(Sample::from_rows({{1, 2}, {3, 4}, {5, -5}}));
    FAIL();
  } catch (const DegenerateObservation& e) {
    EXPECT_EQ(*e.row(), 2u);
  }
  const auto est = gamma_hat(Sample::from_rows({{1, 2}, {2, 1}}));
  EXPECT_EQ(est.T, 2u);
  EXPECT_EQ(est.n, 2u);
  EXPECT_FALSE(est.bias_corrected);
}

TEST(GammaHat, EmptySampleRejected) {
  EXPECT_THROW(Sample::from_rows({}), DataError);
  EXPECT_THROW(Sample(0, 2, {}), DataError);
}

TEST(GammaHatBiasCorrected, Examples) {
  const auto s2 = Sample::from_rows({{1, 2}, {3, -1}, {0.5, 0.25}});
  EXPECT_EQ(gamma_hat_bias_corrected(s2).gamma_hat, gamma_hat(s2).gamma_hat);
  const auto s3 = Sample::from_rows({{2, 1, 1}, {1, 1, 4}});
  const double raw = gamma_hat(s3).gamma_hat;
  const auto corrected = gamma_hat_bias_corrected(s3);
  EXPECT_TRUE(corrected.bias_corrected);
  EXPECT_NEAR(corrected.gamma_hat - raw, 2.0 * std::log(2.0) / 3.0, 1e-15);
  const auto zero_mean = Sample::from_rows({{2, 1, 1}, {2.5, -0.5, -0.5}});
  EXPECT_NEAR(gamma_hat(zero_mean).gamma_hat, 0.0, 1e-15);
  EXPECT_NEAR(gamma_hat_bias_corrected(zero_mean).gamma_hat, 0.462098, 5e-7);
}

TEST(Resemblance, Examples) {
  EXPECT_EQ(resemblance_coefficient({1, 1, 0.5}), 0.5);
  EXPECT_NEAR(resemblance_coefficient({1, 4, 1.2}), 0.48, 1e-15);
  EXPECT_NEAR(resemblance_coefficient({1, 4, 1.2}), (2.0 * 1.0 * 2.0 / 5.0) * 0.6, 1e-15);
  EXPECT_EQ(resemblance_coefficient({2, 3, 0}), 0.0);
  EXPECT_THROW(resemblance_coefficient({1, 1, 1}), DomainError);
  EXPECT_THROW(resemblance_coefficient({-1, 1, 0}), DomainError);
}

TEST(EquicorrPhi, Examples) {
  for (std::size_t n : {2u, 3u, 7u}) EXPECT_EQ(equicorr_phi(0.0, n), 0.0);
  EXPECT_NEAR(equicorr_phi(0.5, 2), fisher(0.5), 1e-15);
  EXPECT_NEAR(equicorr_phi(0.5, 3), std::log(4.0) / 3.0, 1e-15);
  EXPECT_THROW(equicorr_phi(-0.5, 3), DomainError);
  EXPECT_THROW(equicorr_phi(1.0, 3), DomainError);
}

TEST(EquicorrPhiInverse, Examples) {
  EXPECT_EQ(equicorr_phi_inverse(0.0, 4), 0.0);
  EXPECT_NEAR(equicorr_phi_inverse(0.549306, 2), 0.5, 1e-6);
  for (std::size_t n : {2u, 3u, 10u}) {
    const double floor = -1.0 / static_cast<double>(n - 1);
    const double r = equicorr_phi_inverse(-50.0, n);
    EXPECT_GE(r, floor);
    EXPECT_NEAR(r, floor, 1e-12);
  }
  EXPECT_THROW(equicorr_phi_inverse(std::nan(""), 3), DomainError);
}

TEST(CovarianceSpecs, EigenvaluesAndLogMatrix) {
  const EquicorrelationCovariance e{2.0, 0.5, 3};
  EXPECT_NEAR(e.lambda_plus(), 4.0, 1e-15);
  EXPECT_NEAR(e.lambda_minus(), 1.0, 1e-15);
  EXPECT_NEAR(e.phi(), equicorr_phi(0.5, 3), 1e-15);
  EXPECT_THROW((EquicorrelationCovariance{1.0, -0.6, 3}.validate()), DomainError);
  const BivariateCovariance b{1.0, 4.0, 1.2};
  EXPECT_NEAR(b.correlation(), 0.6, 1e-15);
}
