#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "flatproc/measures.hpp"
#include "flatproc/window.hpp"

namespace flatproc {

// Integrated subspace determinant over Haar measures on G(n,r) x G(n,s).
double c_constant(int n, int r, int s);

// Double integral of [L,M] under Q1 x Q2; exact unless both inputs need sampling.
Estimate determinant_integral(const GrassmannMeasure& q1, const GrassmannMeasure& q2, Rng& rng,
                              std::size_t samples = kDefaultMcSamples);
// Double integral of [L,M] * sigma_{(L+M)^perp}(C) under Q1 x Q2.
Estimate directional_integral(const GrassmannMeasure& q1, const GrassmannMeasure& q2, const DirectionSet& c,
                              Rng& rng, std::size_t samples = kDefaultMcSamples);

Estimate proximity_intensity(int n, int k, double gamma, const GrassmannMeasure& q, double delta, Rng& rng);
Estimate proximity_intensity_two(int n, int k1, int k2, double gamma1, double gamma2, const GrassmannMeasure& q1,
                                 const GrassmannMeasure& q2, double delta, Rng& rng);
Estimate proximity_directional(int n, int k, const GrassmannMeasure& q, const DirectionSet& c, Rng& rng,
                               std::size_t samples = kDefaultMcSamples);
// Full directional distribution of segment directions for discrete line processes (probability measure).
SphereMeasure proximity_directional_measure(const GrassmannMeasure& q);

struct IntersectionDensity {
  Estimate gamma;                          // intensity of the intersection process
  std::optional<GrassmannMeasure> measure; // gamma * directional distribution when representable
};

// Intersections of r independent processes (one flat from each).
IntersectionDensity intersection_density(int n, std::span<const double> gammas,
                                         std::span<const GrassmannMeasure> qs, Rng& rng,
                                         std::size_t samples = kDefaultMcSamples);
// Intersections of r distinct flats of a single process of type (S_r); carries the 1/r! factor.
IntersectionDensity intersection_density_sr(int n, double gamma, const GrassmannMeasure& q, int r, Rng& rng,
                                            std::size_t samples = kDefaultMcSamples);
// gamma_(r) Q_(r) of a hyperplane process given its symmetrized normal distribution.
GrassmannMeasure hyperplane_intersection(int n, double gamma, const SphereMeasure& q, int r);

Estimate mean_f_alpha(int n, int k, double gamma, const GrassmannMeasure& q, double delta, double alpha,
                      const WindowDescriptor& a, const DirectionSet& c, double rho, Rng& rng,
                      std::size_t samples = kDefaultMcSamples);

// b(M;C): integral of [L,M] sigma_{(L+M)^perp}(C) over L ~ Q.
Estimate b_function(const Subspace& m, const GrassmannMeasure& q, const DirectionSet& c, Rng& rng,
                    std::size_t samples = kDefaultMcSamples);
// Integral over y in M^perp of the squared k-volume of A cap (M + y).
double ball_section_square_integral(int n, int k, double radius);
Estimate section_square_integral(const WindowDescriptor& a, const Subspace& m, Rng& rng,
                                 std::size_t samples = 1000000);
// Integral over lines g of chord(aB cap g)^p, by radial quadrature.
double chord_power_integral_ball(int n, double p, double radius);
// Isotropic full-sphere covariance integral of a ball expressed through chord powers.
double covariance_integral_chord_form(int n, int k, double radius);

struct CovarianceOptions {
  std::size_t outer_samples = 20000;
  std::size_t inner_samples = 200;
  std::size_t section_samples = 1000000;
};

Estimate covariance_integral(int n, int k, const GrassmannMeasure& q, const WindowDescriptor& a,
                             const DirectionSet& ci, const DirectionSet& cj, Rng& rng,
                             const CovarianceOptions& opt = {});
Estimate asymptotic_covariance(int n, int k, double gamma, const GrassmannMeasure& q, double delta, double alpha_i,
                               double alpha_j, const WindowDescriptor& a, const DirectionSet& ci,
                               const DirectionSet& cj, Rng& rng, const CovarianceOptions& opt = {});

Estimate weibull_beta(int n, int k, double gamma, const GrassmannMeasure& q, const WindowDescriptor& a,
                      const DirectionSet& c, Rng& rng, std::size_t samples = kDefaultMcSamples);
double weibull_cdf(double x, double beta, int n, int k, double alpha);
// Mean number of points of the limit process in (b0, b1].
double weibull_limit_intensity(double beta, int n, int k, double alpha, double b0, double b1);

double isoperimetric_bound(int n, double gamma, double delta);

// JSON record {name, value, standardError, inputs}.
nlohmann::json make_record(const std::string& name, const Estimate& e, nlohmann::json inputs = nlohmann::json::object());

}  // namespace flatproc
