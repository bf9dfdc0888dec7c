#pragma once

#include <functional>

#include "qilab/gaussian.hpp"

namespace qilab {

struct OverlapResult {
    double value = 1.0;    // overlap in (0, 1]
    double s_star = 0.5;   // argmin over s for the Chernoff quantity
    double exponent = 0.0; // -ln(value), per copy
};

// Uhlmann fidelity of two Gaussian states from their first and second moments.
double fidelity_gaussian(const GaussianState& s0, const GaussianState& s1);

// C_s = Tr rho0^s rho1^(1-s) for states whose covariances factor into
// one-mode isotropic and two-mode standard-form blocks; s in (0, 1).
double s_overlap_gaussian(const GaussianState& s0, const GaussianState& s1, double s);

// Golden-section minimization of C_s over s in [0, 1] (endpoints padded by
// 1e-9); the minimizer is unique by convexity of s -> C_s.
OverlapResult chernoff(const GaussianState& s0, const GaussianState& s1);

OverlapResult bhattacharyya(const GaussianState& s0, const GaussianState& s1);

// Fuchs-van de Graaf window ((1-sqrt(1-F^2))/2, F/2) on the error probability.
std::pair<double, double> fvg_bounds(double fidelity);

// K = -4 d^2 f / d theta'^2 at theta' = theta by a 5-point central stencil;
// the h vs h/2 estimates must agree to 1e-4 relative.
double qfi_from_fidelity(const std::function<double(double)>& fidelity_of_theta, double theta,
                         double step);

}  // namespace qilab
