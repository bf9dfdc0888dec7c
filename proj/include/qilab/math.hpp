#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qilab {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QILAB_DEFINE_ERROR(Name)                    \
    struct Name : error {                           \
        using error::error;                         \
        Name() : error(#Name) {}                    \
    }

QILAB_DEFINE_ERROR(NegativeEnergy);
QILAB_DEFINE_ERROR(NonPositiveDefinite);
QILAB_DEFINE_ERROR(DegenerateForm);
QILAB_DEFINE_ERROR(BadModeIndex);
QILAB_DEFINE_ERROR(CutoffOverflow);
QILAB_DEFINE_ERROR(SingularSum);
QILAB_DEFINE_ERROR(StandardFormUnavailable);
QILAB_DEFINE_ERROR(OutOfRange);
QILAB_DEFINE_ERROR(NoisyDerivative);
QILAB_DEFINE_ERROR(RadiusViolation);
QILAB_DEFINE_ERROR(QuadratureNonConverged);
QILAB_DEFINE_ERROR(NoConvergence);
QILAB_DEFINE_ERROR(TruncationTooSmall);
QILAB_DEFINE_ERROR(ConstraintVacuous);
QILAB_DEFINE_ERROR(ConvergenceConditionViolated);
QILAB_DEFINE_ERROR(BracketFailure);
QILAB_DEFINE_ERROR(DegenerateVariances);
QILAB_DEFINE_ERROR(ClosedFormMismatch);
QILAB_DEFINE_ERROR(GainAtUnity);
QILAB_DEFINE_ERROR(ConfigError);
QILAB_DEFINE_ERROR(IoError);

#undef QILAB_DEFINE_ERROR

// Lanczos log-gamma (g = 7, 9 coefficients), x > 0. Relative error < 1e-13
// over the range used here; checked against std::lgamma in the tests.
double log_gamma(double x);

// ln C(n + m - 1, n) evaluated in the log domain.
double log_binomial(double top, double bottom);

struct GoldenResult {
    double x;
    double value;
};

// Golden-section minimization of a unimodal f on [a, b]; stops when the
// bracket is narrower than xtol or after max_iter shrink steps.
GoldenResult golden_min(const std::function<double(double)>& f, double a, double b,
                        double xtol = 1e-6, int max_iter = 60);

// Nodes and weights for n-point Gauss-Laguerre quadrature on [0, inf) with
// weight e^-x, built from the Golub-Welsch tridiagonal eigenproblem.
void gauss_laguerre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace qilab
