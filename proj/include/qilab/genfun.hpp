#pragma once

#include <functional>
#include <vector>

#include "qilab/channels.hpp"
#include "qilab/math.hpp"

namespace qilab {

// Probability generating function of the total photon number on M modes,
// always evaluated on the diagonal xi = (x, ..., x).
class Pgf {
  public:
    static Pgf thermal(double n_b, int modes);
    static Pgf from_pmf(std::vector<double> pmf, int modes, double tail_bound = 0.0);

    double operator()(double xi) const { return eval_(xi); }
    int modes() const { return modes_; }
    // Largest |xi| with absolute convergence; evaluation past it throws.
    double radius() const { return radius_; }
    // Truncation mass not represented by a numeric PMF; evaluations on
    // |xi| <= 1 are accurate to within this bound.
    double tail_bound() const { return tail_; }

    friend Pgf pgf_through_channel(const Pgf& p, const BosonicChannel& ch);

  private:
    Pgf(std::function<double(double)> f, int modes, double radius, double tail)
        : eval_(std::move(f)), modes_(modes), radius_(radius), tail_(tail) {}

    std::function<double(double)> eval_;
    int modes_ = 1;
    double radius_ = 1.0;
    double tail_ = 0.0;
};

Pgf pgf_thermal(double n_b, int modes);

// Exact PGF transforms: loss xi -> P(1 + eta(xi-1)); amplifier
// xi -> [G - xi(G-1)]^-M P(xi/(G - xi(G-1))); thermal loss is their cascade.
Pgf pgf_through_channel(const Pgf& p, const BosonicChannel& ch);

struct MgfViews {
    std::function<double(double)> falling;  // xi -> P(1 + xi)
    std::function<double(double)> rising;   // xi -> (1-xi)^-M P(1/(1-xi))
};

MgfViews mgf_views(const Pgf& p);

// Mean photon number as the falling-view derivative at 0.
double mean_from_pgf(const Pgf& p);

// Taylor coefficients of P at 0 up to degree d by iterated finite differences.
std::vector<double> pmf_from_pgf(const Pgf& p, int d);

}  // namespace qilab
