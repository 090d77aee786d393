#pragma once

#include <functional>
#include <random>
#include <vector>

namespace bosecycle {

/// Nonnegative radial Fourier profile u_hat with compact support of radius Rc.
/// Only the radial values matter; `beta` enters through beta * norm1.
class PairPotential {
  public:
    /// Indicator of the ball of radius Rc, times `height`.
    static PairPotential ball(int d, double Rc, double height = 1.0);
    /// Piecewise-linear interpolation of values on a uniform grid over [0, Rc].
    static PairPotential tabulated(int d, double Rc, std::vector<double> values);
    /// Arbitrary closed-form radial profile on [0, Rc].
    static PairPotential radial(int d, double Rc, std::function<double(double)> profile);

    int dim() const { return d_; }
    double support_radius() const { return Rc_; }
    double uhat(double r) const;

    /// Integral of u_hat over R^d.
    double norm1() const { return norm1_; }
    /// 1/lambda_u^2 = Int u_hat(x) x^2 dx / norm1.
    double lambda_u() const { return lambda_u_; }

    double beta = 1.0;

    /// One step from the density u_hat / norm1.
    void sample_step(std::mt19937_64& rng, double* out) const;
    std::vector<double> sample_step(std::mt19937_64& rng) const;

    /// Returns a copy with u_hat(x) -> u_hat(x / s).
    PairPotential rescaled(double s) const;

    /// Int_0^Rc r^p u_hat(r) dr by adaptive Gauss-Kronrod, split at the kinks.
    double radial_moment(int p) const;

  private:
    PairPotential(int d, double Rc, std::function<double(double)> profile, std::vector<double> knots,
                  bool flat);
    void prepare();

    int d_ = 3;
    double Rc_ = 1.0;
    std::function<double(double)> profile_;
    std::vector<double> knots_;  // radii where the profile may have kinks
    bool flat_ = false;
    double norm1_ = 0.0;
    double lambda_u_ = 0.0;

    // radial-shell envelope
    std::vector<double> shell_edges_;
    std::vector<double> shell_max_;
    std::vector<double> shell_cdf_;
};

}  // namespace bosecycle
