#include "bosecycle/pair_potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace bosecycle {

namespace {

constexpr int kShells = 64;
constexpr int kProbesPerShell = 64;

/// Uniform on [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double unit_sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace

PairPotential::PairPotential(int d, double Rc, std::function<double(double)> profile,
                             std::vector<double> knots, bool flat)
    : d_(d), Rc_(Rc), profile_(std::move(profile)), knots_(std::move(knots)), flat_(flat) {
    if (d < 1 || d > 4) {
        throw std::invalid_argument("PairPotential: dimension must lie in 1..4");
    }
    if (!(Rc > 0.0) || !std::isfinite(Rc)) {
        throw std::invalid_argument("PairPotential: support radius must be positive and finite");
    }
    prepare();
}

PairPotential PairPotential::ball(int d, double Rc, double height) {
    if (!(height > 0.0)) {
        throw std::invalid_argument("PairPotential::ball: height must be positive");
    }
    return PairPotential(d, Rc, [height](double) { return height; }, {}, true);
}

PairPotential PairPotential::tabulated(int d, double Rc, std::vector<double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("PairPotential::tabulated: need at least two values");
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("PairPotential::tabulated: values must be finite and nonnegative");
        }
    }
    const double h = Rc / static_cast<double>(values.size() - 1);
    std::vector<double> knots;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        knots.push_back(h * static_cast<double>(i));
    }
    auto table = std::make_shared<std::vector<double>>(std::move(values));
    auto profile = [table, h](double r) {
        const double pos = r / h;
        const auto i = std::min(static_cast<std::size_t>(pos), table->size() - 2);
        const double frac = pos - static_cast<double>(i);
        return (*table)[i] * (1.0 - frac) + (*table)[i + 1] * frac;
    };
    return PairPotential(d, Rc, profile, std::move(knots), false);
}

PairPotential PairPotential::radial(int d, double Rc, std::function<double(double)> profile) {
    return PairPotential(d, Rc, std::move(profile), {}, false);
}

double PairPotential::uhat(double r) const {
    if (r < 0.0 || r > Rc_) {
        return 0.0;
    }
    return profile_(r);
}

double PairPotential::radial_moment(int p) const {
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> cuts{0.0};
    for (double k : knots_) {
        if (k > 0.0 && k < Rc_) {
            cuts.push_back(k);
        }
    }
    cuts.push_back(Rc_);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto f = [this, p](double r) { return std::pow(r, p) * profile_(r); };
        acc += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-14);
    }
    return acc;
}

void PairPotential::prepare() {
    const double m0 = radial_moment(d_ - 1);
    const double m2 = radial_moment(d_ + 1);
    norm1_ = unit_sphere_area(d_) * m0;
    if (!(norm1_ > 0.0)) {
        throw std::invalid_argument("PairPotential: profile has zero norm");
    }
    lambda_u_ = std::sqrt(m0 / m2);

    shell_edges_.assign(kShells + 1, 0.0);
    shell_max_.assign(kShells, 0.0);
    shell_cdf_.assign(kShells, 0.0);
    double total = 0.0;
    for (int b = 0; b <= kShells; ++b) {
        shell_edges_[b] = Rc_ * b / kShells;
    }
    for (int b = 0; b < kShells; ++b) {
        const double ra = shell_edges_[b];
        const double rb = shell_edges_[b + 1];
        double peak = 0.0;
        for (int i = 0; i <= kProbesPerShell; ++i) {
            peak = std::max(peak, profile_(ra + (rb - ra) * i / kProbesPerShell));
        }
        for (double k : knots_) {
            if (k >= ra && k <= rb) {
                peak = std::max(peak, profile_(k));
            }
        }
        if (peak < 0.0) {
            throw std::invalid_argument("PairPotential: profile must be nonnegative");
        }
        shell_max_[b] = peak * (1.0 + 1e-12);
        total += shell_max_[b] * (std::pow(rb, d_) - std::pow(ra, d_));
        shell_cdf_[b] = total;
    }
    for (double& c : shell_cdf_) {
        c /= total;
    }
}

void PairPotential::sample_step(std::mt19937_64& rng, double* out) const {
    auto unif = [](std::mt19937_64& g) { return unit_uniform(g); };
    if (flat_) {
        // uniform in the ball via box rejection
        for (;;) {
            double r2 = 0.0;
            for (int i = 0; i < d_; ++i) {
                out[i] = Rc_ * (2.0 * unif(rng) - 1.0);
                r2 += out[i] * out[i];
            }
            if (r2 <= Rc_ * Rc_) {
                return;
            }
        }
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        const double u = unif(rng);
        const auto b = static_cast<std::size_t>(
            std::lower_bound(shell_cdf_.begin(), shell_cdf_.end(), u) - shell_cdf_.begin());
        const std::size_t shell = std::min<std::size_t>(b, kShells - 1);
        const double ra = std::pow(shell_edges_[shell], d_);
        const double rb = std::pow(shell_edges_[shell + 1], d_);
        const double r = std::pow(ra + unif(rng) * (rb - ra), 1.0 / d_);
        if (unif(rng) * shell_max_[shell] > profile_(r)) {
            continue;
        }
        double norm = 0.0;
        do {
            norm = 0.0;
            for (int i = 0; i < d_; ++i) {
                out[i] = gauss(rng);
                norm += out[i] * out[i];
            }
        } while (norm == 0.0);
        const double scale = r / std::sqrt(norm);
        for (int i = 0; i < d_; ++i) {
            out[i] *= scale;
        }
        return;
    }
}

std::vector<double> PairPotential::sample_step(std::mt19937_64& rng) const {
    std::vector<double> x(static_cast<std::size_t>(d_));
    sample_step(rng, x.data());
    return x;
}

PairPotential PairPotential::rescaled(double s) const {
    if (!(s > 0.0)) {
        throw std::invalid_argument("PairPotential::rescaled: factor must be positive");
    }
    std::vector<double> knots;
    for (double k : knots_) {
        knots.push_back(k * s);
    }
    auto base = profile_;
    PairPotential out(d_, Rc_ * s, [base, s](double r) { return base(r / s); }, std::move(knots), flat_);
    out.beta = beta;
    return out;
}

}  // namespace bosecycle
