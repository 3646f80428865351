#include "quadtrap/device.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "quadtrap/geometry.hpp"

namespace quadtrap {

double resistance(const ConductorPath& path) {
    if (!(path.length > 0.0) || !(path.cross_section > 0.0) ||
        !(path.resistivity > 0.0))
        throw InvalidArgumentError("conductor path fields must be positive");
    return path.resistivity * path.length / path.cross_section;
}

double power(double resistance_ohm, double current_a) {
    if (!(resistance_ohm > 0.0))
        throw InvalidArgumentError("resistance must be positive");
    if (!std::isfinite(current_a))
        throw InvalidArgumentError("current must be finite");
    return resistance_ohm * current_a * current_a;
}

double current_to_gradient(double current_a, const DeviceCalibration& cal) {
    if (!(current_a >= 0.0)) throw InvalidArgumentError("current must be >= 0");
    if (!(cal.gradient_per_ampere > 0.0))
        throw InvalidArgumentError("gradient calibration must be positive");
    return cal.gradient_per_ampere * current_a;
}

Detuning detuning_for_current(double current_a, const DeviceCalibration& cal) {
    if (!std::isfinite(current_a))
        throw InvalidArgumentError("current must be finite");
    double lo = cal.detuning_lo_current, hi = cal.detuning_hi_current;
    double clamped = std::clamp(current_a, lo, hi);
    double frac = (clamped - lo) / (hi - lo);
    return {cal.detuning_lo_mhz + (cal.detuning_hi_mhz - cal.detuning_lo_mhz) * frac,
            clamped != current_a};
}

namespace {

// 1 inside the plateau; a cosine ramp reaching `rolloff` one octave
// outside, repeated per octave beyond that (C1-continuous, monotone).
double plateau_factor(double gradient, const AtomNumberModel& model) {
    if (gradient <= 0.0) return 0.0;
    if (gradient >= model.plateau_lo && gradient <= model.plateau_hi) return 1.0;
    double octaves = gradient < model.plateau_lo
                         ? std::log2(model.plateau_lo / gradient)
                         : std::log2(gradient / model.plateau_hi);
    double whole = std::floor(octaves);
    double frac = octaves - whole;
    double ramp = 1.0 - (1.0 - model.rolloff) * 0.5 *
                            (1.0 - std::cos(constants::pi * frac));
    return std::pow(model.rolloff, whole) * ramp;
}

}  // namespace

double atom_number_estimate(double beam_diameter_m, double gradient_g_per_cm,
                            const AtomNumberModel& model) {
    if (!(beam_diameter_m > 0.0))
        throw InvalidArgumentError("beam diameter must be positive");
    if (!(gradient_g_per_cm >= 0.0))
        throw InvalidArgumentError("gradient must be >= 0");
    if (!(model.n_ref > 0.0) || !(model.d_ref > 0.0) || !(model.exponent > 0.0) ||
        !(model.plateau_lo < model.plateau_hi) ||
        !(model.rolloff > 0.0 && model.rolloff <= 1.0))
        throw InvalidArgumentError("malformed atom number model");
    return model.n_ref * std::pow(beam_diameter_m / model.d_ref, model.exponent) *
           plateau_factor(gradient_g_per_cm, model);
}

double expansion_sigma(double temperature_k, double sigma0_m, double t_s) {
    if (!(temperature_k >= 0.0)) throw InvalidArgumentError("temperature must be >= 0");
    if (!(sigma0_m > 0.0)) throw InvalidArgumentError("sigma0 must be positive");
    if (!(t_s >= 0.0)) throw InvalidArgumentError("time must be >= 0");
    double thermal = constants::k_boltzmann * temperature_k / constants::mass_rb87;
    return std::sqrt(sigma0_m * sigma0_m + thermal * t_s * t_s);
}

TofFit tof_fit(std::span<const TofSample> samples) {
    if (samples.size() < 3)
        throw InsufficientDataError("time-of-flight fit needs at least 3 samples");
    std::set<double> times;
    for (const auto& s : samples) {
        if (!(s.t >= 0.0) || !(s.sigma > 0.0) || !std::isfinite(s.t) ||
            !std::isfinite(s.sigma))
            throw InvalidDataError("samples need t >= 0 and sigma > 0");
        times.insert(s.t);
    }
    if (times.size() < 2)
        throw InsufficientDataError("time-of-flight fit needs >= 2 distinct times");

    // Linear least squares of sigma^2 against t^2.
    double n = double(samples.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : samples) {
        double x = s.t * s.t;
        double y = s.sigma * s.sigma;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    if (intercept < 0.0)
        throw InvalidDataError("fitted sigma0^2 is negative");

    TofFit fit;
    fit.clamped = slope < 0.0;
    fit.temperature =
        fit.clamped ? 0.0 : constants::mass_rb87 * slope / constants::k_boltzmann;
    fit.sigma0 = std::sqrt(intercept);
    double ss = 0.0;
    for (const auto& s : samples) {
        double r = intercept + slope * s.t * s.t - s.sigma * s.sigma;
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

namespace {

struct GaussParams {
    double a, mu, sigma, c;
};

double gauss_sse(const GaussParams& p,
                 std::span<const std::pair<double, double>> profile) {
    double ss = 0.0;
    for (const auto& [x, v] : profile) {
        double u = (x - p.mu) / p.sigma;
        double r = p.a * std::exp(-0.5 * u * u) + p.c - v;
        ss += r * r;
    }
    return ss;
}

// Gaussian elimination, 4x4 with partial pivoting.
bool solve4(double n[4][4], const double rhs[4], double out[4]) {
    double a[4][5];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) a[r][c] = n[r][c];
        a[r][4] = rhs[r];
    }
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) return false;
        if (pivot != col)
            for (int c = 0; c <= 4; ++c) std::swap(a[pivot][c], a[col][c]);
        for (int r = col + 1; r < 4; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c <= 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double s = a[r][4];
        for (int c = r + 1; c < 4; ++c) s -= a[r][c] * out[c];
        out[r] = s / a[r][r];
    }
    return true;
}

}  // namespace

GaussianFit fit_gaussian_1d(std::span<const std::pair<double, double>> profile) {
    if (profile.size() < 5)
        throw InsufficientDataError("Gaussian fit needs at least 5 points");
    double vmin = profile[0].second, vmax = profile[0].second;
    double xmin = profile[0].first, xmax = profile[0].first;
    for (const auto& [x, v] : profile) {
        if (!std::isfinite(x) || !std::isfinite(v))
            throw InvalidDataError("profile values must be finite");
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    if (vmax - vmin == 0.0) throw DegenerateError("flat profile");
    if (xmax - xmin == 0.0) throw DegenerateError("profile has a single abscissa");

    // Moment-based initialization above the baseline.
    GaussParams p{vmax - vmin, 0.0, 0.0, vmin};
    double wsum = 0.0, wx = 0.0;
    for (const auto& [x, v] : profile) {
        double w = v - vmin;
        wsum += w;
        wx += w * x;
    }
    p.mu = wx / wsum;
    double wvar = 0.0;
    for (const auto& [x, v] : profile)
        wvar += (v - vmin) * (x - p.mu) * (x - p.mu);
    p.sigma = std::sqrt(wvar / wsum);
    if (!(p.sigma > 0.0)) p.sigma = (xmax - xmin) / 4.0;

    // Damped Gauss-Newton on (A, mu, sigma, c).
    const int max_iterations = 200;
    double lambda = 1e-3;
    double sse = gauss_sse(p, profile);
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        double jtj[4][4] = {};
        double jtr[4] = {};
        for (const auto& [x, v] : profile) {
            double u = (x - p.mu) / p.sigma;
            double e = std::exp(-0.5 * u * u);
            double r = p.a * e + p.c - v;
            double j[4] = {e, p.a * e * u / p.sigma, p.a * e * u * u / p.sigma, 1.0};
            for (int row = 0; row < 4; ++row) {
                jtr[row] += j[row] * r;
                for (int col = 0; col < 4; ++col) jtj[row][col] += j[row] * j[col];
            }
        }

        double damped[4][4];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                damped[r][c] = jtj[r][c] + (r == c ? lambda * jtj[r][r] : 0.0);
        double rhs[4] = {-jtr[0], -jtr[1], -jtr[2], -jtr[3]};
        double delta[4];
        if (!solve4(damped, rhs, delta))
            throw DegenerateError("normal equations are singular");

        GaussParams trial{p.a + delta[0], p.mu + delta[1], p.sigma + delta[2],
                          p.c + delta[3]};
        if (trial.sigma == 0.0) trial.sigma = p.sigma * 0.5;
        double trial_sse = gauss_sse(trial, profile);
        if (trial_sse <= sse) {
            bool converged =
                std::abs(delta[0]) <= 1e-12 * (1.0 + std::abs(p.a)) &&
                std::abs(delta[1]) <= 1e-12 * (1.0 + std::abs(p.mu)) &&
                std::abs(delta[2]) <= 1e-12 * (1.0 + std::abs(p.sigma)) &&
                std::abs(delta[3]) <= 1e-12 * (1.0 + std::abs(p.c));
            p = trial;
            sse = trial_sse;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (converged) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e14)
                throw FitFailureError("Gaussian fit stalled",
                                      std::sqrt(sse / double(profile.size())));
        }
    }
    if (iter >= max_iterations)
        throw FitFailureError("Gaussian fit did not converge in 200 iterations",
                              std::sqrt(sse / double(profile.size())));

    return {p.a, p.mu, std::abs(p.sigma), p.c,
            std::sqrt(sse / double(profile.size())), iter + 1};
}

}  // namespace quadtrap
