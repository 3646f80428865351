#include "quadtrap/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadtrap/geometry.hpp"

namespace quadtrap {

namespace {

// On-axis field of an in-plane loop of radius r at height z0 above the
// plane, per unit current, in units of mu0 I / R. b = a(r) i, so the
// zero-field, gradient and curvature conditions reduce to the
// coefficients below and their z-derivatives.
double coeff_b(double r, double z0) {
    double w = r * r + z0 * z0;
    return r * r / (2.0 * w * std::sqrt(w));
}

double coeff_db(double r, double z0) {
    double w = r * r + z0 * z0;
    return -3.0 * z0 * r * r / (2.0 * w * w * std::sqrt(w));
}

double coeff_d2b(double r, double z0) {
    double w = r * r + z0 * z0;
    return 1.5 * r * r * (4.0 * z0 * z0 - r * r) / (w * w * w * std::sqrt(w));
}

double curvature_residual(double r1, double r2, double z0) {
    double ratio = -coeff_b(r1, z0) / coeff_b(r2, z0);
    return coeff_d2b(r1, z0) + ratio * coeff_d2b(r2, z0);
}

FeasiblePoint equal_power_point(double r1, double r2, double z0) {
    double ratio = -coeff_b(r1, z0) / coeff_b(r2, z0);
    double g_unit = coeff_db(r1, z0) + ratio * coeff_db(r2, z0);
    double p_unit = r1 + r2 * ratio * ratio;
    double i1 = std::sqrt(2.0 / p_unit);
    return {r1, r2, i1, ratio * i1, std::abs(g_unit) * i1};
}

// Roots of the curvature residual in r2 for fixed r1, bisected to 1e-10.
std::vector<double> feasible_r2_roots(double r1, double z0, double r2_max) {
    std::vector<double> roots;
    const double scan_step = 0.01;
    double prev_r = r1 + 0.02;
    if (prev_r >= r2_max) return roots;
    double prev = curvature_residual(r1, prev_r, z0);
    for (double r = prev_r + scan_step; r <= r2_max + 0.5 * scan_step; r += scan_step) {
        double cur = curvature_residual(r1, r, z0);
        if (prev == 0.0) {
            roots.push_back(prev_r);
        } else if (prev * cur < 0.0) {
            double lo = prev_r, hi = r;
            while (hi - lo > 1e-10) {
                double mid = 0.5 * (lo + hi);
                double val = curvature_residual(r1, mid, z0);
                if (val == 0.0) {
                    lo = hi = mid;
                    break;
                }
                (prev * val < 0.0 ? hi : lo) = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev = cur;
        prev_r = r;
    }
    return roots;
}

// Best equal-power gradient over all feasible branches at this r1;
// 0 when the curve does not pass through this r1.
double best_gradient_at(double r1, double z0, double r2_max, FeasiblePoint* out) {
    double best = 0.0;
    for (double r2 : feasible_r2_roots(r1, z0, r2_max)) {
        FeasiblePoint fp = equal_power_point(r1, r2, z0);
        if (fp.gradient > best) {
            best = fp.gradient;
            if (out) *out = fp;
        }
    }
    return best;
}

}  // namespace

CurrentSolve planar_current_solve(double r1, double r2, double z0) {
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw InvalidArgumentError("loop radii must be positive");
    if (!(z0 > 0.0)) throw InvalidArgumentError("z0 must be positive");
    if (std::abs(r1 - r2) <= 1e-12 * std::max(r1, r2))
        throw DegenerateError("equal radii: loop fields are proportional, no "
                              "independent zero");
    double b2 = coeff_b(r2, z0);
    if (b2 == 0.0) throw DegenerateError("outer loop produces no on-axis field");
    double ratio = -coeff_b(r1, z0) / b2;
    return {ratio, coeff_d2b(r1, z0) + ratio * coeff_d2b(r2, z0)};
}

PlanarOptimum optimize_planar(double z0, double reference_radius,
                              double reference_current,
                              const PlanarSearchOptions& opts,
                              std::vector<FeasiblePoint>* sweep) {
    if (!(z0 > 0.0)) throw InvalidArgumentError("z0 must be positive");
    if (!(reference_radius > 0.0))
        throw InvalidArgumentError("reference radius must be positive");
    if (!(reference_current != 0.0) || !std::isfinite(reference_current))
        throw InvalidArgumentError("reference current must be nonzero");
    if (!(opts.r1_min > 0.0) || !(opts.r1_max > opts.r1_min) ||
        !(opts.r2_max > opts.r1_min) || !(opts.coarse_step > 0.0))
        throw InvalidArgumentError("malformed search bounds");

    if (sweep) sweep->clear();

    // Coarse scan of the feasible curve.
    double best_r1 = 0.0, best_gradient = 0.0;
    bool found = false;
    for (double r1 = opts.r1_min; r1 <= opts.r1_max + 0.5 * opts.coarse_step;
         r1 += opts.coarse_step) {
        for (double r2 : feasible_r2_roots(r1, z0, opts.r2_max)) {
            FeasiblePoint fp = equal_power_point(r1, r2, z0);
            if (sweep) sweep->push_back(fp);
            if (!found || fp.gradient > best_gradient) {
                best_gradient = fp.gradient;
                best_r1 = r1;
                found = true;
            }
        }
    }
    if (!found)
        throw InfeasibleError("no zero-curvature configuration in the search bounds");

    // Golden-section refinement of r1 around the coarse maximum.
    const double gold = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::max(opts.r1_min, best_r1 - opts.coarse_step);
    double hi = std::min(opts.r1_max, best_r1 + opts.coarse_step);
    double x1 = hi - gold * (hi - lo);
    double x2 = lo + gold * (hi - lo);
    double f1 = best_gradient_at(x1, z0, opts.r2_max, nullptr);
    double f2 = best_gradient_at(x2, z0, opts.r2_max, nullptr);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gold * (hi - lo);
            f2 = best_gradient_at(x2, z0, opts.r2_max, nullptr);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gold * (hi - lo);
            f1 = best_gradient_at(x1, z0, opts.r2_max, nullptr);
        }
    }

    FeasiblePoint best{};
    if (best_gradient_at(0.5 * (lo + hi), z0, opts.r2_max, &best) <= 0.0)
        throw InfeasibleError("feasible curve lost during refinement");

    const double g3_unit = 48.0 / (25.0 * std::sqrt(5.0));
    double unit_gradient =
        constants::mu0 * reference_current / (reference_radius * reference_radius);

    PlanarOptimum opt;
    opt.config = {best.r1, best.r2, best.i1, best.i2, z0};
    opt.gradient_2d = best.gradient * unit_gradient;
    opt.gradient_3d = g3_unit * unit_gradient;
    opt.gradient_ratio = g3_unit / best.gradient;

    // Power needed by the planar pair at currents upscaled to match the
    // 3D gradient, relative to the common reference power 2 R I^2.
    double up = opt.gradient_ratio;
    opt.power_ratio = (best.r1 * best.i1 * up * best.i1 * up +
                       best.r2 * best.i2 * up * best.i2 * up) /
                      2.0;
    return opt;
}

double anti_helmholtz_gradient(double radius_m, double current_a) {
    if (!(radius_m > 0.0)) throw InvalidArgumentError("radius must be positive");
    return 48.0 * constants::mu0 * current_a /
           (25.0 * std::sqrt(5.0) * radius_m * radius_m);
}

ScalingTable scaling_study(std::span<const double> scales,
                           double target_gradient_t_per_m,
                           const ConductorPath& reference_path,
                           double reference_radius) {
    if (scales.empty()) throw InvalidArgumentError("scales list is empty");
    for (double s : scales)
        if (!(s > 0.0) || !std::isfinite(s))
            throw InvalidArgumentError("scales must be positive");
    if (!(target_gradient_t_per_m > 0.0))
        throw InvalidArgumentError("target gradient must be positive");
    if (!(reference_radius > 0.0))
        throw InvalidArgumentError("reference radius must be positive");

    double gradient_per_amp = anti_helmholtz_gradient(reference_radius, 1.0);
    double reference_resistance = resistance(reference_path);

    ScalingTable table;
    table.rows.reserve(scales.size());
    for (double s : scales) {
        // Holding the gradient needs I ~ s^2; conductor length grows as
        // s and cross section as s^2, so Z ~ 1/s.
        double current = target_gradient_t_per_m * s * s / gradient_per_amp;
        double res = reference_resistance / s;
        table.rows.push_back({s, current, res, power(res, current)});
    }

    // Log-log slopes; meaningful only with >= 2 distinct scales.
    double n = double(table.rows.size());
    double sx = 0, sxx = 0, si = 0, sp = 0, sxi = 0, sxp = 0;
    for (const auto& row : table.rows) {
        double lx = std::log(row.scale);
        sx += lx;
        sxx += lx * lx;
        si += std::log(row.current);
        sp += std::log(row.power);
        sxi += lx * std::log(row.current);
        sxp += lx * std::log(row.power);
    }
    double denom = n * sxx - sx * sx;
    if (denom > 0.0) {
        table.current_exponent = (n * sxi - sx * si) / denom;
        table.power_exponent = (n * sxp - sx * sp) / denom;
    } else {
        table.current_exponent = std::numeric_limits<double>::quiet_NaN();
        table.power_exponent = std::numeric_limits<double>::quiet_NaN();
    }
    return table;
}

}  // namespace quadtrap
