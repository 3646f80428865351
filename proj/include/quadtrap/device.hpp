#pragma once

#include <span>
#include <utility>
#include <vector>

#include "quadtrap/errors.hpp"

namespace quadtrap {

/// Bulk geometry of a current path, for resistance estimates.
struct ConductorPath {
    double length = 0.0;         // [m]
    double cross_section = 0.0;  // [m^2]
    double resistivity = 5.0e-8; // [Ohm m], heat-treated Al-Si10-Mg
};

/// Empirical constants of the printed prototype tying drive current to
/// gradient, power and cooling-light detuning.
///
/// The default gradient calibration is the 15 A -> 10 G/cm operating
/// point; the atom-number measurement series implies 0.8 G/cm/A
/// instead, which can be selected by configuration.
struct DeviceCalibration {
    double resistance = 640.0e-6;             // [Ohm]
    double gradient_per_ampere = 10.0 / 15.0; // [G/cm/A]
    double detuning_lo_current = 4.0;         // [A]
    double detuning_lo_mhz = 16.0;            // red detuning [MHz]
    double detuning_hi_current = 25.0;        // [A]
    double detuning_hi_mhz = 25.0;            // [MHz]

    /// Measurement uncertainty on `resistance` [Ohm]; metadata only.
    static constexpr double resistance_uncertainty = 4.0e-6;
};

/// Atom number vs beam diameter and field gradient:
/// N = n_ref * (D/d_ref)^exponent * plateau_factor(gradient).
/// The plateau factor is 1 inside [plateau_lo, plateau_hi] G/cm and
/// ramps smoothly (cosine, one octave) to `rolloff` at half/double the
/// plateau edges, continuing by the same factor every further octave.
struct AtomNumberModel {
    double n_ref = 1.0e8;
    double d_ref = 15.0e-3;  // [m]
    double exponent = 5.82;
    double plateau_lo = 7.0;   // [G/cm]
    double plateau_hi = 20.0;  // [G/cm]
    double rolloff = 0.5;      // factor per octave outside the plateau

    /// Uncertainty on `exponent`; metadata only, not propagated.
    static constexpr double exponent_uncertainty = 0.05;
};

/// One time-of-flight expansion sample.
struct TofSample {
    double t;      // [s]
    double sigma;  // Gaussian cloud radius [m]
};

/// Result of a ballistic-expansion fit sigma^2(t) = sigma0^2 + (kB T/m) t^2.
struct TofFit {
    double temperature;  // [K]
    double sigma0;       // [m]
    double residual;     // rms of sigma^2 misfit [m^2]
    bool clamped;        // fitted slope was negative, temperature clamped to 0
};

struct Detuning {
    double mhz;    // red detuning
    bool clamped;  // current was outside the calibrated range
};

struct GaussianFit {
    double amplitude;
    double center;
    double sigma;
    double offset;
    double residual;  // rms misfit
    int iterations;
};

/// rho L / A.
double resistance(const ConductorPath& path);

/// Ohmic dissipation Z I^2.
double power(double resistance_ohm, double current_a);

/// Strong-axis gradient [G/cm] for a drive current, per calibration.
double current_to_gradient(double current_a, const DeviceCalibration& cal = {});

/// Red detuning maximizing atom number at a drive current; linear
/// interpolation between the calibration endpoints, clamped (and
/// flagged) outside them.
Detuning detuning_for_current(double current_a, const DeviceCalibration& cal = {});

/// Estimated atom number for a cooling-beam diameter [m] and strong-axis
/// gradient [G/cm].
double atom_number_estimate(double beam_diameter_m, double gradient_g_per_cm,
                            const AtomNumberModel& model = {});

/// Ballistic cloud radius sqrt(sigma0^2 + (kB T / m_Rb87) t^2).
double expansion_sigma(double temperature_k, double sigma0_m, double t_s);

/// Linear least squares of sigma^2 against t^2. Needs >= 3 samples with
/// >= 2 distinct times; a negative fitted intercept is invalid data.
TofFit tof_fit(std::span<const TofSample> samples);

/// Damped Gauss-Newton fit of A exp(-(x-mu)^2 / 2 sigma^2) + c to a
/// 1D profile, initialized from moments. Needs >= 5 points.
GaussianFit fit_gaussian_1d(std::span<const std::pair<double, double>> profile);

}  // namespace quadtrap
