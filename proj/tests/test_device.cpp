#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "quadtrap/device.hpp"
#include "quadtrap/geometry.hpp"

using namespace quadtrap;

TEST_CASE("resistance of the printed path geometry") {
    ConductorPath path{0.2, 1.5e-5, 5e-8};
    CHECK(resistance(path) == doctest::Approx(666.67e-6).epsilon(1e-4));
    ConductorPath longer{0.4, 1.5e-5, 5e-8};
    CHECK(resistance(longer) == 2.0 * resistance(path));
    ConductorPath thicker{0.2, 3.0e-5, 5e-8};
    CHECK(resistance(thicker) == 0.5 * resistance(path));
    CHECK_THROWS_AS(resistance(ConductorPath{0.0, 1e-5, 5e-8}),
                    InvalidArgumentError);
}

TEST_CASE("power at the paper's operating points") {
    CHECK(power(640e-6, 15.0) == doctest::Approx(0.144).epsilon(1e-12));
    CHECK(power(640e-6, 50.0) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(power(640e-6, 0.0) == 0.0);
    CHECK_THROWS_AS(power(0.0, 1.0), InvalidArgumentError);
}

TEST_CASE("power is exactly quadratic in current") {
    for (double i : {0.5, 3.0, 12.5}) {
        CHECK(power(640e-6, 2.0 * i) == 4.0 * power(640e-6, i));
        CHECK(power(640e-6, -i) == power(640e-6, i));
    }
}

TEST_CASE("current to gradient calibration") {
    CHECK(current_to_gradient(15.0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(current_to_gradient(0.0) == 0.0);
    DeviceCalibration fig5;
    fig5.gradient_per_ampere = 0.8;  // atom-number series calibration
    CHECK(current_to_gradient(4.0, fig5) == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(current_to_gradient(50.0, fig5) == doctest::Approx(40.0).epsilon(1e-12));
    CHECK_THROWS_AS(current_to_gradient(-1.0), InvalidArgumentError);
}

TEST_CASE("detuning interpolation endpoints and midpoint") {
    CHECK(detuning_for_current(4.0).mhz == 16.0);
    CHECK(detuning_for_current(25.0).mhz == 25.0);
    CHECK(detuning_for_current(14.5).mhz == doctest::Approx(20.5).epsilon(1e-12));
    CHECK_FALSE(detuning_for_current(14.5).clamped);
}

TEST_CASE("detuning clamps outside the calibrated range") {
    Detuning low = detuning_for_current(2.0);
    CHECK(low.mhz == 16.0);
    CHECK(low.clamped);
    Detuning high = detuning_for_current(30.0);
    CHECK(high.mhz == 25.0);
    CHECK(high.clamped);
}

TEST_CASE("detuning interpolation is monotone") {
    double prev = 0.0;
    for (double i = 4.0; i <= 25.0; i += 0.5) {
        double mhz = detuning_for_current(i).mhz;
        CHECK(mhz >= prev);
        prev = mhz;
    }
}

TEST_CASE("atom numbers at the paper's beam diameters") {
    CHECK(atom_number_estimate(15e-3, 10.0) == doctest::Approx(1e8).epsilon(1e-12));
    CHECK(atom_number_estimate(12e-3, 10.0) ==
          doctest::Approx(2.7288755e7).epsilon(1e-6));
    double n9 = atom_number_estimate(9e-3, 10.0);
    CHECK(n9 == doctest::Approx(5.1149369e6).epsilon(1e-6));
    CHECK(atom_number_estimate(12e-3, 10.0) > 1e7);
    // measured 2.0e6 at 9 mm: model agrees within a factor of 3
    CHECK(n9 / 2.0e6 < 3.0);
    CHECK(2.0e6 / n9 < 3.0);
}

TEST_CASE("plateau factor shape") {
    // inside the plateau the estimate is gradient independent
    double base = atom_number_estimate(15e-3, 10.0);
    CHECK(atom_number_estimate(15e-3, 7.0) == base);
    CHECK(atom_number_estimate(15e-3, 20.0) == base);
    // one octave outside: exactly the rolloff factor
    CHECK(atom_number_estimate(15e-3, 3.5) == doctest::Approx(0.5 * base).epsilon(1e-12));
    CHECK(atom_number_estimate(15e-3, 40.0) == doctest::Approx(0.5 * base).epsilon(1e-12));
    // two octaves: rolloff squared
    CHECK(atom_number_estimate(15e-3, 1.75) ==
          doctest::Approx(0.25 * base).epsilon(1e-12));
    // zero gradient: no trap
    CHECK(atom_number_estimate(15e-3, 0.0) == 0.0);
    // monotone decrease below the plateau
    double prev = base;
    for (double g = 6.9; g > 0.5; g -= 0.1) {
        double n = atom_number_estimate(15e-3, g);
        CHECK(n <= prev + 1e-9 * base);
        prev = n;
    }
}

TEST_CASE("estimator is a pure power law in diameter") {
    // log-log slope over D in [6, 15] mm equals the exponent to 1e-9
    AtomNumberModel model;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double d = 6e-3; d <= 15.01e-3; d += 0.5e-3) {
        double lx = std::log(d);
        double ly = std::log(atom_number_estimate(d, 10.0, model));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(model.exponent).epsilon(1e-9));
}

TEST_CASE("expansion_sigma basics") {
    CHECK(expansion_sigma(170e-6, 1e-3, 0.0) == 1e-3);
    CHECK(expansion_sigma(0.0, 1e-3, 0.05) == 1e-3);
    CHECK(expansion_sigma(20.1e-6, 0.5e-3, 12e-3) ==
          doctest::Approx(7.258807072696488e-4).epsilon(1e-12));
    CHECK_THROWS_AS(expansion_sigma(-1e-6, 1e-3, 0.0), InvalidArgumentError);
    CHECK_THROWS_AS(expansion_sigma(1e-6, 0.0, 0.0), InvalidArgumentError);
}

TEST_CASE("tof_fit recovers the MOT temperature from noiseless data") {
    std::vector<TofSample> samples;
    for (double t : {0.0, 4e-3, 8e-3, 12e-3})
        samples.push_back({t, expansion_sigma(170e-6, 1e-3, t)});
    TofFit fit = tof_fit(samples);
    CHECK(fit.temperature == doctest::Approx(170e-6).epsilon(1e-3));
    CHECK(fit.sigma0 == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK_FALSE(fit.clamped);
}

TEST_CASE("tof_fit round trip is the identity on noiseless inputs") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> temp(5e-6, 400e-6);
    std::uniform_real_distribution<double> size(0.2e-3, 2e-3);
    for (int trial = 0; trial < 50; ++trial) {
        double t0 = temp(rng), s0 = size(rng);
        std::vector<TofSample> samples;
        for (double t : {0.0, 2e-3, 5e-3, 9e-3, 14e-3, 20e-3})
            samples.push_back({t, expansion_sigma(t0, s0, t)});
        TofFit fit = tof_fit(samples);
        CHECK(fit.temperature == doctest::Approx(t0).epsilon(1e-6));
        CHECK(fit.sigma0 == doctest::Approx(s0).epsilon(1e-6));
    }
}

TEST_CASE("tof_fit of a constant cloud size gives zero temperature") {
    std::vector<TofSample> samples{{0.0, 1e-3}, {5e-3, 1e-3}, {10e-3, 1e-3}};
    TofFit fit = tof_fit(samples);
    CHECK(fit.temperature == 0.0);
    CHECK(fit.sigma0 == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("tof_fit data requirements") {
    std::vector<TofSample> two{{0.0, 1e-3}, {5e-3, 1.2e-3}};
    CHECK_THROWS_AS(tof_fit(two), InsufficientDataError);
    std::vector<TofSample> same_t{{5e-3, 1e-3}, {5e-3, 1.1e-3}, {5e-3, 1.2e-3}};
    CHECK_THROWS_AS(tof_fit(same_t), InsufficientDataError);
    std::vector<TofSample> bad{{0.0, 1e-3}, {5e-3, -1.0}, {10e-3, 1e-3}};
    CHECK_THROWS_AS(tof_fit(bad), InvalidDataError);
}

TEST_CASE("tof_fit rejects a negative fitted intercept") {
    // sigma^2 = t^2 - 0.5 (pure synthetic, intercept < 0)
    std::vector<TofSample> samples;
    for (double t : {1.0, 1.5, 2.0, 3.0})
        samples.push_back({t, std::sqrt(t * t - 0.5)});
    CHECK_THROWS_AS(tof_fit(samples), InvalidDataError);
}

TEST_CASE("gaussian fit recovers exact parameters") {
    std::vector<std::pair<double, double>> profile;
    for (double x = -5.0; x <= 5.0; x += 0.25)
        profile.emplace_back(x, std::exp(-0.5 * x * x));
    GaussianFit fit = fit_gaussian_1d(profile);
    CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit.center == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(fit.sigma == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit.offset == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("gaussian fit recovers shifted, scaled, offset profiles") {
    std::vector<std::pair<double, double>> profile;
    for (double x = -2.0; x <= 8.0; x += 0.1) {
        double u = (x - 3.2) / 0.7;
        profile.emplace_back(x, 2.5 * std::exp(-0.5 * u * u) + 0.3);
    }
    GaussianFit fit = fit_gaussian_1d(profile);
    CHECK(fit.amplitude == doctest::Approx(2.5).epsilon(1e-8));
    CHECK(fit.center == doctest::Approx(3.2).epsilon(1e-8));
    CHECK(fit.sigma == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(fit.offset == doctest::Approx(0.3).epsilon(1e-7));
}

TEST_CASE("gaussian fit sigma within 2 percent under 1 percent noise") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, double>> profile;
        for (double x = -4.0; x <= 4.0; x += 0.1)
            profile.emplace_back(x, std::exp(-0.5 * x * x) + noise(rng));
        GaussianFit fit = fit_gaussian_1d(profile);
        CHECK(fit.sigma == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("gaussian fit degenerate and undersized inputs") {
    std::vector<std::pair<double, double>> flat;
    for (double x = 0.0; x < 10.0; x += 1.0) flat.emplace_back(x, 0.0);
    CHECK_THROWS_AS(fit_gaussian_1d(flat), DegenerateError);

    std::vector<std::pair<double, double>> few{{0, 1}, {1, 2}, {2, 1}, {3, 0.5}};
    CHECK_THROWS_AS(fit_gaussian_1d(few), InsufficientDataError);
}
