#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "splinegabor/piecewise_polynomial.hpp"
#include "splinegabor/special_functions.hpp"

namespace splinegabor {

// Total field on a sound-hard circular cylinder of the given radius hit by a
// plane wave:
//   f(phi) = 2/(pi k r) * sum_n eps_n (-i)^{n-1} cos(n phi) / H'_n(k r),
// eps_0 = 1, eps_n = 2. The series is truncated after max_terms summands or
// once the largest magnitude of the newest summand over a 720-point probe of
// the circle drops below tail_tolerance.
class CylinderScatteringField {
public:
    CylinderScatteringField(double wavenumber, double radius, int max_terms = -1,
                            double tail_tolerance = 1e-14)
        : wavenumber_(wavenumber), radius_(radius) {
        if (wavenumber <= 0.0 || radius <= 0.0)
            throw std::invalid_argument("cylinder field requires positive wavenumber and radius");
        const double kr = wavenumber * radius;
        const int n_max = max_terms > 0 ? max_terms : static_cast<int>(std::ceil(kr)) + 40;
        const auto bessel = bessel_jy_upto(n_max + 1, kr);
        const double prefactor = 2.0 / (detail::pi * kr);

        const auto h = [&](int n) {
            return std::complex<double>(bessel[static_cast<std::size_t>(n)].j,
                                        bessel[static_cast<std::size_t>(n)].y);
        };
        // cycle[j] = (-i)^j, so (-i)^{n-1} = cycle[(n-1) mod 4]
        static const std::complex<double> cycle[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};

        coefficients_.reserve(static_cast<std::size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n) {
            const std::complex<double> h_deriv =
                n == 0 ? -h(1) : h(n - 1) - (static_cast<double>(n) / kr) * h(n);
            const double eps = n == 0 ? 1.0 : 2.0;
            const std::complex<double> coef = prefactor * eps * cycle[((n - 1) % 4 + 4) % 4] / h_deriv;

            double probe_max = 0.0;
            for (int i = 0; i < 720; ++i) {
                const double mag = std::abs(coef * std::cos(n * two_pi * i / 720.0));
                if (mag > probe_max) probe_max = mag;
            }
            if (n > 0 && probe_max < tail_tolerance) break;
            coefficients_.push_back(coef);
        }
    }

    double wavenumber() const { return wavenumber_; }
    double radius() const { return radius_; }
    int term_count() const { return static_cast<int>(coefficients_.size()); }

    std::complex<double> eval(double phi) const {
        std::complex<double> sum(0.0, 0.0);
        for (std::size_t n = 0; n < coefficients_.size(); ++n)
            sum += coefficients_[n] * std::cos(static_cast<double>(n) * phi);
        return sum;
    }

private:
    double wavenumber_;
    double radius_;
    std::vector<std::complex<double>> coefficients_;
};

// Field of a 2D point source observed on a circle: H_0(k ||x - x*||) with x
// running over the circle of the given radius and center.
class PointSourceField {
public:
    PointSourceField(double wavenumber, double source_x, double source_y,
                     double circle_radius = 1.0, double center_x = 0.0, double center_y = 0.0)
        : k_(wavenumber), sx_(source_x), sy_(source_y), radius_(circle_radius), cx_(center_x),
          cy_(center_y) {
        if (wavenumber <= 0.0 || circle_radius <= 0.0)
            throw std::invalid_argument("point-source field requires positive wavenumber and radius");
    }

    double wavenumber() const { return k_; }

    double distance(double phi) const {
        const double px = cx_ + radius_ * std::cos(phi) - sx_;
        const double py = cy_ + radius_ * std::sin(phi) - sy_;
        return std::hypot(px, py);
    }

    std::complex<double> eval(double phi) const {
        const double d = distance(phi);
        if (d <= 1e-12 * std::max(radius_, 1.0))
            throw std::domain_error("point-source field evaluated at the source");
        return hankel1(0, k_ * d);
    }

private:
    double k_;
    double sx_, sy_;
    double radius_;
    double cx_, cy_;
};

// A 2 pi periodic angular field rescaled onto a parameter interval [0, L].
// The map is affine, t -> 2 pi t / L, so periodicity and smoothness carry
// over exactly and the field extends analytically beyond [0, L].
class TargetField {
public:
    TargetField(CylinderScatteringField field, double period)
        : period_(period), max_frequency_hint_(field.term_count() / period),
          angular_([f = std::move(field)](double phi) { return f.eval(phi); }) {
        check();
    }

    TargetField(PointSourceField field, double period)
        : period_(period), max_frequency_hint_(1.5 * field.wavenumber() / period + 2.0 / period),
          angular_([f = std::move(field)](double phi) { return f.eval(phi); }) {
        check();
    }

    TargetField(std::function<std::complex<double>(double)> angular, double period,
                double max_frequency_hint)
        : period_(period), max_frequency_hint_(max_frequency_hint), angular_(std::move(angular)) {
        check();
    }

    double period() const { return period_; }

    // Upper estimate of the oscillation rate in cycles per parameter unit;
    // used to size quadrature rules.
    double max_frequency_hint() const { return max_frequency_hint_; }

    std::complex<double> eval(double t) const { return angular_(two_pi * t / period_); }

private:
    void check() const {
        if (period_ <= 0.0) throw std::invalid_argument("target field period must be positive");
    }

    double period_;
    double max_frequency_hint_;
    std::function<std::complex<double>(double)> angular_;
};

}  // namespace splinegabor
