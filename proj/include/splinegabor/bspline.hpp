#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "splinegabor/piecewise_polynomial.hpp"

namespace splinegabor {

// Cardinal B-spline of a given order, supported on [0, order], stored as an
// exact piecewise polynomial on the unit knot intervals [j, j+1).
class BSplineWindow {
public:
    explicit BSplineWindow(int order) : order_(order) {
        if (order < 1) throw std::invalid_argument("B-spline order must be at least 1");

        // Order 1 is the indicator of [0, 1); each further order convolves
        // with it, i.e. N_{l+1}(x) = F(x) - F(x - 1) with F the
        // antiderivative of N_l. Done symbolically on the pieces.
        std::vector<std::vector<double>> pieces{{1.0}};
        for (int ord = 1; ord < order; ++ord) {
            std::vector<std::vector<double>> anti;
            std::vector<double> piece_integrals;
            anti.reserve(pieces.size());
            for (const auto& p : pieces) {
                anti.push_back(poly::antiderivative(p));
                piece_integrals.push_back(poly::eval(anti.back(), 1.0));
            }
            std::vector<std::vector<double>> next(pieces.size() + 1);
            for (std::size_t j = 0; j < next.size(); ++j) {
                std::vector<double> q(static_cast<std::size_t>(ord) + 1, 0.0);
                if (j < anti.size())
                    for (std::size_t i = 0; i < anti[j].size(); ++i) q[i] += anti[j][i];
                if (j >= 1) {
                    q[0] += piece_integrals[j - 1];
                    for (std::size_t i = 0; i < anti[j - 1].size(); ++i) q[i] -= anti[j - 1][i];
                }
                next[j] = std::move(q);
            }
            pieces = std::move(next);
        }

        std::vector<double> knots(static_cast<std::size_t>(order) + 1);
        for (int j = 0; j <= order; ++j) knots[static_cast<std::size_t>(j)] = static_cast<double>(j);
        rep_ = PiecewisePolynomial(std::move(knots), std::move(pieces));
    }

    int order() const { return order_; }
    double eval(double x) const { return rep_.eval(x); }
    double eval_derivative(double x) const { return rep_.eval_derivative(x); }
    double integral() const { return rep_.integral(); }
    const PiecewisePolynomial& as_piecewise() const { return rep_; }

private:
    int order_ = 0;
    PiecewisePolynomial rep_;
};

inline BSplineWindow make_bspline(int order) { return BSplineWindow(order); }

// int N(x - shift1) N(x - shift2) e^{2 pi i freq x} dx, evaluated analytically.
inline Complex product_integral(const BSplineWindow& w, double shift1, double shift2, double freq) {
    return product_modulated_integral(w.as_piecewise(), shift1, w.as_piecewise(), shift2, freq);
}

inline Complex product_integral(const PiecewisePolynomial& w, double shift1, double shift2,
                                double freq) {
    return product_modulated_integral(w, shift1, w, shift2, freq);
}

}  // namespace splinegabor
