#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace splinegabor {

using Complex = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

namespace poly {

// Coefficients are stored low to high degree in a local variable u.

inline double eval(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * u + c[i];
    return v;
}

inline double eval_derivative(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) v = v * u + c[i] * static_cast<double>(i);
    return v;
}

// Antiderivative with constant term 0.
inline std::vector<double> antiderivative(const std::vector<double>& c) {
    std::vector<double> out(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) out[i + 1] = c[i] / static_cast<double>(i + 1);
    return out;
}

// q(u) = p(u + s), expanded in u.
inline std::vector<double> shift(const std::vector<double>& c, double s) {
    std::vector<double> out(c.size(), 0.0);
    for (std::size_t i = c.size(); i-- > 0;) {
        for (std::size_t k = out.size(); k-- > 1;) out[k] = out[k] * s + out[k - 1];
        out[0] = out[0] * s + c[i];
    }
    return out;
}

inline std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Moments E_n = int_0^h u^n e^{i w u} du for n = 0..n_max.
// Integration by parts divides by w, so for small |w h| a short series in
// (i w) is used instead.
inline std::vector<Complex> oscillatory_moments(int n_max, double h, double w) {
    std::vector<Complex> moments(static_cast<std::size_t>(n_max) + 1);
    if (std::abs(w * h) < 1e-3) {
        for (int n = 0; n <= n_max; ++n) {
            Complex sum(0.0, 0.0);
            Complex term(std::pow(h, n + 1) / (n + 1), 0.0);
            const Complex iw(0.0, w);
            for (int k = 0; k < 40; ++k) {
                sum += term;
                term *= iw * h * (static_cast<double>(n + k + 1) /
                                  (static_cast<double>(k + 1) * static_cast<double>(n + k + 2)));
                if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
            }
            moments[static_cast<std::size_t>(n)] = sum;
        }
        return moments;
    }
    const Complex iw(0.0, w);
    const Complex eiwh = std::polar(1.0, w * h);
    moments[0] = (eiwh - 1.0) / iw;
    double hn = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        hn *= h;
        moments[static_cast<std::size_t>(n)] =
            (hn * eiwh - static_cast<double>(n) * moments[static_cast<std::size_t>(n - 1)]) / iw;
    }
    return moments;
}

// int_0^h p(u) e^{i w u} du
inline Complex oscillatory_integral(const std::vector<double>& c, double h, double w) {
    const auto moments = oscillatory_moments(static_cast<int>(c.size()) - 1, h, w);
    Complex sum(0.0, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) sum += c[i] * moments[i];
    return sum;
}

}  // namespace poly

// Piecewise polynomial on consecutive intervals [b_i, b_{i+1}); zero outside
// [front, back). Piece i is expressed in the local variable u = x - b_i.
class PiecewisePolynomial {
public:
    PiecewisePolynomial() = default;

    PiecewisePolynomial(std::vector<double> breakpoints, std::vector<std::vector<double>> pieces)
        : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
        if (breakpoints_.size() != pieces_.size() + 1)
            throw std::invalid_argument("piecewise polynomial: breakpoint/piece count mismatch");
        for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
            if (!(breakpoints_[i] < breakpoints_[i + 1]))
                throw std::invalid_argument("piecewise polynomial: breakpoints must increase");
    }

    bool empty() const { return pieces_.empty(); }
    double support_lo() const { return breakpoints_.front(); }
    double support_hi() const { return breakpoints_.back(); }
    std::size_t piece_count() const { return pieces_.size(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& piece(std::size_t i) const { return pieces_[i]; }

    double eval(double x) const {
        const int i = locate(x);
        if (i < 0) return 0.0;
        return poly::eval(pieces_[static_cast<std::size_t>(i)], x - breakpoints_[static_cast<std::size_t>(i)]);
    }

    double eval_derivative(double x) const {
        const int i = locate(x);
        if (i < 0) return 0.0;
        return poly::eval_derivative(pieces_[static_cast<std::size_t>(i)],
                                     x - breakpoints_[static_cast<std::size_t>(i)]);
    }

    // Analytic integral over the whole support.
    double integral() const {
        double sum = 0.0;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const auto anti = poly::antiderivative(pieces_[i]);
            sum += poly::eval(anti, breakpoints_[i + 1] - breakpoints_[i]);
        }
        return sum;
    }

    // int p(x) e^{2 pi i f x} dx, exact per piece.
    Complex modulated_integral(double freq) const {
        const double w = two_pi * freq;
        Complex sum(0.0, 0.0);
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const double t0 = breakpoints_[i];
            const double h = breakpoints_[i + 1] - t0;
            sum += std::polar(1.0, w * t0) * poly::oscillatory_integral(pieces_[i], h, w);
        }
        return sum;
    }

    PiecewisePolynomial scaled(double factor) const {
        auto pieces = pieces_;
        for (auto& p : pieces)
            for (auto& c : p) c *= factor;
        return {breakpoints_, std::move(pieces)};
    }

private:
    int locate(double x) const {
        if (pieces_.empty() || x < breakpoints_.front() || x >= breakpoints_.back()) return -1;
        const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        return static_cast<int>(it - breakpoints_.begin()) - 1;
    }

    std::vector<double> breakpoints_;
    std::vector<std::vector<double>> pieces_;
};

// int p(x - shift1) q(x - shift2) e^{2 pi i freq x} dx for two piecewise
// polynomials. The product is itself piecewise polynomial on the merged
// breakpoints of the overlap.
inline Complex product_modulated_integral(const PiecewisePolynomial& p, double shift1,
                                          const PiecewisePolynomial& q, double shift2, double freq) {
    if (p.empty() || q.empty()) return {0.0, 0.0};
    const double lo = std::max(p.support_lo() + shift1, q.support_lo() + shift2);
    const double hi = std::min(p.support_hi() + shift1, q.support_hi() + shift2);
    if (!(lo < hi)) return {0.0, 0.0};

    std::vector<double> cuts;
    for (double b : p.breakpoints()) {
        const double x = b + shift1;
        if (x > lo && x < hi) cuts.push_back(x);
    }
    for (double b : q.breakpoints()) {
        const double x = b + shift2;
        if (x > lo && x < hi) cuts.push_back(x);
    }
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               cuts.end());

    const double w = two_pi * freq;
    Complex sum(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double t0 = cuts[i];
        const double h = cuts[i + 1] - t0;
        const double mid = t0 + 0.5 * h;

        const auto piece_at = [](const PiecewisePolynomial& f, double shift, double x_mid,
                                 double x_left) -> std::vector<double> {
            const auto& bp = f.breakpoints();
            const double local = x_mid - shift;
            auto it = std::upper_bound(bp.begin(), bp.end(), local);
            const std::size_t idx = static_cast<std::size_t>(
                std::clamp<std::ptrdiff_t>(it - bp.begin() - 1, 0,
                                           static_cast<std::ptrdiff_t>(f.piece_count()) - 1));
            // re-express in u = x - x_left
            return poly::shift(f.piece(idx), x_left - shift - bp[idx]);
        };

        const auto a = piece_at(p, shift1, mid, t0);
        const auto b = piece_at(q, shift2, mid, t0);
        sum += std::polar(1.0, w * t0) * poly::oscillatory_integral(poly::multiply(a, b), h, w);
    }
    return sum;
}

}  // namespace splinegabor
