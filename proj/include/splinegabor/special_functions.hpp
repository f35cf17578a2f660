#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace splinegabor {

struct BesselJY {
    double j;
    double y;
};

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240;
inline constexpr double pi = 3.14159265358979323846264338327950;

// Power series, usable up to z ~ 13 before cancellation costs digits.
inline double j0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

inline double j1_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return 0.5 * z * sum;
}

inline double y0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, hk = 0.0, sum = 0.0;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        sum += -term * hk;  // (-1)^{k+1} H_k q^k / (k!)^2
        if (std::abs(term) < 1e-18) break;
    }
    return (2.0 / pi) * ((std::log(0.5 * z) + euler_gamma) * j0_series(z) + sum);
}

inline double y1_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, hk = 0.0, hk1 = 1.0, sum = 1.0;  // k = 0 term: (H_0 + H_1) = 1
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1.0));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1.0);
        sum += term * (hk + hk1);
        if (std::abs(term) < 1e-18) break;
    }
    return (2.0 / pi) * (std::log(0.5 * z) + euler_gamma) * j1_series(z) - 2.0 / (pi * z) -
           (z / (2.0 * pi)) * sum;
}

// Hankel asymptotic expansion for orders 0 and 1, z above ~13. Terms are
// added until they stop decreasing (optimal truncation).
inline BesselJY bessel01_asymptotic(int n, double z) {
    const double mu = 4.0 * n * n;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double prev = 1e300;
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (static_cast<double>(k) * 8.0 * z);
        if (std::abs(term) >= prev) break;
        prev = std::abs(term);
        const int r = k % 4;
        if (r == 1) q += term;
        else if (r == 2) p -= term;
        else if (r == 3) q -= term;
        else p += term;
        if (std::abs(term) < 1e-18) break;
    }
    const double chi = z - (0.5 * n + 0.25) * pi;
    const double amp = std::sqrt(2.0 / (pi * z));
    const double c = std::cos(chi), s = std::sin(chi);
    return {amp * (p * c - q * s), amp * (p * s + q * c)};
}

inline BesselJY bessel01(int n, double z) {
    if (z > 13.0) return bessel01_asymptotic(n, z);
    if (n == 0) return {j0_series(z), y0_series(z)};
    return {j1_series(z), y1_series(z)};
}

// J_0..J_n by backward (Miller) recurrence, normalized with
// J_0 + 2 J_2 + 2 J_4 + ... = 1.
inline std::vector<double> bessel_j_backward(int n_max, double z) {
    const int start = n_max + std::max(15, static_cast<int>(std::ceil(1.2 * z)));
    std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
    j[static_cast<std::size_t>(start) + 1] = 0.0;
    j[static_cast<std::size_t>(start)] = 1e-30;
    for (int k = start; k >= 1; --k) {
        j[static_cast<std::size_t>(k) - 1] =
            (2.0 * k / z) * j[static_cast<std::size_t>(k)] - j[static_cast<std::size_t>(k) + 1];
        if (std::abs(j[static_cast<std::size_t>(k) - 1]) > 1e250) {
            for (std::size_t i = static_cast<std::size_t>(k) - 1; i < j.size(); ++i) j[i] *= 1e-250;
        }
    }
    double norm = j[0];
    for (std::size_t k = 2; k < j.size(); k += 2) norm += 2.0 * j[k];
    j.resize(static_cast<std::size_t>(n_max) + 1);
    for (auto& v : j) v /= norm;
    return j;
}

}  // namespace detail

// (J_n, Y_n) for n = 0..order_max at a fixed argument. J by backward
// recurrence, Y forward from the order-0/1 values.
inline std::vector<BesselJY> bessel_jy_upto(int order_max, double z) {
    if (z <= 0.0) throw std::domain_error("bessel_jy requires z > 0");
    if (order_max < 0) throw std::invalid_argument("bessel_jy requires a nonnegative order");

    const auto b0 = detail::bessel01(0, z);
    std::vector<BesselJY> out(static_cast<std::size_t>(order_max) + 1);
    out[0] = b0;
    if (order_max == 0) return out;
    const auto b1 = detail::bessel01(1, z);
    out[1] = b1;

    if (order_max >= 2) {
        const auto j = detail::bessel_j_backward(order_max, z);
        for (int n = 0; n <= order_max; ++n) out[static_cast<std::size_t>(n)].j = j[static_cast<std::size_t>(n)];
        // low orders straight from the series/asymptotic path
        out[0].j = b0.j;
        out[1].j = b1.j;
        for (int n = 1; n < order_max; ++n)
            out[static_cast<std::size_t>(n) + 1].y =
                (2.0 * n / z) * out[static_cast<std::size_t>(n)].y - out[static_cast<std::size_t>(n) - 1].y;
    }
    return out;
}

inline BesselJY bessel_jy(int order, double z) { return bessel_jy_upto(order, z).back(); }

inline std::complex<double> hankel1(int order, double z) {
    const auto b = bessel_jy(order, z);
    return {b.j, b.y};
}

// H'_n(z) = H_{n-1}(z) - (n / z) H_n(z); H'_0 = -H_1 via H_{-1} = -H_1.
inline std::complex<double> hankel1_derivative(int order, double z) {
    if (order == 0) {
        const auto b = bessel_jy_upto(1, z);
        return {-b[1].j, -b[1].y};
    }
    const auto b = bessel_jy_upto(order, z);
    const std::complex<double> h_nm1(b[static_cast<std::size_t>(order) - 1].j,
                                     b[static_cast<std::size_t>(order) - 1].y);
    const std::complex<double> h_n(b[static_cast<std::size_t>(order)].j,
                                   b[static_cast<std::size_t>(order)].y);
    return h_nm1 - (static_cast<double>(order) / z) * h_n;
}

}  // namespace splinegabor
