#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splinegabor/bspline.hpp"

namespace splinegabor {

struct AtomIndex {
    int m = 0;  // modulation index
    int n = 0;  // shift index
    friend bool operator==(const AtomIndex&, const AtomIndex&) = default;
};

struct FrameBounds {
    double lower = 0.0;  // A
    double upper = 0.0;  // B
};

enum class DualKind { Dual1, Dual2, Canonical };

// Finite combination sum_k weight_k N(x + k) of integer shifts of a B-spline;
// the shifts keep all knots on the integers, so pieces accumulate exactly.
inline PiecewisePolynomial combine_integer_shifts(const BSplineWindow& window,
                                                  const std::vector<std::pair<int, double>>& terms) {
    if (terms.empty()) throw std::invalid_argument("combine_integer_shifts: no terms");
    const int order = window.order();
    int lo = terms.front().first, hi = terms.front().first;
    for (const auto& [k, w] : terms) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    // N(x + k) lives on [-k, order - k]; the union is [-hi, order - lo].
    const int support_lo = -hi;
    const int support_hi = order - lo;
    std::vector<double> breakpoints;
    for (int j = support_lo; j <= support_hi; ++j) breakpoints.push_back(static_cast<double>(j));
    std::vector<std::vector<double>> pieces(static_cast<std::size_t>(support_hi - support_lo),
                                            std::vector<double>(static_cast<std::size_t>(order), 0.0));
    for (const auto& [k, w] : terms) {
        for (int j = 0; j < order; ++j) {
            const int target = j - k - support_lo;  // piece [j - k, j - k + 1)
            const auto& src = window.as_piecewise().piece(static_cast<std::size_t>(j));
            auto& dst = pieces[static_cast<std::size_t>(target)];
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] += w * src[i];
        }
    }
    return {std::move(breakpoints), std::move(pieces)};
}

class DualWindow {
public:
    DualWindow(DualKind kind, PiecewisePolynomial window)
        : kind_(kind), window_(std::move(window)) {}

    DualKind kind() const { return kind_; }
    double eval(double x) const { return window_.eval(x); }
    double support_lo() const { return window_.support_lo(); }
    double support_hi() const { return window_.support_hi(); }
    double integral() const { return window_.integral(); }
    const PiecewisePolynomial& as_piecewise() const { return window_; }

private:
    DualKind kind_;
    PiecewisePolynomial window_;
};

// Frame admissibility region for B-spline windows of a given order:
// (a, b) in (0, order] x (0, 1/order].
inline bool check_frame_parameters(int order, double a, double b) {
    if (order < 1) throw std::invalid_argument("window order must be at least 1");
    return a > 0.0 && a <= static_cast<double>(order) && b > 0.0 &&
           b <= 1.0 / static_cast<double>(order);
}

inline void require_dual_parameter(int order, double b) {
    const double limit = 1.0 / (2.0 * order - 1.0);
    if (!(b > 0.0 && b <= limit))
        throw std::invalid_argument("explicit dual windows require b in (0, " + std::to_string(limit) +
                                    "] for order " + std::to_string(order) + "; got b = " +
                                    std::to_string(b));
}

// First explicit dual: h = b N(x) + 2b sum_{k=1}^{order-1} N(x + k).
// The upper limit order-1 (rather than order) is what keeps the pair dual on
// the whole admissible range b <= 1/(2 order - 1): with an extra N(x + order)
// term the shifted-window products no longer telescope to a constant once
// 1/b < 2 order. Support is [-(order-1), order].
inline DualWindow make_dual1_window(int order, double b) {
    if (order < 1) throw std::invalid_argument("window order must be at least 1");
    require_dual_parameter(order, b);
    const BSplineWindow window(order);
    std::vector<std::pair<int, double>> terms{{0, b}};
    for (int k = 1; k <= order - 1; ++k) terms.emplace_back(k, 2.0 * b);
    return {DualKind::Dual1, combine_integer_shifts(window, terms)};
}

// Second explicit dual: h = b sum_{k=-(order-1)}^{order-1} N(x + k),
// supported on [-(order-1), 2 order - 1].
inline DualWindow make_dual2_window(int order, double b) {
    if (order < 1) throw std::invalid_argument("window order must be at least 1");
    require_dual_parameter(order, b);
    const BSplineWindow window(order);
    std::vector<std::pair<int, double>> terms;
    for (int k = -(order - 1); k <= order - 1; ++k) terms.emplace_back(k, b);
    return {DualKind::Dual2, combine_integer_shifts(window, terms)};
}

// Gabor system: atoms g_{mn}(x) = w(x - n a) e^{2 pi i m b x} for n in
// [n_min, n_max] and m in [m_min, m_max]. Modulations are commonly the
// symmetric range [-M, M]; an asymmetric range covering one full period of
// the sampled modulations is needed for exact discrete duality when
// 1/(b dx) is even.
class GaborSystem {
public:
    GaborSystem(PiecewisePolynomial window, double a, double b, int n_min, int n_max, int m_min,
                int m_max)
        : window_(std::move(window)), a_(a), b_(b), n_min_(n_min), n_max_(n_max), m_min_(m_min),
          m_max_(m_max) {
        if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("lattice steps must be positive");
        if (n_max < n_min) throw std::invalid_argument("empty shift range");
        if (m_max < m_min) throw std::invalid_argument("empty modulation range");
    }

    static GaborSystem with_symmetric_modulations(PiecewisePolynomial window, double a, double b,
                                                  int n_min, int n_max, int modulation_limit) {
        return {std::move(window), a, b, n_min, n_max, -modulation_limit, modulation_limit};
    }

    // Shifts n with (n a, n a + support) meeting the interior of (0, length).
    static std::pair<int, int> shifts_covering(const PiecewisePolynomial& window, double a,
                                               double length) {
        const int n_min = static_cast<int>(std::floor(-window.support_hi() / a + 1e-9)) + 1;
        const int n_max = static_cast<int>(std::ceil((length - window.support_lo()) / a - 1e-9)) - 1;
        return {n_min, n_max};
    }

    // One full period of sampled modulations when 1/(b dx) is close to an
    // integer K: [-K/2, K/2 - 1] for even K, symmetric for odd K.
    static std::pair<int, int> full_period_modulations(double b, double dx) {
        const double period = 1.0 / (b * dx);
        const long k = std::lround(period);
        if (k < 1 || std::abs(period - static_cast<double>(k)) > 1e-6 * period)
            throw std::invalid_argument("modulation period 1/(b dx) is not an integer");
        if (k % 2 == 0) return {static_cast<int>(-k / 2), static_cast<int>(k / 2 - 1)};
        return {static_cast<int>(-(k - 1) / 2), static_cast<int>((k - 1) / 2)};
    }

    const PiecewisePolynomial& window() const { return window_; }
    double a() const { return a_; }
    double b() const { return b_; }
    int n_min() const { return n_min_; }
    int n_max() const { return n_max_; }
    int m_min() const { return m_min_; }
    int m_max() const { return m_max_; }
    int shift_count() const { return n_max_ - n_min_ + 1; }
    int modulation_count() const { return m_max_ - m_min_ + 1; }
    int atom_count() const { return shift_count() * modulation_count(); }

    GaborSystem with_window(PiecewisePolynomial window) const {
        return {std::move(window), a_, b_, n_min_, n_max_, m_min_, m_max_};
    }

    std::vector<AtomIndex> atom_indices() const {
        std::vector<AtomIndex> out;
        out.reserve(static_cast<std::size_t>(atom_count()));
        for (int n = n_min_; n <= n_max_; ++n)
            for (int m = m_min_; m <= m_max_; ++m) out.push_back({m, n});
        return out;
    }

    Complex atom(AtomIndex idx, double x) const {
        const double w = window_.eval(x - idx.n * a_);
        if (w == 0.0) return {0.0, 0.0};
        return w * std::polar(1.0, two_pi * std::remainder(idx.m * b_ * x, 1.0));
    }

private:
    PiecewisePolynomial window_;
    double a_;
    double b_;
    int n_min_, n_max_;
    int m_min_, m_max_;
};

// Frame atoms evaluated column by column on a sample grid.
class SampledFrame {
public:
    SampledFrame(Eigen::VectorXd grid, Eigen::MatrixXcd atoms, std::vector<AtomIndex> index)
        : grid_(std::move(grid)), atoms_(std::move(atoms)), index_(std::move(index)) {
        if (atoms_.rows() != grid_.size() || atoms_.cols() != static_cast<Eigen::Index>(index_.size()))
            throw std::invalid_argument("sampled frame: inconsistent dimensions");
        dx_ = grid_.size() > 1 ? (grid_[grid_.size() - 1] - grid_[0]) / static_cast<double>(grid_.size() - 1)
                               : 1.0;
    }

    const Eigen::VectorXd& grid() const { return grid_; }
    double dx() const { return dx_; }
    const Eigen::MatrixXcd& atoms() const { return atoms_; }
    const std::vector<AtomIndex>& index_map() const { return index_; }
    Eigen::Index rows() const { return atoms_.rows(); }
    Eigen::Index cols() const { return atoms_.cols(); }

    Eigen::Index column_of(AtomIndex idx) const {
        for (std::size_t q = 0; q < index_.size(); ++q)
            if (index_[q] == idx) return static_cast<Eigen::Index>(q);
        throw std::invalid_argument("atom index not present in frame");
    }

private:
    Eigen::VectorXd grid_;
    double dx_ = 1.0;
    Eigen::MatrixXcd atoms_;
    std::vector<AtomIndex> index_;
};

inline SampledFrame sample_frame(const GaborSystem& system, const Eigen::VectorXd& grid) {
    if (grid.size() < 2) throw std::invalid_argument("sample grid needs at least two points");
    const Eigen::Index p = grid.size();
    const double dx = (grid[p - 1] - grid[0]) / static_cast<double>(p - 1);
    for (Eigen::Index j = 0; j + 1 < p; ++j)
        if (std::abs(grid[j + 1] - grid[j] - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
            throw std::invalid_argument("sample grid must be equispaced");

    const int shift_count = system.shift_count();
    const int mod_count = system.modulation_count();
    Eigen::MatrixXd window_rows(p, shift_count);
    for (int s = 0; s < shift_count; ++s) {
        const double offset = (system.n_min() + s) * system.a();
        for (Eigen::Index j = 0; j < p; ++j) window_rows(j, s) = system.window().eval(grid[j] - offset);
    }

    Eigen::MatrixXcd atoms(p, static_cast<Eigen::Index>(system.atom_count()));
    Eigen::VectorXcd phase(p);
    for (int mi = 0; mi < mod_count; ++mi) {
        const int m = system.m_min() + mi;
        for (Eigen::Index j = 0; j < p; ++j)
            phase[j] = std::polar(1.0, two_pi * std::remainder(m * system.b() * grid[j], 1.0));
        for (int s = 0; s < shift_count; ++s) {
            const Eigen::Index col = static_cast<Eigen::Index>(s) * mod_count + mi;
            atoms.col(col) = window_rows.col(s).cast<Complex>().cwiseProduct(phase);
        }
    }
    return {grid, std::move(atoms), system.atom_indices()};
}

namespace detail {

inline constexpr double pinv_cutoff = 1e-12;  // relative to sigma_max

// Moore-Penrose pseudoinverse by singular value decomposition, dropping
// singular values below 1e-12 * sigma_max. The sampled frames are genuinely
// ill conditioned (redundant lattices have exponentially decaying singular
// values), so a backward-stable SVD is required here; Gram-matrix shortcuts
// lose half the digits. Exactly zero rows (grid points no atom reaches) are
// split off first to keep the decomposition small.
inline Eigen::MatrixXcd pseudoinverse(const Eigen::MatrixXcd& a) {
    std::vector<Eigen::Index> live;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (a.row(i).squaredNorm() > 0.0) live.push_back(i);

    Eigen::MatrixXcd pinv = Eigen::MatrixXcd::Zero(a.cols(), a.rows());
    if (live.empty()) return pinv;

    Eigen::MatrixXcd as(static_cast<Eigen::Index>(live.size()), a.cols());
    for (std::size_t i = 0; i < live.size(); ++i) as.row(static_cast<Eigen::Index>(i)) = a.row(live[i]);

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(as, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0 ? sigma[0] * pinv_cutoff : 0.0;
    Eigen::VectorXd inverted = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] > cutoff) inverted[i] = 1.0 / sigma[i];
    const Eigen::MatrixXcd pinv_s =
        svd.matrixV() * inverted.asDiagonal() * svd.matrixU().adjoint();

    for (std::size_t i = 0; i < live.size(); ++i) pinv.col(live[i]) = pinv_s.col(static_cast<Eigen::Index>(i));
    return pinv;
}

}  // namespace detail

// Sampled canonical dual atoms: rows of the pseudoinverse of the frame
// matrix, conjugated back into column form and scaled by 1/dx so that
// dx-weighted inner products against them produce the analysis coefficients.
inline SampledFrame canonical_dual(const SampledFrame& frame) {
    const Eigen::MatrixXcd pinv = detail::pseudoinverse(frame.atoms());
    Eigen::MatrixXcd dual = pinv.adjoint() / frame.dx();
    return {frame.grid(), std::move(dual), frame.index_map()};
}

// Discrete frame-bound estimate: extreme squared singular values of the
// dx-weighted analysis matrix, computed from the smaller-side Gram.
inline FrameBounds estimate_frame_bounds(const SampledFrame& frame) {
    if (frame.rows() == 0 || frame.cols() == 0)
        throw std::invalid_argument("estimate_frame_bounds: empty frame");
    const Eigen::MatrixXcd& g = frame.atoms();
    const Eigen::MatrixXcd gram = g.rows() <= g.cols() ? (g * g.adjoint()).eval()
                                                       : (g.adjoint() * g).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const double scale = frame.dx();
    return {scale * std::max(0.0, eig.eigenvalues().minCoeff()),
            scale * std::max(0.0, eig.eigenvalues().maxCoeff())};
}

}  // namespace splinegabor
