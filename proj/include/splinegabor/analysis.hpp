#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "splinegabor/gabor.hpp"
#include "splinegabor/sparse.hpp"

namespace splinegabor {

// Interest interval [0, L] with P samples, extended so that every shifted
// analysis-window support that meets [0, L] is fully covered. The extended
// grid keeps the spacing dx = L/(P-1) and contains the interest grid as an
// exact subset (all points are integer multiples of dx).
class IntervalSetup {
public:
    IntervalSetup(double length, int samples, int ext_lo_steps, int ext_hi_steps)
        : length_(length), samples_(samples), dx_(length / (samples - 1)),
          ext_lo_steps_(ext_lo_steps), ext_hi_steps_(ext_hi_steps) {
        if (samples < 2) throw std::invalid_argument("interval setup needs at least two samples");
        if (ext_lo_steps > 0 || ext_hi_steps < samples - 1)
            throw std::invalid_argument("extension must contain the interest interval");
    }

    double length() const { return length_; }
    int sample_count() const { return samples_; }
    double dx() const { return dx_; }
    double extended_lo() const { return ext_lo_steps_ * dx_; }
    double extended_hi() const { return ext_hi_steps_ * dx_; }
    Eigen::Index interest_offset() const { return -ext_lo_steps_; }
    Eigen::Index extended_count() const { return ext_hi_steps_ - ext_lo_steps_ + 1; }

    Eigen::VectorXd interest_grid() const {
        Eigen::VectorXd g(samples_);
        for (int j = 0; j < samples_; ++j) g[j] = j * dx_;
        return g;
    }

    Eigen::VectorXd extended_grid() const {
        Eigen::VectorXd g(extended_count());
        for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = (ext_lo_steps_ + i) * dx_;
        return g;
    }

private:
    double length_;
    int samples_;
    double dx_;
    int ext_lo_steps_;
    int ext_hi_steps_;
};

inline IntervalSetup build_setup(double length, int samples, const PiecewisePolynomial& analysis_window,
                                 const GaborSystem& system) {
    if (samples < 2) throw std::invalid_argument("build_setup needs at least two samples");
    const double dx = length / (samples - 1);
    const double lo_support = std::min(analysis_window.support_lo(), system.window().support_lo());
    const double hi_support = std::max(analysis_window.support_hi(), system.window().support_hi());
    const double lo = std::min(0.0, system.n_min() * system.a() + lo_support);
    const double hi = std::max(length, system.n_max() * system.a() + hi_support);
    int j_lo = static_cast<int>(std::floor(lo / dx + 1e-9));
    int j_hi = static_cast<int>(std::ceil(hi / dx - 1e-9));
    j_lo = std::min(j_lo, 0);
    j_hi = std::max(j_hi, samples - 1);
    return {length, samples, j_lo, j_hi};
}

inline IntervalSetup build_setup(double length, int samples, const DualWindow& dual,
                                 const GaborSystem& system) {
    return build_setup(length, samples, dual.as_piecewise(), system);
}

// Synthesis G c restricted to a row range (typically the interest grid).
inline Eigen::VectorXcd reconstruct(const SampledFrame& frame, const CoefficientVector& c,
                                    Eigen::Index row_offset, Eigen::Index row_count) {
    if (!(frame.index_map() == c.index))
        throw std::invalid_argument("reconstruct: coefficient and frame index maps differ");
    if (row_offset < 0 || row_offset + row_count > frame.rows())
        throw std::invalid_argument("reconstruct: row range outside the sampled grid");
    return (frame.atoms() * c.values).segment(row_offset, row_count);
}

inline Eigen::VectorXcd reconstruct(const SampledFrame& frame, const CoefficientVector& c) {
    return reconstruct(frame, c, 0, frame.rows());
}

struct ErrorReport {
    Eigen::VectorXd pointwise;
    double average = 0.0;
    double max = 0.0;
    int coefficient_count = 0;
    std::string method;
};

// Pointwise relative error with a floor of 1e-8 * max |ref| in the
// denominator so that zeros of the reference do not dominate the metric.
inline ErrorReport relative_error(const Eigen::VectorXcd& f_ref, const Eigen::VectorXcd& f_approx) {
    if (f_ref.size() != f_approx.size())
        throw std::invalid_argument("relative_error: length mismatch");
    ErrorReport report;
    report.pointwise.resize(f_ref.size());
    const double peak = f_ref.size() ? f_ref.cwiseAbs().maxCoeff() : 0.0;
    const double floor = peak > 0.0 ? 1e-8 * peak : 1.0;
    for (Eigen::Index j = 0; j < f_ref.size(); ++j) {
        const double denom = std::max(std::abs(f_ref[j]), floor);
        report.pointwise[j] = std::abs(f_ref[j] - f_approx[j]) / denom;
    }
    report.average = f_ref.size() ? report.pointwise.mean() : 0.0;
    report.max = f_ref.size() ? report.pointwise.maxCoeff() : 0.0;
    return report;
}

}  // namespace splinegabor
