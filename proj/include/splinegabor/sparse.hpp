#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "splinegabor/gabor.hpp"
#include "splinegabor/targets.hpp"

namespace splinegabor {

enum class Provenance { Dual1, Dual2, Canonical, LeastSquares, Omp };

struct CoefficientVector {
    Eigen::VectorXcd values;
    std::vector<AtomIndex> index;
    Provenance provenance = Provenance::LeastSquares;
    int blocksize = 0;  // meaningful for Provenance::Omp
};

// c_i = dx * sum_j f(x_j) conj(dual_i(x_j)) for every atom of the dual frame.
inline CoefficientVector analyze_with_dual(const Eigen::VectorXcd& f_samples,
                                           const SampledFrame& dual, Provenance provenance) {
    if (f_samples.size() != dual.rows())
        throw std::invalid_argument("analyze_with_dual: sample vector does not match the dual grid");
    CoefficientVector out;
    out.values = dual.dx() * (dual.atoms().adjoint() * f_samples);
    out.index = dual.index_map();
    out.provenance = provenance;
    return out;
}

// Minimum-norm least-squares coefficients through the thresholded SVD, the
// same pseudoinverse convention the canonical dual is built from.
inline CoefficientVector least_squares(const SampledFrame& frame, const Eigen::VectorXcd& f_samples) {
    if (f_samples.size() != frame.rows())
        throw std::invalid_argument("least_squares: sample vector does not match the frame grid");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(frame.atoms(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(detail::pinv_cutoff);
    CoefficientVector out;
    out.values = svd.solve(f_samples);
    out.index = frame.index_map();
    out.provenance = Provenance::LeastSquares;
    return out;
}

struct OmpState {
    std::vector<Eigen::Index> selected;
    Eigen::VectorXcd residual;  // grid residual (vector OMP) or residual inner products
    int iterations = 0;
    int blocksize = 1;
    std::vector<double> residual_norms;
};

struct OmpRun {
    CoefficientVector coefficients;
    OmpState state;
};

namespace detail {

// Largest-score candidates outside the selected set; ties broken toward the
// lower atom index.
inline std::vector<Eigen::Index> top_candidates(const Eigen::VectorXd& scores,
                                                const std::vector<bool>& used, int count) {
    std::vector<Eigen::Index> order;
    order.reserve(static_cast<std::size_t>(scores.size()));
    for (Eigen::Index i = 0; i < scores.size(); ++i)
        if (!used[static_cast<std::size_t>(i)]) order.push_back(i);
    const auto by_score = [&](Eigen::Index a, Eigen::Index b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    };
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(count), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      by_score);
    order.resize(keep);
    return order;
}

}  // namespace detail

// Block orthogonal matching pursuit on the sampled frame: each iteration
// appends the blocksize atoms with the largest |G^H r| and re-solves the
// dense least-squares problem on the selected columns from scratch.
inline OmpRun omp(const SampledFrame& frame, const Eigen::VectorXcd& f_samples, int blocksize,
                  int max_iterations, double tolerance) {
    if (f_samples.size() != frame.rows())
        throw std::invalid_argument("omp: sample vector does not match the frame grid");
    if (blocksize < 1) throw std::invalid_argument("omp: blocksize must be positive");
    if (max_iterations < 1) throw std::invalid_argument("omp: max_iterations must be positive");

    const Eigen::MatrixXcd& g = frame.atoms();
    const double f_norm = f_samples.norm();

    OmpRun run;
    run.state.blocksize = blocksize;
    run.state.residual = f_samples;
    std::vector<bool> used(static_cast<std::size_t>(g.cols()), false);
    Eigen::VectorXcd coeffs_on_selected;

    for (int it = 0; it < max_iterations; ++it) {
        if (static_cast<Eigen::Index>(run.state.selected.size()) == g.cols()) break;
        const Eigen::VectorXd scores = (g.adjoint() * run.state.residual).cwiseAbs();
        const auto picked = detail::top_candidates(scores, used, blocksize);
        if (picked.empty()) break;
        for (Eigen::Index q : picked) {
            used[static_cast<std::size_t>(q)] = true;
            run.state.selected.push_back(q);
        }

        Eigen::MatrixXcd sub(g.rows(), static_cast<Eigen::Index>(run.state.selected.size()));
        for (std::size_t i = 0; i < run.state.selected.size(); ++i)
            sub.col(static_cast<Eigen::Index>(i)) = g.col(run.state.selected[i]);
        coeffs_on_selected = sub.colPivHouseholderQr().solve(f_samples);
        run.state.residual = f_samples - sub * coeffs_on_selected;
        run.state.iterations = it + 1;
        run.state.residual_norms.push_back(run.state.residual.norm());
        if (run.state.residual.norm() <= tolerance * f_norm) break;
    }

    run.coefficients.values = Eigen::VectorXcd::Zero(g.cols());
    for (std::size_t i = 0; i < run.state.selected.size(); ++i)
        run.coefficients.values[run.state.selected[i]] = coeffs_on_selected[static_cast<Eigen::Index>(i)];
    run.coefficients.index = frame.index_map();
    run.coefficients.provenance = Provenance::Omp;
    run.coefficients.blocksize = blocksize;
    return run;
}

// Keeps the n largest-magnitude entries, zeroing the rest; ties broken
// toward the lower atom index. n larger than the vector clamps with a note.
inline CoefficientVector truncate_top_n(const CoefficientVector& c, int n) {
    if (n < 1) throw std::invalid_argument("truncate_top_n: n must be positive");
    if (n > c.values.size()) {
        std::cerr << "truncate_top_n: requested " << n << " of " << c.values.size()
                  << " coefficients, clamping\n";
        n = static_cast<int>(c.values.size());
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(c.values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + n, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          const double ma = std::abs(c.values[a]), mb = std::abs(c.values[b]);
                          if (ma != mb) return ma > mb;
                          return a < b;
                      });
    CoefficientVector out;
    out.values = Eigen::VectorXcd::Zero(c.values.size());
    for (int i = 0; i < n; ++i) out.values[order[static_cast<std::size_t>(i)]] = c.values[order[static_cast<std::size_t>(i)]];
    out.index = c.index;
    out.provenance = c.provenance;
    out.blocksize = c.blocksize;
    return out;
}

namespace detail {

inline constexpr double gl16_nodes[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr double gl16_weights[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1491729864726037467878287, 0.1228228928076828743347476, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

struct QuadratureNodes {
    std::vector<double> x;
    std::vector<double> w;
};

inline QuadratureNodes composite_gauss(double lo, double hi, int panels) {
    QuadratureNodes q;
    q.x.reserve(static_cast<std::size_t>(panels) * 16);
    q.w.reserve(static_cast<std::size_t>(panels) * 16);
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        for (int i = 0; i < 8; ++i) {
            q.x.push_back(mid - 0.5 * h * gl16_nodes[i]);
            q.w.push_back(0.5 * h * gl16_weights[i]);
            q.x.push_back(mid + 0.5 * h * gl16_nodes[i]);
            q.w.push_back(0.5 * h * gl16_weights[i]);
        }
    }
    return q;
}

// Atom inner products reduce to a modulated window product integral:
// <g_i, g_j> = int w(x - n_i a) w(x - n_j a) e^{2 pi i (m_i - m_j) b x} dx.
class GramCache {
public:
    explicit GramCache(const GaborSystem& system) : system_(&system) {}

    Complex operator()(AtomIndex gi, AtomIndex gj) {
        const long key = static_cast<long>(gi.n - gj.n) * 1000000L + (gi.m - gj.m);
        const auto it = cache_.find(key);
        Complex base;
        if (it != cache_.end()) {
            base = it->second;
        } else {
            base = product_integral(system_->window(), (gi.n - gj.n) * system_->a(), 0.0,
                                    (gi.m - gj.m) * system_->b());
            cache_.emplace(key, base);
        }
        // translation by n_j a contributes only a phase
        const double turns = (gi.m - gj.m) * system_->b() * (gj.n * system_->a());
        return base * std::polar(1.0, two_pi * std::remainder(turns, 1.0));
    }

private:
    const GaborSystem* system_;
    std::map<long, Complex> cache_;
};

}  // namespace detail

// Function-space block OMP: residual inner products r'_i = <f - sum c g, g_i>
// drive the selection, and each subproblem is solved through the Gram system
// of analytically integrated atom products.
inline OmpRun omp_functional(const GaborSystem& system, const TargetField& f, int blocksize,
                             int max_iterations, double tolerance) {
    if (blocksize < 1) throw std::invalid_argument("omp_functional: blocksize must be positive");
    if (max_iterations < 1) throw std::invalid_argument("omp_functional: max_iterations must be positive");

    const auto atoms = system.atom_indices();
    const Eigen::Index q_count = static_cast<Eigen::Index>(atoms.size());

    // <f, g_i> by composite Gauss-Legendre sized for the fastest oscillation
    // present: modulation plus target content, at >= 10 nodes per wavelength.
    const double max_mod = std::max(std::abs(system.m_min()), std::abs(system.m_max())) * system.b();
    const double total_freq = max_mod + f.max_frequency_hint();
    const double support = system.window().support_hi() - system.window().support_lo();
    const int panels = std::max(2, static_cast<int>(std::ceil(10.0 * total_freq * support / 16.0)));

    Eigen::VectorXcd f_ip(q_count);
    for (int n = system.n_min(); n <= system.n_max(); ++n) {
        const double lo = system.window().support_lo() + n * system.a();
        const double hi = system.window().support_hi() + n * system.a();
        const auto quad = detail::composite_gauss(lo, hi, panels);
        std::vector<Complex> base(quad.x.size());
        for (std::size_t i = 0; i < quad.x.size(); ++i)
            base[i] = quad.w[i] * f.eval(quad.x[i]) * system.window().eval(quad.x[i] - n * system.a());
        for (int m = system.m_min(); m <= system.m_max(); ++m) {
            Complex sum(0.0, 0.0);
            for (std::size_t i = 0; i < quad.x.size(); ++i)
                sum += base[i] * std::polar(1.0, -two_pi * std::remainder(m * system.b() * quad.x[i], 1.0));
            const Eigen::Index col = static_cast<Eigen::Index>(n - system.n_min()) *
                                         system.modulation_count() +
                                     (m - system.m_min());
            f_ip[col] = sum;
        }
    }

    detail::GramCache gram(system);
    OmpRun run;
    run.state.blocksize = blocksize;
    run.state.residual = f_ip;
    run.state.residual_norms.push_back(f_ip.norm());
    const double initial_norm = f_ip.norm();
    std::vector<bool> used(static_cast<std::size_t>(q_count), false);
    Eigen::VectorXcd gamma;
    bool warned = false;

    for (int it = 0; it < max_iterations; ++it) {
        if (static_cast<Eigen::Index>(run.state.selected.size()) == q_count) break;
        const Eigen::VectorXd scores = run.state.residual.cwiseAbs();
        const auto picked = detail::top_candidates(scores, used, blocksize);
        if (picked.empty()) break;
        for (Eigen::Index q : picked) {
            used[static_cast<std::size_t>(q)] = true;
            run.state.selected.push_back(q);
        }

        const Eigen::Index k = static_cast<Eigen::Index>(run.state.selected.size());
        Eigen::MatrixXcd normal(k, k);
        Eigen::VectorXcd rhs(k);
        for (Eigen::Index row = 0; row < k; ++row) {
            const AtomIndex gi = atoms[static_cast<std::size_t>(run.state.selected[static_cast<std::size_t>(row)])];
            rhs[row] = f_ip[run.state.selected[static_cast<std::size_t>(row)]];
            for (Eigen::Index col = 0; col < k; ++col) {
                const AtomIndex gj = atoms[static_cast<std::size_t>(run.state.selected[static_cast<std::size_t>(col)])];
                normal(row, col) = gram(gj, gi);  // <g_j, g_i>
            }
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(normal);
        const double r_head = std::abs(qr.matrixR()(0, 0));
        const double r_tail = std::abs(qr.matrixR()(k - 1, k - 1));
        if (!warned && r_tail > 0.0 && r_head / r_tail > 1e12) {
            std::cerr << "omp_functional: Gram system condition estimate above 1e12\n";
            warned = true;
        }
        gamma = qr.solve(rhs);

        run.state.residual = f_ip;
        for (Eigen::Index j = 0; j < k; ++j) {
            const AtomIndex gj = atoms[static_cast<std::size_t>(run.state.selected[static_cast<std::size_t>(j)])];
            for (Eigen::Index i = 0; i < q_count; ++i)
                run.state.residual[i] -= gamma[j] * gram(gj, atoms[static_cast<std::size_t>(i)]);
        }
        run.state.iterations = it + 1;
        run.state.residual_norms.push_back(run.state.residual.norm());
        if (run.state.residual.norm() <= tolerance * initial_norm) break;
    }

    run.coefficients.values = Eigen::VectorXcd::Zero(q_count);
    for (std::size_t i = 0; i < run.state.selected.size(); ++i)
        run.coefficients.values[run.state.selected[i]] = gamma[static_cast<Eigen::Index>(i)];
    run.coefficients.index = atoms;
    run.coefficients.provenance = Provenance::Omp;
    run.coefficients.blocksize = blocksize;
    return run;
}

}  // namespace splinegabor
