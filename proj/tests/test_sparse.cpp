#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "splinegabor/analysis.hpp"
#include "splinegabor/experiment.hpp"
#include "splinegabor/sparse.hpp"

using namespace splinegabor;

namespace {

Eigen::VectorXd uniform_grid(double lo, double hi, int count) {
    Eigen::VectorXd g(count);
    for (int j = 0; j < count; ++j) g[j] = lo + (hi - lo) * j / (count - 1);
    return g;
}

GaborSystem small_system() {
    return {BSplineWindow(2).as_piecewise(), 1.0, 1.0 / 3.0, -1, 2, -5, 5};
}

}  // namespace

TEST_CASE("dual analysis reproduces a frame atom and annihilates zero") {
    const auto system = small_system();
    const auto setup = build_setup(3.0, 121, system.window(), system);
    const auto frame = sample_frame(system, setup.extended_grid());
    const auto dual = canonical_dual(frame);

    const Eigen::VectorXcd atom = frame.atoms().col(frame.column_of({0, 0}));
    const auto coeffs = analyze_with_dual(atom, dual, Provenance::Canonical);
    const auto rec = reconstruct(frame, coeffs);
    CHECK((rec - atom).norm() <= 1e-10 * atom.norm());

    const auto zero = analyze_with_dual(Eigen::VectorXcd::Zero(frame.rows()), dual,
                                        Provenance::Canonical);
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("grid mismatch in dual analysis is rejected") {
    const auto system = small_system();
    const auto frame = sample_frame(system, uniform_grid(0.0, 3.0, 61));
    CHECK_THROWS_AS(analyze_with_dual(Eigen::VectorXcd::Zero(60), frame, Provenance::Canonical),
                    std::invalid_argument);
}

TEST_CASE("least squares solves in-span data to numerical zero residual") {
    const auto system = small_system();
    const auto frame = sample_frame(system, uniform_grid(0.0, 3.0, 91));
    std::mt19937 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd mix = Eigen::VectorXcd::Zero(frame.cols());
    for (Eigen::Index q = 0; q < frame.cols(); ++q) mix[q] = Complex(gauss(rng), gauss(rng));
    const Eigen::VectorXcd f = frame.atoms() * mix;

    const auto solution = least_squares(frame, f);
    CHECK((frame.atoms() * solution.values - f).norm() <= 1e-10 * f.norm());

    const auto zero = least_squares(frame, Eigen::VectorXcd::Zero(frame.rows()));
    CHECK(zero.values.norm() == 0.0);
}

TEST_CASE("least squares equals canonical-dual analysis") {
    const auto system = small_system();
    const auto setup = build_setup(3.0, 151, system.window(), system);
    const auto frame = sample_frame(system, setup.extended_grid());
    const auto dual = canonical_dual(frame);
    std::mt19937 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXcd f(frame.rows());
        for (Eigen::Index j = 0; j < f.size(); ++j) f[j] = Complex(gauss(rng), gauss(rng));
        const auto via_ls = least_squares(frame, f);
        const auto via_dual = analyze_with_dual(f, dual, Provenance::Canonical);
        CHECK((via_ls.values - via_dual.values).norm() <=
              1e-10 * std::max(1.0, via_dual.values.norm()));
    }
}

TEST_CASE("single-atom data is recovered in one OMP iteration") {
    const auto system = small_system();
    const auto frame = sample_frame(system, uniform_grid(0.0, 3.0, 301));
    const Eigen::Index target = frame.column_of({2, 1});
    const Eigen::VectorXcd f = 3.0 * frame.atoms().col(target);

    const auto run = omp(frame, f, 1, 1, 0.0);
    REQUIRE(run.state.selected.size() == 1);
    CHECK(run.state.selected[0] == target);
    CHECK_THAT(std::abs(run.coefficients.values[target]), Catch::Matchers::WithinAbs(3.0, 1e-10));
    CHECK(run.state.residual.norm() <= 1e-10 * f.norm());
}

TEST_CASE("OMP residual norms never increase and the selection grows in blocks") {
    const auto system = small_system();
    const auto frame = sample_frame(system, uniform_grid(0.0, 3.0, 301));
    std::mt19937 rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd f(frame.rows());
    for (Eigen::Index j = 0; j < f.size(); ++j) f[j] = Complex(gauss(rng), gauss(rng));

    for (int blocksize : {1, 3, 7}) {
        const auto run = omp(frame, f, blocksize, 6, 0.0);
        CHECK(run.state.selected.size() ==
              std::min<std::size_t>(static_cast<std::size_t>(6 * blocksize),
                                    static_cast<std::size_t>(frame.cols())));
        std::set<Eigen::Index> unique(run.state.selected.begin(), run.state.selected.end());
        CHECK(unique.size() == run.state.selected.size());
        for (std::size_t i = 1; i < run.state.residual_norms.size(); ++i)
            CHECK(run.state.residual_norms[i] <= run.state.residual_norms[i - 1] + 1e-12);
    }
}

TEST_CASE("oversized blocksize selects every remaining atom without error") {
    const auto system = GaborSystem(BSplineWindow(2).as_piecewise(), 1.0, 1.0 / 3.0, -1, 2, -2, 2);
    const auto frame = sample_frame(system, uniform_grid(0.0, 3.0, 101));
    Eigen::VectorXcd f = frame.atoms().rowwise().sum();
    const auto run = omp(frame, f, 1000, 1, 0.0);
    CHECK(run.state.selected.size() == static_cast<std::size_t>(frame.cols()));
}

TEST_CASE("truncation keeps the largest magnitudes with deterministic ties") {
    CoefficientVector c;
    c.values = Eigen::VectorXcd(3);
    c.values << Complex(3.0, 0.0), Complex(-1.0, 0.0), Complex(0.0, 2.0);
    c.index = {{0, 0}, {1, 0}, {2, 0}};

    const auto top2 = truncate_top_n(c, 2);
    CHECK(top2.values[0] == Complex(3.0, 0.0));
    CHECK(top2.values[1] == Complex(0.0, 0.0));
    CHECK(top2.values[2] == Complex(0.0, 2.0));

    const auto all = truncate_top_n(c, 3);
    CHECK((all.values - c.values).norm() == 0.0);

    const auto clamped = truncate_top_n(c, 10);  // warns and clamps
    CHECK((clamped.values - c.values).norm() == 0.0);

    CHECK_THROWS_AS(truncate_top_n(c, 0), std::invalid_argument);
}

TEST_CASE("dropped-tail energy shrinks monotonically with the kept count") {
    const auto system = small_system();
    const auto setup = build_setup(3.0, 121, make_dual2_window(2, 1.0 / 3.0), system);
    const auto dual_frame =
        sample_frame(system.with_window(make_dual2_window(2, 1.0 / 3.0).as_piecewise()),
                     setup.extended_grid());
    Eigen::VectorXcd f(setup.extended_count());
    const auto grid = setup.extended_grid();
    for (Eigen::Index j = 0; j < grid.size(); ++j)
        f[j] = std::polar(1.0, two_pi * grid[j] / 3.0) + 0.4 * std::polar(1.0, -2.0 * two_pi * grid[j] / 3.0);
    const auto coeffs = analyze_with_dual(f, dual_frame, Provenance::Dual2);

    double prev_tail = -1.0;
    for (int keep = 1; keep <= coeffs.values.size(); ++keep) {
        const auto kept = truncate_top_n(coeffs, keep);
        const double tail = (coeffs.values - kept.values).norm();
        if (prev_tail >= 0.0) CHECK(tail <= prev_tail + 1e-14);
        prev_tail = tail;
    }
}

TEST_CASE("analytic atom inner products are Hermitian and match grid sums") {
    const auto system = small_system();
    detail::GramCache gram(system);
    const auto atoms = system.atom_indices();
    std::mt19937 rng(88);
    std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
    for (int trial = 0; trial < 40; ++trial) {
        const auto gi = atoms[pick(rng)];
        const auto gj = atoms[pick(rng)];
        const Complex forward = gram(gi, gj);
        const Complex backward = gram(gj, gi);
        CHECK(std::abs(forward - std::conj(backward)) <= 1e-12);
    }

    // dx-weighted discrete inner products on the reference 601-point spacing
    const auto setup = build_setup(3.0, 601, system.window(), system);
    const auto frame = sample_frame(system, setup.extended_grid());
    for (int trial = 0; trial < 12; ++trial) {
        const auto gi = atoms[pick(rng)];
        const auto gj = atoms[pick(rng)];
        const Complex discrete = frame.dx() * frame.atoms()
                                                  .col(frame.column_of(gj))
                                                  .dot(frame.atoms().col(frame.column_of(gi)));
        CHECK(std::abs(gram(gi, gj) - discrete) <= 1e-6);
    }
}

TEST_CASE("functional OMP recovers a single atom from quadrature inner products") {
    const GaborSystem system(BSplineWindow(2).as_piecewise(), 1.0, 1.0 / 3.0, -1, 2, -4, 4);
    const AtomIndex wanted{2, 0};
    const TargetField atom_field(
        [&](double phi) {
            const double t = phi * 3.0 / two_pi;
            return system.atom(wanted, t);
        },
        3.0, 3.0);

    const auto run = omp_functional(system, atom_field, 1, 1, 0.0);
    REQUIRE(run.state.selected.size() == 1);
    CHECK(system.atom_indices()[static_cast<std::size_t>(run.state.selected[0])] == wanted);
    CHECK_THAT(std::abs(run.coefficients.values[run.state.selected[0]]),
               Catch::Matchers::WithinAbs(1.0, 1e-8));
}

TEST_CASE("functional and vector OMP land in the same error regime") {
    // order 2, a = 1, b = 1/3 lattice against the wavenumber-5 cylinder
    // target; both pursuits keep 120 coefficients with blocksize 20.
    ExperimentConfig cfg;
    cfg.method = Method::Omp;
    cfg.budgets = {120};
    cfg.output_dir = "sparse_test_out";
    const auto vector_run = run_experiment(cfg);
    cfg.method = Method::OmpFunctional;
    const auto functional_run = run_experiment(cfg);

    const double vector_err = vector_run.outcomes.front().report.average;
    const double functional_err = functional_run.outcomes.front().report.average;
    INFO("vector " << vector_err << " functional " << functional_err);
    CHECK(functional_err <= 10.0 * vector_err);
    CHECK(vector_err <= 10.0 * functional_err);
}
