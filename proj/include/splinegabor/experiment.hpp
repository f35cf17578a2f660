#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "splinegabor/analysis.hpp"
#include "splinegabor/bspline.hpp"
#include "splinegabor/gabor.hpp"
#include "splinegabor/sparse.hpp"
#include "splinegabor/targets.hpp"

namespace splinegabor {

enum class TargetKind { Cylinder, PointSource };
enum class Method { Dual1, Dual2, Canonical, LeastSquares, Omp, OmpFunctional };

inline std::string to_string(TargetKind t) {
    return t == TargetKind::Cylinder ? "cylinder" : "point-source";
}

inline std::string to_string(Method m) {
    switch (m) {
        case Method::Dual1: return "dual1";
        case Method::Dual2: return "dual2";
        case Method::Canonical: return "canonical";
        case Method::LeastSquares: return "least-squares";
        case Method::Omp: return "omp";
        case Method::OmpFunctional: return "omp-functional";
    }
    return "unknown";
}

inline std::optional<TargetKind> parse_target(const std::string& s) {
    if (s == "cylinder") return TargetKind::Cylinder;
    if (s == "point-source" || s == "point_source") return TargetKind::PointSource;
    return std::nullopt;
}

inline std::optional<Method> parse_method(const std::string& s) {
    if (s == "dual1") return Method::Dual1;
    if (s == "dual2") return Method::Dual2;
    if (s == "canonical") return Method::Canonical;
    if (s == "least-squares" || s == "least_squares") return Method::LeastSquares;
    if (s == "omp") return Method::Omp;
    if (s == "omp-functional" || s == "omp_functional") return Method::OmpFunctional;
    return std::nullopt;
}

struct ExperimentConfig {
    TargetKind target = TargetKind::Cylinder;
    double wavenumber = 5.0;
    int window_order = 2;
    double shift_step = 1.0;            // a
    double modulation_step = 1.0 / 3.0; // b
    double interval_length = 3.0;       // L
    int sample_count = 601;             // P
    Method method = Method::Dual2;
    int blocksize = 20;
    std::vector<int> budgets = {60, 120, 240};
    // -1 selects one full period of sampled modulations (exact discrete
    // duality); a nonnegative value selects the symmetric range [-M, M].
    int modulation_limit = -1;
    double omp_tolerance = 0.0;
    int series_max_terms = -1;
    double series_tail_tolerance = 1e-14;
    bool extend_interval = true;
    std::string output_dir = "out";
    unsigned seed = 0;

    std::vector<std::string> validate() const {
        std::vector<std::string> problems;
        if (window_order < 1) problems.push_back("window order must be at least 1");
        if (wavenumber <= 0.0) problems.push_back("wavenumber must be positive");
        if (sample_count < 2) problems.push_back("sample count must be at least 2");
        if (interval_length <= 0.0) problems.push_back("interval length must be positive");
        if (blocksize < 1) problems.push_back("blocksize must be at least 1");
        if (budgets.empty()) problems.push_back("at least one coefficient budget is required");
        for (int n : budgets)
            if (n < 1) problems.push_back("coefficient budgets must be positive");
        if (window_order >= 1 && !check_frame_parameters(window_order, shift_step, modulation_step)) {
            std::ostringstream os;
            os << "frame parameters violate the admissibility bound (a, b) in (0, " << window_order
               << "] x (0, 1/" << window_order << "]: a = " << shift_step
               << ", b = " << modulation_step;
            problems.push_back(os.str());
        }
        if ((method == Method::Dual1 || method == Method::Dual2) && window_order >= 1) {
            const double limit = 1.0 / (2.0 * window_order - 1.0);
            if (!(modulation_step > 0.0 && modulation_step <= limit)) {
                std::ostringstream os;
                os << "explicit dual windows require b in (0, 1/(2*order - 1)] = (0, " << limit
                   << "]: b = " << modulation_step;
                problems.push_back(os.str());
            }
        }
        return problems;
    }

    std::string label() const {
        std::ostringstream os;
        os << to_string(target) << "_k";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", wavenumber);
        os << buf << "_" << to_string(method);
        if (method == Method::Omp || method == Method::OmpFunctional) os << blocksize;
        if (!extend_interval) os << "_noext";
        return os.str();
    }
};

struct ConfigurationError : std::runtime_error {
    explicit ConfigurationError(const std::vector<std::string>& problems)
        : std::runtime_error(join(problems)) {}

    static std::string join(const std::vector<std::string>& problems) {
        std::string all = "invalid experiment configuration:";
        for (const auto& p : problems) all += "\n  - " + p;
        return all;
    }
};

struct MethodOutcome {
    Method method;
    int budget = 0;
    ErrorReport report;
};

struct RunArtifacts {
    std::vector<std::string> files;
    std::vector<MethodOutcome> outcomes;
    CoefficientVector coefficients;  // full coefficient vector before truncation
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content,
                            std::vector<std::string>& files) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    files.push_back(path);
}

}  // namespace detail

inline TargetField make_target_field(const ExperimentConfig& cfg) {
    if (cfg.target == TargetKind::Cylinder)
        return {CylinderScatteringField(cfg.wavenumber, 1.0, cfg.series_max_terms,
                                        cfg.series_tail_tolerance),
                cfg.interval_length};
    return {PointSourceField(cfg.wavenumber, 0.0, 1.5, 1.0, 0.0, 0.0), cfg.interval_length};
}

inline GaborSystem make_primal_system(const ExperimentConfig& cfg) {
    const PiecewisePolynomial window = BSplineWindow(cfg.window_order).as_piecewise();
    const auto [n_min, n_max] =
        GaborSystem::shifts_covering(window, cfg.shift_step, cfg.interval_length);
    int m_min, m_max;
    if (cfg.modulation_limit >= 0) {
        m_min = -cfg.modulation_limit;
        m_max = cfg.modulation_limit;
    } else {
        const double dx = cfg.interval_length / (cfg.sample_count - 1);
        std::tie(m_min, m_max) = GaborSystem::full_period_modulations(cfg.modulation_step, dx);
    }
    return {window, cfg.shift_step, cfg.modulation_step, n_min, n_max, m_min, m_max};
}

inline Eigen::VectorXcd sample_target(const TargetField& field, const Eigen::VectorXd& grid) {
    Eigen::VectorXcd out(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) out[j] = field.eval(grid[j]);
    return out;
}

namespace detail {

inline Eigen::VectorXcd sample_target_zero_padded(const TargetField& field,
                                                  const Eigen::VectorXd& grid, double length) {
    Eigen::VectorXcd out(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        const double x = grid[j];
        out[j] = (x >= -1e-12 && x <= length + 1e-12) ? field.eval(x) : Complex(0.0, 0.0);
    }
    return out;
}

inline Provenance provenance_of(Method m) {
    switch (m) {
        case Method::Dual1: return Provenance::Dual1;
        case Method::Dual2: return Provenance::Dual2;
        case Method::Canonical: return Provenance::Canonical;
        case Method::LeastSquares: return Provenance::LeastSquares;
        default: return Provenance::Omp;
    }
}

}  // namespace detail

// Full experiment pipeline: build the frame, compute coefficients with the
// configured method, truncate to each budget, reconstruct on the interest
// grid, and emit the per-budget error files plus the sorted coefficient dump
// and a plot script.
inline RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    const auto problems = cfg.validate();
    if (!problems.empty()) throw ConfigurationError(problems);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);

    const TargetField target = make_target_field(cfg);
    const GaborSystem system = make_primal_system(cfg);

    const Eigen::VectorXd interest_grid = [&] {
        IntervalSetup trivial(cfg.interval_length, cfg.sample_count, 0, cfg.sample_count - 1);
        return trivial.interest_grid();
    }();
    const SampledFrame synthesis = sample_frame(system, interest_grid);
    const Eigen::VectorXcd f_interest = sample_target(target, interest_grid);

    CoefficientVector coefficients;
    std::optional<SampledFrame> interest_frame_for_omp;

    switch (cfg.method) {
        case Method::Dual1:
        case Method::Dual2: {
            const DualWindow dual = cfg.method == Method::Dual1
                                        ? make_dual1_window(cfg.window_order, cfg.modulation_step)
                                        : make_dual2_window(cfg.window_order, cfg.modulation_step);
            const IntervalSetup setup = build_setup(cfg.interval_length, cfg.sample_count, dual, system);
            const GaborSystem dual_system = system.with_window(dual.as_piecewise());
            const SampledFrame dual_frame = sample_frame(dual_system, setup.extended_grid());
            const Eigen::VectorXcd f_ext =
                cfg.extend_interval
                    ? sample_target(target, setup.extended_grid())
                    : detail::sample_target_zero_padded(target, setup.extended_grid(), cfg.interval_length);
            coefficients = analyze_with_dual(f_ext, dual_frame, detail::provenance_of(cfg.method));
            break;
        }
        case Method::Canonical:
        case Method::LeastSquares: {
            const IntervalSetup setup =
                build_setup(cfg.interval_length, cfg.sample_count, system.window(), system);
            const SampledFrame frame_ext = sample_frame(system, setup.extended_grid());
            const Eigen::VectorXcd f_ext =
                cfg.extend_interval
                    ? sample_target(target, setup.extended_grid())
                    : detail::sample_target_zero_padded(target, setup.extended_grid(), cfg.interval_length);
            if (cfg.method == Method::Canonical) {
                const SampledFrame dual = canonical_dual(frame_ext);
                coefficients = analyze_with_dual(f_ext, dual, Provenance::Canonical);
            } else {
                coefficients = least_squares(frame_ext, f_ext);
            }
            break;
        }
        case Method::Omp: {
            interest_frame_for_omp = synthesis;
            const int max_budget = *std::max_element(cfg.budgets.begin(), cfg.budgets.end());
            const int iterations = (max_budget + cfg.blocksize - 1) / cfg.blocksize;
            coefficients =
                omp(*interest_frame_for_omp, f_interest, cfg.blocksize, iterations, cfg.omp_tolerance)
                    .coefficients;
            break;
        }
        case Method::OmpFunctional: {
            const int max_budget = *std::max_element(cfg.budgets.begin(), cfg.budgets.end());
            const int iterations = (max_budget + cfg.blocksize - 1) / cfg.blocksize;
            coefficients = omp_functional(system, target, cfg.blocksize, iterations, cfg.omp_tolerance)
                               .coefficients;
            break;
        }
    }

    RunArtifacts artifacts;
    artifacts.coefficients = coefficients;
    const std::string label = cfg.label();

    for (int budget : cfg.budgets) {
        CoefficientVector c_budget;
        if (cfg.method == Method::Omp && interest_frame_for_omp) {
            const int iterations = (budget + cfg.blocksize - 1) / cfg.blocksize;
            auto run = omp(*interest_frame_for_omp, f_interest, cfg.blocksize, iterations,
                           cfg.omp_tolerance);
            c_budget = truncate_top_n(run.coefficients,
                                      std::min<int>(budget, static_cast<int>(run.coefficients.values.size())));
        } else if (cfg.method == Method::OmpFunctional) {
            const int iterations = (budget + cfg.blocksize - 1) / cfg.blocksize;
            auto run = omp_functional(system, target, cfg.blocksize, iterations, cfg.omp_tolerance);
            c_budget = truncate_top_n(run.coefficients,
                                      std::min<int>(budget, static_cast<int>(run.coefficients.values.size())));
        } else {
            c_budget = truncate_top_n(coefficients,
                                      std::min<int>(budget, static_cast<int>(coefficients.values.size())));
        }
        const Eigen::VectorXcd rec = reconstruct(synthesis, c_budget);
        ErrorReport report = relative_error(f_interest, rec);
        report.coefficient_count = budget;
        report.method = to_string(cfg.method);
        artifacts.outcomes.push_back({cfg.method, budget, report});

        std::ostringstream csv;
        csv << "x,re_ref,im_ref,re_approx,im_approx,rel_err\n";
        for (Eigen::Index j = 0; j < interest_grid.size(); ++j) {
            csv << detail::format_double(interest_grid[j]) << ','
                << detail::format_double(f_interest[j].real()) << ','
                << detail::format_double(f_interest[j].imag()) << ','
                << detail::format_double(rec[j].real()) << ','
                << detail::format_double(rec[j].imag()) << ','
                << detail::format_double(report.pointwise[j]) << '\n';
        }
        detail::write_text_file(cfg.output_dir + "/errors_" + label + "_n" + std::to_string(budget) +
                                    ".csv",
                                csv.str(), artifacts.files);
    }

    {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(coefficients.values.size()));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            const double ma = std::abs(coefficients.values[a]), mb = std::abs(coefficients.values[b]);
            if (ma != mb) return ma > mb;
            return a < b;
        });
        std::ostringstream csv;
        csv << "rank,m,n,abs_coeff\n";
        for (std::size_t r = 0; r < order.size(); ++r) {
            const auto idx = coefficients.index[static_cast<std::size_t>(order[r])];
            csv << (r + 1) << ',' << idx.m << ',' << idx.n << ','
                << detail::format_double(std::abs(coefficients.values[order[r]])) << '\n';
        }
        detail::write_text_file(cfg.output_dir + "/coefficients_" + label + ".csv", csv.str(),
                                artifacts.files);
    }

    {
        std::ostringstream csv;
        csv << "method,budget,avg_rel_err,max_rel_err\n";
        for (const auto& o : artifacts.outcomes)
            csv << to_string(o.method) << ',' << o.budget << ','
                << detail::format_double(o.report.average) << ','
                << detail::format_double(o.report.max) << '\n';
        detail::write_text_file(cfg.output_dir + "/run_summary_" + label + ".csv", csv.str(),
                                artifacts.files);
    }

    {
        std::ostringstream gp;
        gp << "# gnuplot script generated alongside the CSV files\n"
           << "set datafile separator ','\n"
           << "set logscale y\n"
           << "set xlabel 'x'\n"
           << "set ylabel 'relative error'\n"
           << "plot ";
        for (std::size_t i = 0; i < cfg.budgets.size(); ++i) {
            if (i) gp << ", \\\n     ";
            gp << "'errors_" << label << "_n" << cfg.budgets[i] << ".csv' using 1:6 with lines title '"
               << cfg.budgets[i] << " coefficients'";
        }
        gp << "\npause -1\n"
           << "set xlabel 'rank'\n"
           << "set ylabel '|coefficient|'\n"
           << "plot 'coefficients_" << label << ".csv' using 1:4 with points title '" << label << "'\n"
           << "pause -1\n";
        detail::write_text_file(cfg.output_dir + "/plot_" + label + ".gp", gp.str(), artifacts.files);
    }

    return artifacts;
}

// The eight-config grid behind the headline comparison table: both targets,
// both wavenumbers, explicit dual analysis versus block OMP.
inline std::vector<ExperimentConfig> table1_configs(const std::string& output_dir) {
    std::vector<ExperimentConfig> configs;
    for (TargetKind target : {TargetKind::Cylinder, TargetKind::PointSource})
        for (double k : {5.0, 15.0})
            for (Method method : {Method::Dual2, Method::Omp}) {
                ExperimentConfig cfg;
                cfg.target = target;
                cfg.wavenumber = k;
                cfg.method = method;
                cfg.blocksize = 20;
                cfg.output_dir = output_dir;
                configs.push_back(cfg);
            }
    return configs;
}

// Summary CSV in the layout of the comparison table: one row per
// (target, wavenumber, method), one column per coefficient budget. Cells
// that fail to compute are recorded as nan and the remaining cells still run.
inline std::string emit_table1(const std::vector<ExperimentConfig>& configs,
                               const std::string& output_dir, std::vector<std::string>* files = nullptr) {
    std::ostringstream csv;
    csv << "target,k,method";
    if (!configs.empty())
        for (int budget : configs.front().budgets) csv << ",err_" << budget;
    csv << '\n';

    for (const auto& cfg : configs) {
        std::string method_label = to_string(cfg.method);
        if (cfg.method == Method::Omp || cfg.method == Method::OmpFunctional)
            method_label += "(" + std::to_string(cfg.blocksize) + ")";
        char kbuf[32];
        std::snprintf(kbuf, sizeof(kbuf), "%g", cfg.wavenumber);
        csv << to_string(cfg.target) << ',' << kbuf << ',' << method_label;
        try {
            const RunArtifacts artifacts = run_experiment(cfg);
            for (const auto& outcome : artifacts.outcomes)
                csv << ',' << detail::format_double(outcome.report.average);
        } catch (const std::exception& e) {
            std::cerr << "table cell " << cfg.label() << " failed: " << e.what() << '\n';
            for (std::size_t i = 0; i < cfg.budgets.size(); ++i) csv << ",nan";
        }
        csv << '\n';
    }

    namespace fs = std::filesystem;
    fs::create_directories(output_dir);
    std::vector<std::string> local;
    detail::write_text_file(output_dir + "/summary_table.csv", csv.str(), files ? *files : local);
    return csv.str();
}

}  // namespace splinegabor
