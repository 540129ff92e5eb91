#include "fpcav/fitting.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fpcav/errors.hpp"

namespace fpcav
{
namespace
{
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

void finite_difference_jacobian(const ResidualProblem &problem, std::span<const double> params, Matrix &jac)
{
    const std::size_t m = problem.residual_count;
    const std::size_t n = params.size();
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> rp(m), rm(m);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double h = 1e-6 * std::max(std::abs(p[k]), 1e-3);
        const double saved = p[k];
        p[k] = saved + h;
        problem.residuals(p, rp);
        p[k] = saved - h;
        problem.residuals(p, rm);
        p[k] = saved;
        for (std::size_t i = 0; i < m; ++i)
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = (rp[i] - rm[i]) / (2.0 * h);
    }
}

void evaluate_jacobian(const ResidualProblem &problem, std::span<const double> params, Matrix &jac)
{
    if (problem.jacobian)
        problem.jacobian(params, std::span<double>(jac.data(), static_cast<std::size_t>(jac.size())));
    else
        finite_difference_jacobian(problem, params, jac);
}

double half_norm2(const std::vector<double> &r)
{
    return 0.5 * std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
}

bool all_finite(const std::vector<double> &v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double norm(std::span<const double> v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }
} // namespace

const char *to_string(AxisUnit unit)
{
    switch (unit)
    {
    case AxisUnit::pm:
        return "pm";
    case AxisUnit::nm:
        return "nm";
    case AxisUnit::uev:
        return "ueV";
    case AxisUnit::ps:
        return "ps";
    case AxisUnit::none:
        break;
    }
    return "";
}

void Trace::validate() const
{
    require(x.size() == y.size(), "trace x and y lengths differ");
    require(sigma.empty() || sigma.size() == y.size(), "trace sigma length differs from y");
    for (std::size_t i = 1; i < x.size(); ++i)
        require(x[i] > x[i - 1], "trace x must be strictly increasing");
    for (double s : sigma)
        require(s > 0.0, "trace sigmas must be positive");
}

double DecayHistogram::total_counts() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

void DecayHistogram::validate() const
{
    require(bin_centers_ps.size() == counts.size(), "histogram bins and counts differ in length");
    require(bin_width_ps > 0.0, "histogram bin width must be positive");
    require(bin_centers_ps.size() >= 2, "histogram needs at least two bins");
    for (std::size_t i = 1; i < bin_centers_ps.size(); ++i)
        require(std::abs(bin_centers_ps[i] - bin_centers_ps[i - 1] - bin_width_ps) <= 1e-6 * bin_width_ps,
                "histogram bins must be uniform");
    for (double c : counts)
        require(c >= 0.0, "histogram counts must be non-negative");
}

InstrumentResponse InstrumentResponse::gaussian_sigma(double sigma_ps, double center_ps)
{
    require(sigma_ps > 0.0, "IRF width must be positive");
    InstrumentResponse irf;
    irf.kind_ = Kind::gaussian;
    irf.sigma_ps_ = sigma_ps;
    irf.center_ps_ = center_ps;
    return irf;
}

InstrumentResponse InstrumentResponse::gaussian_fwhm(double fwhm_ps, double center_ps)
{
    return gaussian_sigma(fwhm_ps / fwhm_per_sigma, center_ps);
}

InstrumentResponse InstrumentResponse::delta(double center_ps)
{
    InstrumentResponse irf;
    irf.kind_ = Kind::delta;
    irf.center_ps_ = center_ps;
    return irf;
}

InstrumentResponse InstrumentResponse::from_histogram(const DecayHistogram &grid, std::vector<double> weights)
{
    grid.validate();
    require(weights.size() == grid.counts.size(), "IRF histogram must match the decay grid");
    double total = 0.0;
    for (double w : weights)
    {
        require(w >= 0.0, "IRF weights must be non-negative");
        total += w;
    }
    require(total > 0.0, "IRF histogram is empty");
    InstrumentResponse irf;
    irf.kind_ = Kind::explicit_weights;
    irf.first_bin_ps_ = grid.bin_centers_ps.front();
    irf.bin_width_ps_ = grid.bin_width_ps;
    double centroid = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
    {
        weights[i] /= total;
        centroid += weights[i] * grid.bin_centers_ps[i];
    }
    irf.center_ps_ = centroid;
    irf.weights_ = std::move(weights);
    return irf;
}

std::vector<double> InstrumentResponse::sampled(const DecayHistogram &grid) const
{
    const std::size_t n = grid.bin_centers_ps.size();
    std::vector<double> w(n, 0.0);
    switch (kind_)
    {
    case Kind::delta: {
        const double first = grid.bin_centers_ps.front();
        const auto idx = std::lround((center_ps_ - first) / grid.bin_width_ps);
        require(idx >= 0 && static_cast<std::size_t>(idx) < n, "IRF center lies outside the histogram");
        w[static_cast<std::size_t>(idx)] = 1.0;
        break;
    }
    case Kind::gaussian: {
        const double inv = 1.0 / (std::sqrt(2.0) * sigma_ps_);
        for (std::size_t i = 0; i < n; ++i)
        {
            const double lo = grid.bin_centers_ps[i] - 0.5 * grid.bin_width_ps - center_ps_;
            const double hi = lo + grid.bin_width_ps;
            w[i] = 0.5 * (std::erf(hi * inv) - std::erf(lo * inv));
        }
        break;
    }
    case Kind::explicit_weights: {
        require(std::abs(grid.bin_width_ps - bin_width_ps_) <= 1e-9 * bin_width_ps_,
                "IRF histogram bin width differs from the decay histogram");
        const double shift = (first_bin_ps_ - grid.bin_centers_ps.front()) / grid.bin_width_ps;
        const auto offset = std::lround(shift);
        require(std::abs(shift - static_cast<double>(offset)) < 1e-6, "IRF histogram bins are not aligned");
        for (std::size_t i = 0; i < weights_.size(); ++i)
        {
            const auto j = static_cast<long>(i) + offset;
            if (j >= 0 && static_cast<std::size_t>(j) < n)
                w[static_cast<std::size_t>(j)] = weights_[i];
        }
        break;
    }
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    require(total > 0.0, "IRF has no weight inside the histogram window");
    for (double &x : w)
        x /= total;
    return w;
}

double FitResult::value(std::string_view name) const
{
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
            return values[i];
    throw InvalidArgument("fit has no parameter '" + std::string(name) + "'");
}

double FitResult::sigma(std::string_view name) const
{
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
            return sigmas[i];
    throw InvalidArgument("fit has no parameter '" + std::string(name) + "'");
}

FitResult solve_least_squares(const ResidualProblem &problem, std::vector<double> initial,
                              const LeastSquaresOptions &options)
{
    require(problem.residuals != nullptr, "least squares needs a residual function");
    const std::size_t m = problem.residual_count;
    const std::size_t n = initial.size();
    require(n > 0, "least squares needs at least one parameter");
    require(m >= n, "fewer residuals than parameters");
    require(problem.names.empty() || problem.names.size() == n, "parameter names do not match the initial guess");

    FitResult result;
    result.names = problem.names;
    if (result.names.empty())
        for (std::size_t k = 0; k < n; ++k)
            result.names.push_back("p" + std::to_string(k));

    std::vector<double> p = std::move(initial);
    std::vector<double> r(m), r_trial(m), p_trial(n);
    problem.residuals(p, r);
    if (!all_finite(r))
        throw NumericalFailure("residuals are not finite at the initial guess");
    double cost = half_norm2(r);

    Matrix jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    double lambda = 1e-6;
    bool converged = false;
    bool solver_failed = false;
    int iterations = 0;

    while (iterations < options.max_iterations && !converged)
    {
        evaluate_jacobian(problem, p, jac);
        const Eigen::Map<const Vector> rv(r.data(), static_cast<Eigen::Index>(m));
        const Matrix jtj = jac.transpose() * jac;
        const Vector grad = jac.transpose() * rv;
        Vector diag = jtj.diagonal();
        const double max_diag = diag.maxCoeff();
        if (!(max_diag > 0.0))
        {
            solver_failed = true;
            break;
        }
        for (Eigen::Index k = 0; k < diag.size(); ++k)
            diag[k] = std::max(diag[k], 1e-12 * max_diag);

        // Stop before moving when even the undamped Gauss-Newton step cannot lower the cost
        // by more than the tolerance: a linear problem stops after its exact step.
        {
            Matrix a = jtj;
            a.diagonal() += 1e-12 * diag;
            const Eigen::LDLT<Matrix> ldlt(a);
            const Vector gn = ldlt.solve(grad);
            const double predicted = 0.5 * grad.dot(gn);
            if (cost == 0.0 || (ldlt.info() == Eigen::Success && std::isfinite(predicted) &&
                                predicted <= options.cost_tolerance * cost))
            {
                converged = true;
                break;
            }
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt)
        {
            Matrix a = jtj;
            a.diagonal() += lambda * diag;
            const Eigen::LDLT<Matrix> ldlt(a);
            Vector step = ldlt.solve(-grad);
            if (ldlt.info() != Eigen::Success || !step.allFinite())
            {
                lambda *= 10.0;
                continue;
            }
            const double step_norm = step.norm();
            if (step_norm <= options.step_tolerance * (norm(p) + options.step_tolerance))
            {
                converged = true;
                break;
            }
            for (std::size_t k = 0; k < n; ++k)
                p_trial[k] = p[k] + step[static_cast<Eigen::Index>(k)];
            problem.residuals(p_trial, r_trial);
            const double trial_cost = all_finite(r_trial) ? half_norm2(r_trial)
                                                          : std::numeric_limits<double>::infinity();
            if (trial_cost < cost)
            {
                const double change = (cost - trial_cost) / std::max(cost, std::numeric_limits<double>::min());
                p.swap(p_trial);
                r.swap(r_trial);
                cost = trial_cost;
                accepted = true;
                ++iterations;
                lambda = std::max(lambda / 10.0, 1e-15);
                if (change < options.cost_tolerance || step_norm <= options.step_tolerance * (norm(p) + 1.0) ||
                    cost == 0.0)
                    converged = true;
            }
            else
            {
                lambda *= 10.0;
            }
        }
        if (!accepted && !converged)
        {
            // No downhill step at any damping: stationary to working precision.
            const double gscale = grad.cwiseAbs().maxCoeff();
            converged = gscale <= 1e-8 * std::max(1.0, std::sqrt(2.0 * cost) * std::sqrt(max_diag));
            solver_failed = !converged;
            break;
        }
    }

    result.values = p;
    result.iterations = iterations;
    result.converged = converged && !solver_failed;
    result.residual_norm = std::sqrt(2.0 * cost);
    if (solver_failed)
        result.warnings.push_back("normal equations could not be solved even with damping");
    else if (!converged)
        result.warnings.push_back("iteration limit reached before convergence");

    // Covariance from the Jacobian at the solution.
    evaluate_jacobian(problem, p, jac);
    const Matrix jtj = jac.transpose() * jac;
    Vector d = jtj.diagonal();
    result.sigmas.assign(n, 0.0);
    if ((d.array() > 0.0).all())
    {
        const Vector dinv = d.cwiseSqrt().cwiseInverse();
        const Matrix corr = dinv.asDiagonal() * jtj * dinv.asDiagonal();
        const Eigen::SelfAdjointEigenSolver<Matrix> eig(corr);
        const Vector ev = eig.eigenvalues();
        const double max_ev = ev.maxCoeff();
        result.near_singular = !(ev.minCoeff() > 1e-10 * max_ev);
        Vector inv_ev(ev.size());
        for (Eigen::Index k = 0; k < ev.size(); ++k)
            inv_ev[k] = ev[k] > 1e-14 * max_ev ? 1.0 / ev[k] : 0.0;
        const Matrix corr_inv = eig.eigenvectors() * inv_ev.asDiagonal() * eig.eigenvectors().transpose();
        const Matrix cov = dinv.asDiagonal() * corr_inv * dinv.asDiagonal();
        double s2 = 1.0;
        if (options.scale_covariance)
            s2 = m > n ? 2.0 * cost / static_cast<double>(m - n) : 0.0;
        for (std::size_t k = 0; k < n; ++k)
            result.sigmas[k] = std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) * s2));
    }
    else
    {
        result.near_singular = true;
    }
    if (result.near_singular)
        result.warnings.push_back("near-singular covariance: some parameters are not determined by the data");
    return result;
}

FitResult least_squares_core(const CurveModel &model, std::vector<double> initial, const Trace &trace,
                             LeastSquaresOptions options)
{
    trace.validate();
    require(model.value != nullptr, "curve model needs a value function");
    const std::size_t m = trace.x.size();
    const std::size_t n = initial.size();
    std::vector<double> inv_sigma(m, 1.0);
    if (trace.weighted())
    {
        for (std::size_t i = 0; i < m; ++i)
            inv_sigma[i] = 1.0 / trace.sigma[i];
        options.scale_covariance = false;
    }

    ResidualProblem problem;
    problem.residual_count = m;
    problem.names = model.names;
    problem.residuals = [&](std::span<const double> p, std::span<double> r) {
        for (std::size_t i = 0; i < m; ++i)
            r[i] = (model.value(trace.x[i], p) - trace.y[i]) * inv_sigma[i];
    };
    if (model.gradient)
    {
        problem.jacobian = [&](std::span<const double> p, std::span<double> jac) {
            for (std::size_t i = 0; i < m; ++i)
            {
                const std::span<double> row = jac.subspan(i * n, n);
                model.gradient(trace.x[i], p, row);
                for (double &v : row)
                    v *= inv_sigma[i];
            }
        };
    }
    return solve_least_squares(problem, std::move(initial), options);
}

double lorentzian(double x, double center, double fwhm, double amplitude, double offset)
{
    const double u = 2.0 * (x - center) / fwhm;
    return amplitude / (1.0 + u * u) + offset;
}

CurveModel lorentzian_model()
{
    CurveModel model;
    model.names = {"center", "fwhm", "amplitude", "offset"};
    model.value = [](double x, std::span<const double> p) { return lorentzian(x, p[0], p[1], p[2], p[3]); };
    model.gradient = [](double x, std::span<const double> p, std::span<double> g) {
        const double dx = x - p[0];
        const double w2 = p[1] * p[1];
        const double u2 = 4.0 * dx * dx / w2;
        const double denom = 1.0 + u2;
        const double shape = 1.0 / denom;
        const double s2 = shape * shape;
        g[0] = p[2] * s2 * 8.0 * dx / w2;
        g[1] = p[2] * s2 * 2.0 * u2 / p[1];
        g[2] = shape;
        g[3] = 1.0;
    };
    return model;
}

CurveModel purcell_map_model()
{
    CurveModel model;
    model.names = {"F_P1", "F_P2", "Delta1", "Delta2", "splitting", "alpha"};
    model.value = [](double x, std::span<const double> p) {
        const PurcellModel m{p[0], p[1], std::abs(p[2]), std::abs(p[3]), p[4], p[5]};
        return relative_decay_rate(x, m);
    };
    model.gradient = [](double x, std::span<const double> p, std::span<double> g) {
        const double d1 = x;
        const double d2 = x + p[4];
        const double w1 = p[2] * p[2];
        const double w2 = p[3] * p[3];
        const double den1 = 4.0 * d1 * d1 + w1;
        const double den2 = 4.0 * d2 * d2 + w2;
        g[0] = w1 / den1;
        g[1] = w2 / den2;
        g[2] = p[0] * 2.0 * p[2] * 4.0 * d1 * d1 / (den1 * den1);
        g[3] = p[1] * 2.0 * p[3] * 4.0 * d2 * d2 / (den2 * den2);
        g[4] = -p[1] * w2 * 8.0 * d2 / (den2 * den2);
        g[5] = 1.0;
    };
    return model;
}

PurcellModel to_purcell_model(const FitResult &fit)
{
    return PurcellModel{fit.value("F_P1"),      fit.value("F_P2"),      fit.value("Delta1"),
                        fit.value("Delta2"),    fit.value("splitting"), fit.value("alpha")};
}

FitResult fit_lorentzian(const Trace &trace, const LeastSquaresOptions &options)
{
    trace.validate();
    require(trace.x.size() >= 8, "a Lorentzian fit needs at least 8 points");
    const auto &x = trace.x;
    const auto &y = trace.y;
    const auto imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const double ymax = y[imax];
    const double ymin = *std::min_element(y.begin(), y.end());
    const double amplitude = ymax - ymin;

    FitResult flat;
    flat.names = lorentzian_model().names;
    if (!(amplitude > 1e-12 * std::max(std::abs(ymax), std::abs(ymin))) || amplitude == 0.0)
    {
        flat.values = {x[imax], 0.0, 0.0, ymin};
        flat.sigmas.assign(4, 0.0);
        flat.warnings.push_back("no peak above the offset");
        return flat;
    }

    // FWHM from the half-maximum crossings around the peak.
    const double half = ymin + 0.5 * amplitude;
    double left = x.front(), right = x.back();
    for (std::size_t i = imax; i > 0; --i)
        if (y[i - 1] < half)
        {
            left = x[i - 1] + (half - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1]);
            break;
        }
    for (std::size_t i = imax; i + 1 < y.size(); ++i)
        if (y[i + 1] < half)
        {
            right = x[i] + (y[i] - half) * (x[i + 1] - x[i]) / (y[i] - y[i + 1]);
            break;
        }
    const double fwhm0 = std::max(right - left, 1e-6 * (x.back() - x.front()));

    FitResult fit = least_squares_core(lorentzian_model(), {x[imax], fwhm0, amplitude, ymin}, trace, options);
    fit.values[1] = std::abs(fit.values[1]);
    if (!(fit.values[2] > 0.0))
    {
        fit.converged = false;
        fit.warnings.push_back("fitted amplitude is not positive");
    }
    return fit;
}

FitResult fit_purcell_map(const Trace &trace, const LeastSquaresOptions &options)
{
    trace.validate();
    require(trace.x.size() >= 12, "a Purcell-map fit needs at least 12 points");
    const auto &x = trace.x;
    const auto &y = trace.y;
    const std::size_t m = x.size();
    const double span = x.back() - x.front();
    double min_dx = span;
    for (std::size_t i = 1; i < m; ++i)
        min_dx = std::min(min_dx, x[i] - x[i - 1]);

    // Seed by profiling: for fixed (splitting, width) the model is linear in (F1, F2, alpha).
    std::vector<double> wts(m, 1.0);
    if (trace.weighted())
        for (std::size_t i = 0; i < m; ++i)
            wts[i] = 1.0 / trace.sigma[i];
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> best{0.0, 0.0, span / 4.0, span / 4.0, span / 4.0, 1.0};
    Eigen::MatrixXd design(static_cast<Eigen::Index>(m), 3);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
        rhs[static_cast<Eigen::Index>(i)] = y[i] * wts[i];
    const int n_split = 48, n_width = 32;
    for (int a = 0; a < n_split; ++a)
    {
        const double splitting = span * (a + 1) / n_split;
        for (int b = 0; b < n_width; ++b)
        {
            const double width = 2.0 * min_dx * std::pow(span / (2.0 * min_dx), static_cast<double>(b) / (n_width - 1));
            for (std::size_t i = 0; i < m; ++i)
            {
                const double d1 = x[i], d2 = x[i] + splitting, w2 = width * width;
                const auto row = static_cast<Eigen::Index>(i);
                design(row, 0) = w2 / (4.0 * d1 * d1 + w2) * wts[i];
                design(row, 1) = w2 / (4.0 * d2 * d2 + w2) * wts[i];
                design(row, 2) = wts[i];
            }
            const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
            const double c = (design * coef - rhs).squaredNorm();
            if (std::isfinite(c) && c < best_cost)
            {
                best_cost = c;
                best = {coef[0], coef[1], width, width, splitting, coef[2]};
            }
        }
    }

    FitResult fit = least_squares_core(purcell_map_model(), best, trace, options);
    fit.values[2] = std::abs(fit.values[2]);
    fit.values[3] = std::abs(fit.values[3]);
    return fit;
}

std::vector<double> decay_model(const DecayHistogram &grid, std::span<const double> irf_weights, double lifetime_ps,
                                double amplitude, double background)
{
    require(lifetime_ps > 0.0, "lifetime must be positive");
    require(irf_weights.size() == grid.bin_centers_ps.size(), "IRF weights must match the histogram grid");
    const std::size_t n = grid.bin_centers_ps.size();
    std::vector<double> out(n, background);
    for (std::size_t j = 0; j < n; ++j)
    {
        if (irf_weights[j] == 0.0)
            continue;
        for (std::size_t i = j; i < n; ++i)
        {
            const double dt = grid.bin_centers_ps[i] - grid.bin_centers_ps[j];
            out[i] += amplitude * irf_weights[j] * std::exp(-dt / lifetime_ps);
        }
    }
    return out;
}

FitResult fit_decay(const DecayHistogram &histogram, const InstrumentResponse &irf, HistogramWeighting weighting,
                    const LeastSquaresOptions &options)
{
    histogram.validate();
    const std::size_t n = histogram.counts.size();
    const auto &t = histogram.bin_centers_ps;
    const auto &c = histogram.counts;
    const std::vector<double> w = irf.sampled(histogram);

    // Sparse IRF support.
    std::vector<std::size_t> support;
    const double wmax = *std::max_element(w.begin(), w.end());
    for (std::size_t j = 0; j < n; ++j)
        if (w[j] > 1e-15 * wmax)
            support.push_back(j);

    std::vector<double> inv_sigma(n, 1.0);
    LeastSquaresOptions opts = options;
    if (weighting == HistogramWeighting::poisson)
    {
        for (std::size_t i = 0; i < n; ++i)
            inv_sigma[i] = 1.0 / std::sqrt(std::max(c[i], 1.0));
        opts.scale_covariance = false;
    }

    // Initial guess: background from the late tail, lifetime from a log-linear tail fit.
    const std::size_t tail = std::max<std::size_t>(n / 10, 1);
    double background = 0.0;
    for (std::size_t i = n - tail; i < n; ++i)
        background += c[i];
    background /= static_cast<double>(tail);

    const auto ipeak = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    const double peak = c[ipeak] - background;
    const double irf_width = irf.is_gaussian() ? irf.sigma_ps() : 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, sw = 0;
    for (std::size_t i = ipeak; i < n; ++i)
    {
        if (t[i] - t[ipeak] < 2.0 * irf_width)
            continue;
        const double s = c[i] - background;
        if (s <= std::max(3.0 * std::sqrt(std::max(c[i], 1.0)), 0.05 * peak))
            break;
        const double wt = s * s / std::max(c[i], 1.0);
        const double ly = std::log(s);
        sx += wt * t[i];
        sy += wt * ly;
        sxx += wt * t[i] * t[i];
        sxy += wt * t[i] * ly;
        sw += wt;
    }
    double tau0 = 10.0 * histogram.bin_width_ps;
    if (sw > 0.0)
    {
        const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
        if (std::isfinite(slope) && slope < 0.0)
            tau0 = -1.0 / slope;
    }
    double amp0 = std::max(peak, 1.0);
    {
        const auto shape = decay_model(histogram, w, tau0, 1.0, 0.0);
        const double smax = *std::max_element(shape.begin(), shape.end());
        if (smax > 0.0)
            amp0 = std::max(peak, 1.0) / smax;
    }

    ResidualProblem problem;
    problem.residual_count = n;
    problem.names = {"lifetime", "amplitude", "background"};
    auto conv = [&](double tau, std::vector<double> &k, std::vector<double> &dk) {
        std::fill(k.begin(), k.end(), 0.0);
        std::fill(dk.begin(), dk.end(), 0.0);
        for (std::size_t j : support)
            for (std::size_t i = j; i < n; ++i)
            {
                const double dt = t[i] - t[j];
                const double e = w[j] * std::exp(-dt / tau);
                k[i] += e;
                dk[i] += e * dt / (tau * tau);
            }
    };
    std::vector<double> k(n), dk(n);
    problem.residuals = [&](std::span<const double> p, std::span<double> r) {
        const double tau = std::max(std::abs(p[0]), 1e-9);
        std::vector<double> kk(n), dd(n);
        conv(tau, kk, dd);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = (p[1] * kk[i] + p[2] - c[i]) * inv_sigma[i];
    };
    problem.jacobian = [&](std::span<const double> p, std::span<double> jac) {
        const double tau = std::max(std::abs(p[0]), 1e-9);
        const double sign = p[0] < 0.0 ? -1.0 : 1.0;
        conv(tau, k, dk);
        for (std::size_t i = 0; i < n; ++i)
        {
            jac[3 * i + 0] = p[1] * dk[i] * sign * inv_sigma[i];
            jac[3 * i + 1] = k[i] * inv_sigma[i];
            jac[3 * i + 2] = inv_sigma[i];
        }
    };

    FitResult fit = solve_least_squares(problem, {tau0, amp0, background}, opts);
    if (weighting == HistogramWeighting::poisson && fit.converged)
    {
        // Second pass with variances from the fitted model rather than the noisy counts,
        // which removes most of the low-count bias of count-based weights.
        const auto model = decay_model(histogram, w, std::max(std::abs(fit.values[0]), 1e-9), fit.values[1],
                                       fit.values[2]);
        for (std::size_t i = 0; i < n; ++i)
            inv_sigma[i] = 1.0 / std::sqrt(std::max(model[i], 1e-2));
        fit = solve_least_squares(problem, fit.values, opts);
    }
    fit.values[0] = std::abs(fit.values[0]);
    if (fit.values[0] < histogram.bin_width_ps)
    {
        fit.converged = false;
        fit.warnings.push_back("lifetime collapsed below the bin width");
    }
    if (!(std::abs(fit.values[1]) > 3.0 * fit.sigmas[1]))
        fit.warnings.push_back("decay amplitude is not significant above background");
    return fit;
}

double drift_corrected_purcell(double fitted_purcell, double drift_factor)
{
    require(drift_factor > 0.0, "drift factor must be positive");
    return fitted_purcell * drift_factor;
}
} // namespace fpcav
