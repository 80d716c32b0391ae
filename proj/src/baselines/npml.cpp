#include "mixsa/baselines/npml.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixsa/error.hpp"

namespace mixsa::baselines {

using mixture::MixingDensity;

double NpmlResult::min_increment() const
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < loglik.size(); ++i)
    {
        m = std::min(m, loglik[i] - loglik[i - 1]);
    }
    return m;
}

NpmlResult npml_em_weighted(std::span<const double> x, std::span<const double> a,
                            const MixingDensity& start, const mixture::Kernel& kernel,
                            const EmOptions& options)
{
    if (x.empty())
    {
        throw std::invalid_argument("npml_em: no data");
    }
    if (a.size() != x.size())
    {
        throw std::invalid_argument("npml_em: one weight per data point expected");
    }
    const auto& grid = start.grid();
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto d = static_cast<Eigen::Index>(grid.size());

    // Row-scaled likelihoods L_ik = p(x_i | theta_k) mu_k / max_k p(x_i | theta_k).
    Eigen::MatrixXd lik(n, d);
    Eigen::VectorXd row_log_max(n);
    Eigen::VectorXd weight(n);
    double weight_total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const Eigen::VectorXd ll = kernel.log_likelihoods(x[static_cast<std::size_t>(i)], grid);
        const double top = ll.maxCoeff();
        if (!std::isfinite(top))
        {
            throw NumericError("baselines", "observation has zero likelihood at every grid point");
        }
        row_log_max[i] = top;
        for (Eigen::Index k = 0; k < d; ++k)
        {
            lik(i, k) = std::exp(ll[k] - top) * grid.weight(static_cast<std::size_t>(k));
        }
        weight[i] = a[static_cast<std::size_t>(i)];
        if (!(weight[i] >= 0.0))
        {
            throw std::invalid_argument("npml_em: weights must be nonnegative");
        }
        weight_total += weight[i];
    }
    if (!(weight_total > 0.0))
    {
        throw std::invalid_argument("npml_em: weights sum to zero");
    }

    const Eigen::Map<const Eigen::VectorXd> mu(grid.weights().data(), d);
    Eigen::VectorXd f = start.values();
    auto loglik_of = [&](const Eigen::VectorXd& marg) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            if (weight[i] > 0.0)
            {
                s += weight[i] * (std::log(marg[i]) + row_log_max[i]);
            }
        }
        return s;
    };

    NpmlResult result{start, {}, 0, false};
    Eigen::VectorXd marg = lik * f;
    result.loglik.push_back(loglik_of(marg));
    if (d == 1)
    {
        result.converged = true;
        return result;
    }
    for (std::size_t it = 1; it <= options.max_iters; ++it)
    {
        if ((marg.array() <= 0.0).any())
        {
            throw NumericError("baselines", "zero marginal inside EM", it);
        }
        const Eigen::VectorXd ratio = weight.array() / marg.array();
        const Eigen::VectorXd score = (lik.transpose() * ratio).array() / mu.array();
        f = (f.array() * score.array()).matrix() / weight_total;
        f /= f.dot(mu);
        marg = lik * f;
        result.loglik.push_back(loglik_of(marg));
        result.iterations = it;
        if (result.loglik[it] - result.loglik[it - 1] < options.tol)
        {
            result.converged = true;
            break;
        }
    }
    result.estimate = MixingDensity(start.grid_ptr(), f);
    return result;
}

NpmlResult npml_em(std::span<const double> data, const mixture::GridPtr& grid,
                   const mixture::Kernel& kernel, const EmOptions& options)
{
    const std::vector<double> ones(data.size(), 1.0);
    return npml_em_weighted(data, ones, MixingDensity::uniform(grid), kernel, options);
}

}  // namespace mixsa::baselines
