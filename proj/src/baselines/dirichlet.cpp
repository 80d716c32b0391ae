#include "mixsa/baselines/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/error.hpp"

namespace mixsa::baselines {

using mixture::MixingDensity;

DPPrior::DPPrior(double a, MixingDensity base) : alpha(a), f0(std::move(base))
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
    {
        throw std::invalid_argument(fmt::format("DP prior: alpha={} must be positive", alpha));
    }
}

MixingDensity dpp_one_step_posterior_mean(double x, const DPPrior& prior,
                                          const mixture::Kernel& kernel)
{
    const auto& grid = prior.f0.grid();
    const Eigen::VectorXd lik = kernel.likelihoods(x, grid);
    const Eigen::VectorXd joint = (lik.array() * prior.f0.pmf().array()).matrix();
    const double m = joint.sum();
    if (!(m > 0.0))
    {
        throw NumericError("baselines", fmt::format("zero marginal at x={} under the base density", x));
    }
    const double a = prior.alpha;
    Eigen::VectorXd pmf = (a / (a + 1.0)) * prior.f0.pmf() + (1.0 / (a + 1.0)) * (joint / m);
    for (std::size_t k = 0; k < grid.size(); ++k)
    {
        pmf[static_cast<Eigen::Index>(k)] /= grid.weight(k);
    }
    return MixingDensity(prior.f0.grid_ptr(), pmf);
}

MixingDensity npb_exact_enumeration(std::span<const double> data, const DPPrior& prior,
                                    const mixture::Kernel& kernel)
{
    const auto n = data.size();
    const auto& grid = prior.f0.grid();
    const auto d = grid.size();
    if (n == 0)
    {
        throw std::invalid_argument("npb_exact_enumeration: no data");
    }
    if (n > kMaxEnumerationSize || std::pow(static_cast<double>(d), static_cast<double>(n)) > 1e8)
    {
        throw std::invalid_argument(fmt::format(
            "npb_exact_enumeration: {}^{} assignments exceed the enumeration budget", d, n));
    }
    const Eigen::VectorXd base = prior.f0.pmf();
    std::vector<Eigen::VectorXd> lik;
    for (double x : data)
    {
        lik.push_back(kernel.likelihoods(x, grid));
    }
    const double a = prior.alpha;

    std::vector<std::size_t> assign(n, 0);
    std::vector<double> counts(d, 0.0);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    double total = 0.0;
    while (true)
    {
        std::fill(counts.begin(), counts.end(), 0.0);
        double weight = 1.0;
        for (std::size_t i = 0; i < n && weight > 0.0; ++i)
        {
            const auto t = assign[i];
            const auto ti = static_cast<Eigen::Index>(t);
            weight *= (a * base[ti] + counts[t]) / (a + static_cast<double>(i)) * lik[i][ti];
            counts[t] += 1.0;
        }
        if (weight > 0.0)
        {
            total += weight;
            for (std::size_t k = 0; k < d; ++k)
            {
                const auto ki = static_cast<Eigen::Index>(k);
                acc[ki] += weight * (a * base[ki] + counts[k]) / (a + static_cast<double>(n));
            }
        }
        std::size_t pos = 0;
        while (pos < n && ++assign[pos] == d)
        {
            assign[pos++] = 0;
        }
        if (pos == n)
        {
            break;
        }
    }
    if (!(total > 0.0))
    {
        throw NumericError("baselines", "exact enumeration: data have zero probability");
    }
    Eigen::VectorXd values = acc / total;
    for (std::size_t k = 0; k < d; ++k)
    {
        values[static_cast<Eigen::Index>(k)] /= grid.weight(k);
    }
    return MixingDensity::normalized(prior.f0.grid_ptr(), values);
}

SisResult npb_sequential_imputation(std::span<const double> data, const DPPrior& prior,
                                    const mixture::Kernel& kernel, const SisOptions& options,
                                    Rng& rng)
{
    const auto N = options.particles;
    if (N == 0)
    {
        throw std::invalid_argument("sequential imputation: need at least one particle");
    }
    if (data.empty())
    {
        throw std::invalid_argument("sequential imputation: no data");
    }
    const auto& grid = prior.f0.grid();
    const auto d = grid.size();
    const auto di = static_cast<Eigen::Index>(d);
    const Eigen::VectorXd base = prior.f0.pmf();
    const double a = prior.alpha;

    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), di);
    std::vector<double> log_w(N, 0.0);
    Eigen::VectorXd q(di);
    SisResult result{prior.f0, Eigen::VectorXd::Zero(di), 0.0, 0};
    Eigen::MatrixXd means(static_cast<Eigen::Index>(N), di);

    auto normalized_weights = [&]() {
        const double top = *std::max_element(log_w.begin(), log_w.end());
        if (!std::isfinite(top))
        {
            throw NumericError("baselines",
                               "sequential imputation: every particle weight underflowed; "
                               "increase the particle count or enable resampling");
        }
        std::vector<double> w(N);
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j)
        {
            w[j] = std::exp(log_w[j] - top);
            s += w[j];
        }
        for (double& v : w)
        {
            v /= s;
        }
        return w;
    };

    for (std::size_t i = 0; i < data.size(); ++i)
    {
        const Eigen::VectorXd lik = kernel.likelihoods(data[i], grid);
        const double denom = a + static_cast<double>(i);
        for (std::size_t j = 0; j < N; ++j)
        {
            const auto ji = static_cast<Eigen::Index>(j);
            q = ((a * base.array() + counts.row(ji).transpose().array()) / denom) * lik.array();
            const double pred = q.sum();
            if (!(pred > 0.0))
            {
                log_w[j] = -std::numeric_limits<double>::infinity();
                means.row(ji) = base.transpose();
                continue;
            }
            log_w[j] += std::log(pred);
            if (i + 1 == data.size())
            {
                // Rao-Blackwellized last allocation: E[G | theta_1..n-1, x_1..n].
                means.row(ji) = ((a * base.array() + counts.row(ji).transpose().array() + q.array() / pred) /
                                 (a + static_cast<double>(data.size())))
                                    .transpose();
            }
            const double u = uniform01(rng) * pred;
            double c = 0.0;
            Eigen::Index pick = di - 1;
            for (Eigen::Index k = 0; k < di; ++k)
            {
                c += q[k];
                if (u < c)
                {
                    pick = k;
                    break;
                }
            }
            while (q[pick] <= 0.0 && pick > 0)
            {
                --pick;
            }
            counts(ji, pick) += 1.0;
        }
        if (options.resample && i + 1 < data.size())
        {
            const auto w = normalized_weights();
            double sq = 0.0;
            for (double v : w)
            {
                sq += v * v;
            }
            if (1.0 / sq < 0.5 * static_cast<double>(N))
            {
                Eigen::MatrixXd next(counts.rows(), counts.cols());
                std::vector<double> cdf(N);
                std::partial_sum(w.begin(), w.end(), cdf.begin());
                for (std::size_t j = 0; j < N; ++j)
                {
                    const double u = uniform01(rng) * cdf.back();
                    auto src = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
                    src = std::min(src, N - 1);
                    next.row(static_cast<Eigen::Index>(j)) = counts.row(static_cast<Eigen::Index>(src));
                }
                counts = std::move(next);
                std::fill(log_w.begin(), log_w.end(), 0.0);
                ++result.resamplings;
            }
        }
    }

    const auto w = normalized_weights();
    Eigen::VectorXd estimate = Eigen::VectorXd::Zero(di);
    double sq = 0.0;
    for (std::size_t j = 0; j < N; ++j)
    {
        const auto ji = static_cast<Eigen::Index>(j);
        estimate += w[j] * means.row(ji).transpose();
        sq += w[j] * w[j];
    }
    Eigen::VectorXd var = Eigen::VectorXd::Zero(di);
    for (std::size_t j = 0; j < N; ++j)
    {
        const Eigen::VectorXd dev = means.row(static_cast<Eigen::Index>(j)).transpose() - estimate;
        var += (w[j] * w[j]) * dev.cwiseProduct(dev);
    }
    result.standard_error = var.cwiseSqrt();
    result.ess = 1.0 / sq;
    for (std::size_t k = 0; k < d; ++k)
    {
        const auto ki = static_cast<Eigen::Index>(k);
        estimate[ki] /= grid.weight(k);
        result.standard_error[ki] /= grid.weight(k);
    }
    result.estimate = MixingDensity::normalized(prior.f0.grid_ptr(), estimate);
    return result;
}

}  // namespace mixsa::baselines
