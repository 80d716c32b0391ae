#include "mixsa/gallery/saem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mixsa::gallery {

namespace {

double log_normal(double x, double mu, double sigma)
{
    const double t = (x - mu) / sigma;
    return -0.5 * t * t - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

void check(const SAEMToyModel& model, std::span<const double> data)
{
    if (data.empty())
    {
        throw std::invalid_argument("saem: empty data");
    }
    if (!(model.lambda > 0.0 && model.lambda < 1.0) || !(model.sigma > 0.0))
    {
        throw std::invalid_argument("saem: need lambda in (0, 1) and sigma > 0");
    }
}

}  // namespace

double responsibility(const SAEMToyModel& model, double x, const std::array<double, 2>& mu)
{
    const double a = std::log(model.lambda) + log_normal(x, mu[0], model.sigma);
    const double b = std::log1p(-model.lambda) + log_normal(x, mu[1], model.sigma);
    return 1.0 / (1.0 + std::exp(b - a));
}

double saem_loglik(const SAEMToyModel& model, std::span<const double> data,
                   const std::array<double, 2>& mu)
{
    double total = 0.0;
    for (double x : data)
    {
        const double a = std::log(model.lambda) + log_normal(x, mu[0], model.sigma);
        const double b = std::log1p(-model.lambda) + log_normal(x, mu[1], model.sigma);
        const double top = std::max(a, b);
        total += top + std::log(std::exp(a - top) + std::exp(b - top));
    }
    return total;
}

MixtureStats expected_stats(const SAEMToyModel& model, std::span<const double> data,
                            const std::array<double, 2>& mu)
{
    MixtureStats s;
    for (double x : data)
    {
        const double r = responsibility(model, x, mu);
        s.count[0] += r;
        s.sum[0] += r * x;
        s.count[1] += 1.0 - r;
        s.sum[1] += (1.0 - r) * x;
    }
    return s;
}

std::array<double, 2> m_step(const MixtureStats& s, const std::array<double, 2>& previous)
{
    std::array<double, 2> mu = previous;
    for (std::size_t k = 0; k < 2; ++k)
    {
        if (s.count[k] > 0.0)
        {
            mu[k] = s.sum[k] / s.count[k];
        }
    }
    return mu;
}

std::vector<SAEMTraceRow> run_saem(const SAEMToyModel& model, std::span<const double> data,
                                   const core::WeightSchedule& schedule, const SAEMOptions& options,
                                   Rng& rng)
{
    check(model, data);
    if (options.m == 0)
    {
        throw std::invalid_argument("run_saem: m must be >= 1");
    }
    std::array<double, 2> mu = options.mu0;
    MixtureStats blended = expected_stats(model, data, mu);
    std::vector<SAEMTraceRow> trace;
    trace.push_back({0, mu, saem_loglik(model, data, mu)});
    std::vector<double> resp(data.size());
    for (std::size_t n = 1; n <= options.iterations; ++n)
    {
        MixtureStats draw;
        if (options.exact_e)
        {
            draw = expected_stats(model, data, mu);
        }
        else
        {
            for (std::size_t i = 0; i < data.size(); ++i)
            {
                resp[i] = responsibility(model, data[i], mu);
            }
            const double scale = 1.0 / static_cast<double>(options.m);
            for (std::size_t j = 0; j < options.m; ++j)
            {
                for (std::size_t i = 0; i < data.size(); ++i)
                {
                    const std::size_t k = uniform01(rng) < resp[i] ? 0 : 1;
                    draw.count[k] += scale;
                    draw.sum[k] += scale * data[i];
                }
            }
        }
        const double w = schedule(n);
        for (std::size_t k = 0; k < 2; ++k)
        {
            blended.count[k] = (1.0 - w) * blended.count[k] + w * draw.count[k];
            blended.sum[k] = (1.0 - w) * blended.sum[k] + w * draw.sum[k];
        }
        mu = m_step(blended, mu);
        trace.push_back({n, mu, saem_loglik(model, data, mu)});
    }
    return trace;
}

std::vector<double> saem_simulate(const SAEMToyModel& model, const std::array<double, 2>& mu,
                                  std::size_t n, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, model.sigma);
    std::vector<double> data(n);
    for (double& x : data)
    {
        const std::size_t k = uniform01(rng) < model.lambda ? 0 : 1;
        x = mu[k] + normal(rng);
    }
    return data;
}

}  // namespace mixsa::gallery
