#include "mixsa/baselines/two_means_em.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mixsa::baselines {

namespace {

double component(double x, double mu, double sigma)
{
    const double t = (x - mu) / sigma;
    return std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

std::array<double, 2> em_step(std::span<const double> data, double lambda, double sigma,
                              const std::array<double, 2>& mu)
{
    double r1 = 0.0, s1 = 0.0, r2 = 0.0, s2 = 0.0;
    for (double x : data)
    {
        const double p1 = lambda * component(x, mu[0], sigma);
        const double p2 = (1.0 - lambda) * component(x, mu[1], sigma);
        const double r = p1 / (p1 + p2);
        r1 += r;
        s1 += r * x;
        r2 += 1.0 - r;
        s2 += (1.0 - r) * x;
    }
    return {r1 > 0.0 ? s1 / r1 : mu[0], r2 > 0.0 ? s2 / r2 : mu[1]};
}

}  // namespace

std::vector<std::array<double, 2>> two_means_em(std::span<const double> data, double lambda,
                                                double sigma, std::array<double, 2> mu0,
                                                std::size_t iters)
{
    if (data.empty())
    {
        throw std::invalid_argument("two_means_em: no data");
    }
    std::vector<std::array<double, 2>> out{mu0};
    for (std::size_t i = 0; i < iters; ++i)
    {
        out.push_back(em_step(data, lambda, sigma, out.back()));
    }
    return out;
}

double two_means_loglik(std::span<const double> data, double lambda, double sigma,
                        const std::array<double, 2>& mu)
{
    double s = 0.0;
    for (double x : data)
    {
        s += std::log(lambda * component(x, mu[0], sigma) + (1.0 - lambda) * component(x, mu[1], sigma));
    }
    return s;
}

TwoMeansFit two_means_em_converged(std::span<const double> data, double lambda, double sigma,
                                   std::array<double, 2> mu0, double tol, std::size_t max_iters)
{
    TwoMeansFit fit{mu0, two_means_loglik(data, lambda, sigma, mu0), 0};
    while (fit.iterations < max_iters)
    {
        const auto next = em_step(data, lambda, sigma, fit.mu);
        const double ll = two_means_loglik(data, lambda, sigma, next);
        ++fit.iterations;
        const double gain = ll - fit.loglik;
        fit.mu = next;
        fit.loglik = ll;
        if (gain < tol)
        {
            break;
        }
    }
    return fit;
}

}  // namespace mixsa::baselines
