#include "mixsa/newton/markov.hpp"

#include <random>
#include <stdexcept>
#include <vector>

#include "mixsa/mixture/mixture.hpp"

namespace mixsa::newton {

namespace {

std::discrete_distribution<std::size_t> pmf_sampler(const Eigen::VectorXd& pmf)
{
    return std::discrete_distribution<std::size_t>(pmf.data(), pmf.data() + pmf.size());
}

}  // namespace

Eigen::VectorXd markov_marginal_sample(std::span<const double> prefix, const MixingDensity& f0,
                                       const core::WeightSchedule& schedule, const Kernel& kernel,
                                       Rng& rng, std::size_t n_chains)
{
    if (n_chains < 1)
    {
        throw std::invalid_argument("markov_marginal_sample: n_chains must be >= 1");
    }
    // Jump distributions: posterior of f_{i-1} given X_i.
    std::vector<std::discrete_distribution<std::size_t>> jumps;
    std::vector<double> weights;
    MixingDensity f = f0;
    for (std::size_t i = 1; i <= prefix.size(); ++i)
    {
        jumps.push_back(pmf_sampler(mixture::posterior(f, kernel, prefix[i - 1]).pmf()));
        weights.push_back(schedule(i));
        f = newton_update(f, prefix[i - 1], weights.back(), kernel);
    }

    auto start = pmf_sampler(f0.pmf());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f0.size()));
    for (std::size_t c = 0; c < n_chains; ++c)
    {
        std::size_t z = start(rng);
        for (std::size_t i = 0; i < jumps.size(); ++i)
        {
            if (uniform01(rng) < weights[i])
            {
                z = jumps[i](rng);
            }
        }
        counts[static_cast<Eigen::Index>(z)] += 1.0;
    }
    return counts / static_cast<double>(n_chains);
}

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q)
{
    if (p.size() != q.size())
    {
        throw std::invalid_argument("total_variation: size mismatch");
    }
    return 0.5 * (p - q).cwiseAbs().sum();
}

}  // namespace mixsa::newton
