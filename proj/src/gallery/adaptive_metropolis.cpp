#include "mixsa/gallery/adaptive_metropolis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/error.hpp"

namespace mixsa::gallery {

double am_default_scale(std::size_t d)
{
    return 2.4 * 2.4 / static_cast<double>(d);
}

AMState am_initial(const LogTarget& target, Eigen::VectorXd z0, Eigen::VectorXd mu0,
                   Eigen::MatrixXd sigma0, double c)
{
    const auto d = z0.size();
    if (d == 0 || mu0.size() != d || sigma0.rows() != d || sigma0.cols() != d)
    {
        throw std::invalid_argument("am_initial: z0, mu0 and sigma0 dimensions disagree");
    }
    AMState s;
    s.z = std::move(z0);
    s.mu = std::move(mu0);
    s.sigma = std::move(sigma0);
    s.c = c > 0.0 ? c : am_default_scale(static_cast<std::size_t>(d));
    s.log_target_z = target(s.z);
    if (!std::isfinite(s.log_target_z))
    {
        throw std::invalid_argument("am_initial: target is not finite at the starting point");
    }
    return s;
}

void am_moment_update(Eigen::VectorXd& mu, Eigen::MatrixXd& sigma, const Eigen::VectorXd& z,
                      double w)
{
    const Eigen::VectorXd dev = z - mu;
    sigma = (1.0 - w) * sigma + w * dev * dev.transpose();
    mu = (1.0 - w) * mu + w * z;
}

void am_step(AMState& state, const LogTarget& target, double w, Rng& rng)
{
    const auto d = state.z.size();
    Eigen::MatrixXd cov = state.c * state.sigma;
    cov.diagonal().array() += kAmEpsilon;
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
    {
        throw NumericError("sa_gallery", "adaptive Metropolis proposal covariance is not positive definite",
                           state.n + 1);
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd e(d);
    for (Eigen::Index i = 0; i < d; ++i)
    {
        e[i] = normal(rng);
    }
    const Eigen::VectorXd proposal = state.z + llt.matrixL() * e;
    const double lp = target(proposal);
    const double u = uniform01(rng);
    if (!std::isfinite(lp))
    {
        ++state.rejected_nonfinite;
    }
    else if (lp >= state.log_target_z || u < std::exp(lp - state.log_target_z))
    {
        state.z = proposal;
        state.log_target_z = lp;
        ++state.accepted;
    }
    am_moment_update(state.mu, state.sigma, state.z, w);
    ++state.n;
}

AMRun run_am(const LogTarget& target, AMState initial, const core::WeightSchedule& schedule,
             std::size_t n, Rng& rng, std::size_t stride)
{
    if (n == 0)
    {
        throw std::invalid_argument("run_am: n must be positive");
    }
    stride = std::max<std::size_t>(stride, 1);
    AMRun run;
    run.final = std::move(initial);
    auto& s = run.final;
    const std::size_t start = s.n;
    run.trace.push_back({s.n, s.mu, s.sigma, 0.0});
    for (std::size_t i = 1; i <= n; ++i)
    {
        am_step(s, target, schedule(start + i), rng);
        if (i % stride == 0 || i == n)
        {
            run.trace.push_back(
                {s.n, s.mu, s.sigma, static_cast<double>(s.accepted) / static_cast<double>(s.n)});
        }
    }
    return run;
}

}  // namespace mixsa::gallery
