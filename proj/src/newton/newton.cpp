#include "mixsa/newton/newton.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/error.hpp"
#include "mixsa/mixture/divergence.hpp"
#include "mixsa/mixture/mixture.hpp"

namespace mixsa::newton {

Eigen::VectorXd H_map(double x, const MixingDensity& phi, const Kernel& kernel)
{
    try
    {
        return mixture::posterior_values(phi, kernel.log_likelihoods(x, phi.grid())) - phi.values();
    }
    catch (const NumericError&)
    {
        throw NumericError("newton_estimator", fmt::format("zero marginal at x={}", x));
    }
}

MixingDensity newton_update(const MixingDensity& f_prev, double x, double w, const Kernel& kernel)
{
    if (!(w > 0.0) || !(w <= 1.0))
    {
        throw std::invalid_argument(fmt::format("newton_update: weight {} outside (0, 1]", w));
    }
    return MixingDensity(f_prev.grid_ptr(), f_prev.values() + w * H_map(x, f_prev, kernel));
}

MeanField::MeanField(MixingDensity f_true, Kernel kernel, XQuadrature q)
    : f_(std::move(f_true)), kernel_(std::move(kernel)), q_(std::move(q))
{
    lik_ = mixture::likelihood_matrix(kernel_, f_.grid(), q_);
    pi_f_ = lik_ * f_.pmf();
}

Eigen::VectorXd MeanField::marginal(const MixingDensity& phi) const
{
    if (!(phi.grid() == f_.grid()))
    {
        throw std::invalid_argument("MeanField: phi lives on a different grid");
    }
    return lik_ * phi.pmf();
}

Eigen::VectorXd MeanField::T_values(const MixingDensity& phi) const
{
    const Eigen::VectorXd pi_phi = marginal(phi);
    Eigen::VectorXd ratio(pi_phi.size());
    for (Eigen::Index j = 0; j < pi_phi.size(); ++j)
    {
        const double w = q_.weights[static_cast<std::size_t>(j)];
        if (pi_f_[j] == 0.0)
        {
            ratio[j] = 0.0;
        }
        else if (pi_phi[j] > 0.0)
        {
            ratio[j] = w * pi_f_[j] / pi_phi[j];
        }
        else
        {
            throw NumericError("newton_estimator",
                               fmt::format("Pi_phi vanishes at node x={} where Pi_f > 0",
                                           q_.nodes[static_cast<std::size_t>(j)]));
        }
    }
    return (lik_.transpose() * ratio).cwiseProduct(phi.values());
}

Eigen::VectorXd MeanField::h(const MixingDensity& phi) const
{
    return T_values(phi) - phi.values();
}

MixingDensity MeanField::T(const MixingDensity& phi) const
{
    return MixingDensity(phi.grid_ptr(), T_values(phi));
}

double MeanField::kl_marginal(const MixingDensity& phi) const
{
    return mixture::kl_from_marginals(pi_f_, marginal(phi), q_.weights);
}

Eigen::VectorXd h_map(const MixingDensity& phi, const MixingDensity& f_true, const Kernel& kernel,
                      const XQuadrature& q)
{
    return MeanField(f_true, kernel, q).h(phi);
}

MixingDensity T_map(const MixingDensity& phi, const MixingDensity& f_true, const Kernel& kernel,
                    const XQuadrature& q)
{
    return MeanField(f_true, kernel, q).T(phi);
}

std::uint64_t order_hash(std::span<const double> data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : data)
    {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b)
        {
            h ^= (bits >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

namespace {

NewtonTraceRow make_row(std::size_t n, const MixingDensity& f, const MeanField* truth)
{
    NewtonTraceRow row;
    row.n = n;
    row.f = f.values();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.kl_theta = nan;
    row.kl_marginal = nan;
    if (truth != nullptr)
    {
        if (truth->truth().grid() == f.grid())
        {
            row.kl_theta = mixture::kl_theta(truth->truth(), f);
        }
        row.kl_marginal = truth->kl_marginal(f);
    }
    return row;
}

}  // namespace

NewtonRun run_newton(std::span<const double> data, const MixingDensity& f0,
                     const core::WeightSchedule& schedule, const Kernel& kernel,
                     const NewtonOptions& options)
{
    if (data.empty())
    {
        throw std::invalid_argument("run_newton: no data");
    }
    const MeanField* truth = options.truth;
    if (truth != nullptr && !(truth->truth().grid() == f0.grid()))
    {
        throw std::invalid_argument("run_newton: truth and f0 live on different grids");
    }
    NewtonRun run{f0, {}, schedule.describe(), order_hash(data)};
    if (options.stride > 0)
    {
        run.trace.push_back(make_row(0, f0, truth));
    }
    MixingDensity f = f0;
    for (std::size_t i = 1; i <= data.size(); ++i)
    {
        try
        {
            f = newton_update(f, data[i - 1], schedule(i), kernel);
        }
        catch (const NumericError& e)
        {
            throw e.at_iteration(i);
        }
        if (options.stride > 0 && (i % options.stride == 0 || i == data.size()))
        {
            run.trace.push_back(make_row(i, f, truth));
        }
    }
    run.estimate = f;
    return run;
}

}  // namespace mixsa::newton
