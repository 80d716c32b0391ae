#include "mixsa/mixture/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixsa/error.hpp"
#include "mixsa/mixture/mixture.hpp"

namespace mixsa::mixture {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

double marginal(const MixingDensity& phi, const Kernel& kernel, double x)
{
    const Eigen::VectorXd lik = kernel.likelihoods(x, phi.grid());
    return lik.dot(phi.pmf());
}

Eigen::VectorXd posterior_values(const MixingDensity& phi, const Eigen::VectorXd& log_lik)
{
    const ThetaGrid& grid = phi.grid();
    const Eigen::Index d = log_lik.size();
    Eigen::VectorXd a(d);
    double top = -inf;
    for (Eigen::Index k = 0; k < d; ++k)
    {
        a[k] = phi.values()[k] > 0.0 ? log_lik[k] + std::log(phi.values()[k]) : -inf;
        top = std::max(top, a[k]);
    }
    if (!(top > -inf) || !std::isfinite(top))
    {
        throw NumericError("mixture_model", "zero marginal: p(x|theta) phi(theta) vanishes on the grid");
    }
    double mass = 0.0;
    for (Eigen::Index k = 0; k < d; ++k)
    {
        a[k] = std::exp(a[k] - top);
        mass += a[k] * grid.weight(static_cast<std::size_t>(k));
    }
    return a / mass;
}

MixingDensity posterior(const MixingDensity& phi, const Kernel& kernel, double x)
{
    try
    {
        return MixingDensity(phi.grid_ptr(), posterior_values(phi, kernel.log_likelihoods(x, phi.grid())));
    }
    catch (const NumericError&)
    {
        throw NumericError("mixture_model", "zero marginal at x=" + std::to_string(x));
    }
}

Eigen::VectorXd marginal_on_nodes(const MixingDensity& phi, const Eigen::MatrixXd& lik)
{
    return lik * phi.pmf();
}

double quadrature_mass(const MixingDensity& f, const Kernel& kernel, const XQuadrature& q)
{
    const Eigen::VectorXd m = marginal_on_nodes(f, likelihood_matrix(kernel, f.grid(), q));
    double total = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j)
    {
        total += q.weights[j] * m[static_cast<Eigen::Index>(j)];
    }
    return total;
}

double kl_theta(const MixingDensity& psi, const MixingDensity& phi)
{
    if (!(psi.grid() == phi.grid()))
    {
        throw std::invalid_argument("kl_theta: densities live on different grids");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k)
    {
        if (psi[k] == 0.0)
        {
            continue;
        }
        if (phi[k] == 0.0)
        {
            return inf;
        }
        total += psi.grid().weight(k) * psi[k] * std::log(psi[k] / phi[k]);
    }
    return total;
}

double kl_from_marginals(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         std::span<const double> weights)
{
    if (a.size() != b.size() || static_cast<std::size_t>(a.size()) != weights.size())
    {
        throw std::invalid_argument("kl_from_marginals: size mismatch");
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j)
    {
        if (a[j] == 0.0)
        {
            continue;
        }
        if (b[j] == 0.0)
        {
            return inf;
        }
        total += weights[static_cast<std::size_t>(j)] * a[j] * std::log(a[j] / b[j]);
    }
    return total;
}

double kl_marginal(const MixingDensity& f, const MixingDensity& phi, const Kernel& kernel,
                   const XQuadrature& q)
{
    const Eigen::VectorXd a = marginal_on_nodes(f, likelihood_matrix(kernel, f.grid(), q));
    const Eigen::VectorXd b = marginal_on_nodes(phi, likelihood_matrix(kernel, phi.grid(), q));
    return kl_from_marginals(a, b, q.weights);
}

}  // namespace mixsa::mixture
