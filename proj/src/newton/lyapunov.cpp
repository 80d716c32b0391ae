#include "mixsa/newton/lyapunov.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/error.hpp"
#include "mixsa/mixture/divergence.hpp"

namespace mixsa::newton {

namespace {

void require_counting(const MixingDensity& phi)
{
    if (!phi.grid().is_counting())
    {
        throw std::invalid_argument("Lyapunov diagnostics require counting measure on Theta");
    }
}

}  // namespace

Eigen::VectorXd lyapunov_gradient(const MixingDensity& f_true, const MixingDensity& phi)
{
    require_counting(phi);
    if (!(f_true.grid() == phi.grid()))
    {
        throw std::invalid_argument("lyapunov_gradient: grids differ");
    }
    const auto d = static_cast<Eigen::Index>(phi.size());
    Eigen::VectorXd ratio = Eigen::VectorXd::Zero(d);
    Eigen::Index anchor = -1;  // last positive coordinate of f after reordering
    for (Eigen::Index k = 0; k < d; ++k)
    {
        const double fk = f_true.values()[k];
        if (fk > 0.0)
        {
            if (!(phi.values()[k] > 0.0))
            {
                throw std::invalid_argument(fmt::format(
                    "lyapunov_gradient: phi vanishes at index {} where f is positive", k));
            }
            ratio[k] = fk / phi.values()[k];
            anchor = k;
        }
    }
    Eigen::VectorXd grad = -ratio;
    for (Eigen::Index k = 0; k < d; ++k)
    {
        if (f_true.values()[k] > 0.0)
        {
            grad[k] += ratio[anchor];
        }
    }
    return grad;
}

double lyapunov_time_derivative(const MeanField& model, const MixingDensity& phi)
{
    const Eigen::VectorXd& pi_f = model.true_marginal();
    const Eigen::VectorXd pi_phi = model.marginal(phi);
    const auto& w = model.quadrature().weights;
    double integral = 0.0;
    for (Eigen::Index j = 0; j < pi_f.size(); ++j)
    {
        if (pi_f[j] == 0.0)
        {
            continue;
        }
        if (!(pi_phi[j] > 0.0))
        {
            throw NumericError("newton_estimator", "Pi_phi vanishes at a node where Pi_f > 0");
        }
        integral += w[static_cast<std::size_t>(j)] * pi_f[j] * pi_f[j] / pi_phi[j];
    }
    return 1.0 - integral;
}

double lyapunov_time_derivative(const MixingDensity& f_true, const MixingDensity& phi,
                                const Kernel& kernel, const XQuadrature& q)
{
    return lyapunov_time_derivative(MeanField(f_true, kernel, q), phi);
}

LyapunovReport lyapunov_report(const MeanField& model, const MixingDensity& phi)
{
    LyapunovReport r;
    r.value = mixture::kl_theta(model.truth(), phi);
    r.gradient = lyapunov_gradient(model.truth(), phi);
    r.time_derivative = lyapunov_time_derivative(model, phi);
    const Eigen::VectorXd pi_phi = model.marginal(phi);
    double mass = 0.0;
    for (Eigen::Index j = 0; j < pi_phi.size(); ++j)
    {
        mass += model.quadrature().weights[static_cast<std::size_t>(j)] * pi_phi[j];
    }
    r.jensen_slack = (1.0 - 1.0 / mass) - r.time_derivative;
    return r;
}

}  // namespace mixsa::newton
