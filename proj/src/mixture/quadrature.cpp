#include "mixsa/mixture/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace mixsa::mixture {

XQuadrature trapezoid_rule(double lo, double hi, double spacing)
{
    if (!(hi > lo) || !(spacing > 0.0))
    {
        throw std::invalid_argument("trapezoid_rule: need hi > lo and spacing > 0");
    }
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / spacing - 1e-9));
    XQuadrature q;
    q.kind = XQuadrature::Kind::trapezoid;
    q.nodes.resize(panels + 1);
    q.weights.assign(panels + 1, 0.0);
    for (std::size_t j = 0; j <= panels; ++j)
    {
        q.nodes[j] = std::min(hi, lo + spacing * static_cast<double>(j));
    }
    q.nodes.back() = hi;
    for (std::size_t j = 0; j < panels; ++j)
    {
        const double width = q.nodes[j + 1] - q.nodes[j];
        q.weights[j] += width / 2.0;
        q.weights[j + 1] += width / 2.0;
    }
    return q;
}

XQuadrature quadrature_for(const Kernel& kernel, const ThetaGrid& grid)
{
    switch (kernel.family())
    {
    case Kernel::Family::normal_location: {
        const double s = kernel.sigma();
        return trapezoid_rule(grid.points().front() - 8.0 * s, grid.points().back() + 8.0 * s,
                              s / 20.0);
    }
    case Kernel::Family::poisson: {
        const double lambda = grid.points().back();
        XQuadrature q;
        double cdf = 0.0;
        for (long x = 0;; ++x)
        {
            const auto dx = static_cast<double>(x);
            q.nodes.push_back(dx);
            q.weights.push_back(1.0);
            cdf += kernel.density(dx, lambda);
            if (dx > lambda && 1.0 - cdf < 1e-12)
            {
                break;
            }
        }
        return q;
    }
    case Kernel::Family::tabulated: {
        XQuadrature q;
        q.nodes = kernel.support();
        q.weights.assign(q.nodes.size(), 1.0);
        return q;
    }
    }
    return {};
}

Eigen::MatrixXd likelihood_matrix(const Kernel& kernel, const ThetaGrid& grid,
                                  const XQuadrature& q)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(q.size()), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t j = 0; j < q.size(); ++j)
    {
        m.row(static_cast<Eigen::Index>(j)) = kernel.likelihoods(q.nodes[j], grid).transpose();
    }
    return m;
}

double kernel_normalization_error(const Kernel& kernel, const ThetaGrid& grid,
                                  const XQuadrature& q)
{
    const Eigen::MatrixXd m = likelihood_matrix(kernel, grid, q);
    const Eigen::Map<const Eigen::VectorXd> w(q.weights.data(),
                                              static_cast<Eigen::Index>(q.weights.size()));
    const Eigen::VectorXd totals = m.transpose() * w;
    return (totals.array() - 1.0).abs().maxCoeff();
}

}  // namespace mixsa::mixture
