#include "mixsa/mixture/simulate.hpp"

#include <random>
#include <stdexcept>

namespace mixsa::mixture {

std::vector<double> Observations::first_column() const
{
    std::vector<double> out(rows());
    for (std::size_t i = 0; i < rows(); ++i)
    {
        out[i] = x(static_cast<Eigen::Index>(i), 0);
    }
    return out;
}

ThetaSampler grid_sampler(const MixingDensity& f)
{
    const Eigen::VectorXd pmf = f.pmf();
    std::vector<double> probs(pmf.data(), pmf.data() + pmf.size());
    std::vector<double> points = f.grid().points();
    return [probs = std::move(probs), points = std::move(points)](Rng& rng) {
        std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
        return points[pick(rng)];
    };
}

ThetaSampler beta_mixture_sampler(std::vector<double> weights, std::vector<double> a,
                                  std::vector<double> b)
{
    if (weights.empty() || weights.size() != a.size() || weights.size() != b.size())
    {
        throw std::invalid_argument("beta_mixture_sampler: component lists differ in length");
    }
    return [weights = std::move(weights), a = std::move(a), b = std::move(b)](Rng& rng) {
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        const std::size_t c = pick(rng);
        const double ga = std::gamma_distribution<double>(a[c], 1.0)(rng);
        const double gb = std::gamma_distribution<double>(b[c], 1.0)(rng);
        return ga / (ga + gb);
    };
}

Observations sample_mixture(const ThetaSampler& theta, const Kernel& kernel, Rng& rng,
                            std::size_t n, std::size_t r)
{
    if (n < 1 || r < 1)
    {
        throw std::invalid_argument("sample_mixture: need n >= 1 and r >= 1");
    }
    Observations obs;
    obs.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
    obs.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        obs.theta[i] = theta(rng);
        for (std::size_t j = 0; j < r; ++j)
        {
            obs.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                kernel.sample(obs.theta[i], rng);
        }
    }
    return obs;
}

Observations sample_mixture(const MixingDensity& f, const Kernel& kernel, Rng& rng, std::size_t n,
                            std::size_t r)
{
    return sample_mixture(grid_sampler(f), kernel, rng, n, r);
}

CsvTable dataset_table(const Observations& obs, std::size_t rep_id, bool with_latent)
{
    CsvTable t;
    t.header = {"rep_id", "row_id"};
    for (std::size_t j = 1; j <= obs.replicates(); ++j)
    {
        t.header.push_back("x_" + std::to_string(j));
    }
    if (with_latent)
    {
        t.header.emplace_back("theta_latent");
    }
    for (std::size_t i = 0; i < obs.rows(); ++i)
    {
        std::vector<std::string> row{std::to_string(rep_id), std::to_string(i)};
        for (std::size_t j = 0; j < obs.replicates(); ++j)
        {
            row.push_back(
                format_double(obs.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
        if (with_latent)
        {
            row.push_back(format_double(obs.theta[i]));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Observations read_dataset(const CsvTable& table, long rep_id)
{
    const std::size_t rep_col = table.column("rep_id");
    std::vector<std::size_t> x_cols;
    for (std::size_t j = 1;; ++j)
    {
        const std::string name = "x_" + std::to_string(j);
        bool found = false;
        for (std::size_t c = 0; c < table.header.size(); ++c)
        {
            if (table.header[c] == name)
            {
                x_cols.push_back(c);
                found = true;
            }
        }
        if (!found)
        {
            break;
        }
    }
    if (x_cols.empty())
    {
        throw std::runtime_error("dataset CSV has no x_1 column");
    }
    std::vector<const std::vector<std::string>*> selected;
    for (const auto& row : table.rows)
    {
        if (rep_id < 0 || std::stol(row[rep_col]) == rep_id)
        {
            selected.push_back(&row);
        }
    }
    Observations obs;
    obs.x.resize(static_cast<Eigen::Index>(selected.size()), static_cast<Eigen::Index>(x_cols.size()));
    for (std::size_t i = 0; i < selected.size(); ++i)
    {
        for (std::size_t j = 0; j < x_cols.size(); ++j)
        {
            obs.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                parse_double((*selected[i])[x_cols[j]]);
        }
    }
    return obs;
}

CsvTable density_table(const MixingDensity& f)
{
    CsvTable t;
    t.header = {"theta", "value"};
    for (std::size_t k = 0; k < f.size(); ++k)
    {
        t.rows.push_back({format_double(f.grid().point(k)), format_double(f[k])});
    }
    return t;
}

}  // namespace mixsa::mixture
