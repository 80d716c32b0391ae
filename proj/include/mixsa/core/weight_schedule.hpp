#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mixsa::core {

/// Deterministic step-size sequence w_1, w_2, ... of a Robbins-Monro
/// iteration. Built-in kinds satisfy sum w_n = inf and sum w_n^2 < inf;
/// every emitted value lies in (0, 1].
class WeightSchedule
{
public:
    enum class Kind
    {
        harmonic,  ///< w_n = 1 / (n + 1)
        power,     ///< w_n = a * n^-gamma, a in (0, 1], gamma in (0.5, 1]
        plateau,   ///< w_n = min(w0, n0 / n), harmonic after a flat burn-in
        table,     ///< caller-supplied values, summability not checked
    };

    static WeightSchedule harmonic();
    static WeightSchedule power(double a, double gamma);
    static WeightSchedule plateau(double w0, double n0);
    static WeightSchedule table(std::vector<double> values);

    /// w_n for n >= 1.
    double operator()(std::size_t n) const;

    Kind kind() const noexcept { return kind_; }
    double a() const noexcept { return a_; }
    double gamma() const noexcept { return gamma_; }

    /// True for the kinds whose summability holds by construction.
    bool robbins_monro() const noexcept { return kind_ != Kind::table; }

    /// Stable text form, e.g. "power(a=1,gamma=0.75)".
    std::string describe() const;

private:
    WeightSchedule(Kind kind, double a, double gamma) : kind_(kind), a_(a), gamma_(gamma) {}

    Kind kind_;
    double a_ = 1.0;      // power: scale; plateau: w0
    double gamma_ = 1.0;  // power: exponent; plateau: n0
    std::vector<double> table_;
};

}  // namespace mixsa::core
