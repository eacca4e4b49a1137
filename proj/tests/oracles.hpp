#pragma once

#include <cmath>
#include <functional>

// Reference values computed independently of the library code.
namespace oracle {

inline double weibull_mean(double k, double lambda)
{
    return lambda * std::tgamma(1.0 + 1.0 / k);
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double truncated_normal_mean(double mu, double var, double lo, double hi)
{
    const double sd = std::sqrt(var);
    auto pdf = [&](double x) { return std::exp(-0.5 * (x - mu) * (x - mu) / var) / (sd * std::sqrt(2.0 * M_PI)); };
    const double mass = simpson(pdf, lo, hi);
    return simpson([&](double x) { return x * pdf(x); }, lo, hi) / mass;
}

/// Saturated goodput of a lone contender sending back-to-back A-MPDUs:
/// phy * payload / (payload + overhead + DIFS + mean backoff).
inline double single_contender_mbps(double phy_mbps, double mpdu_bytes, double txop_us, double overhead_us,
                                    double difs_us, double slot_us, int cw_min, int max_ampdu)
{
    const double t_mpdu = mpdu_bytes * 8.0 / phy_mbps;
    const double n = std::min<double>(max_ampdu, std::floor((txop_us - overhead_us) / t_mpdu));
    const double payload = n * t_mpdu;
    const double backoff = difs_us + slot_us * cw_min / 2.0;
    return phy_mbps * payload / (payload + overhead_us + backoff);
}

}  // namespace oracle
