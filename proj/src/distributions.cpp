#include "hierrank/distributions.hpp"

#include <cmath>

#include "hierrank/util.hpp"

namespace hierrank {

namespace {
constexpr double kEdge = 1e-12;  // keep Beta evaluation off the closed endpoints
constexpr double kHalfLog2Pi = 0.91893853320467274178;
}  // namespace

void ScoreDist::validate() const {
    if (family != "beta")
        fail("unsupported_family", "unknown score distribution family: " + family);
    if (!(a > 0.0) || !(b > 0.0))
        fail("bad_distribution", "beta parameters must be positive");
}

double ScoreDist::log_pdf(double s) const {
    validate();
    double x = s < kEdge ? kEdge : (s > 1.0 - kEdge ? 1.0 - kEdge : s);
    double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta;
}

double ScoreDist::pdf(double s) const { return std::exp(log_pdf(s)); }

double ScoreDist::mean() const {
    validate();
    return a / (a + b);
}

double ScoreDist::sample(Rng& rng) const {
    validate();
    return rng.beta(a, b);
}

double normal_log_pdf(double s, double mu, double sd) {
    double z = (s - mu) / sd;
    return -0.5 * z * z - std::log(sd) - kHalfLog2Pi;
}

}  // namespace hierrank
