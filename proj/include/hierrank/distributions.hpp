#pragma once

#include <string>

#include "hierrank/rng.hpp"

namespace hierrank {

// Named parametric score family. "beta" is the only built-in family; the
// struct is the plug-in seam (JSON round-trips the family tag verbatim, and
// every evaluation goes through log_pdf/sample), so adding a family touches
// only this type.
struct ScoreDist {
    std::string family = "beta";
    double a = 1.0;
    double b = 1.0;

    double log_pdf(double s) const;
    double pdf(double s) const;
    double mean() const;
    double sample(Rng& rng) const;
    void validate() const;  // Error on unknown family or bad parameters
};

inline ScoreDist beta_dist(double a, double b) { return {"beta", a, b}; }

// log N(s; mu, sd); sd must be positive.
double normal_log_pdf(double s, double mu, double sd);

}  // namespace hierrank
