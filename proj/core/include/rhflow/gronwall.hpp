#pragma once

#include <vector>

// Discrete comparison-principle audit: given a sampled nonnegative quantity
// U(t) and a forcing term F(t), check the integral bound
//
//   U(tau) <= e^{lambda1 tau} U(0)
//           + Integral_0^tau e^{lambda1 (tau - s)} lambda2 F(s) ds
//
// or fit the smallest rate pair (lambda1, lambda2) for which the sampled
// series admits such a bound at all.
namespace rhflow {

struct ComparisonProblem {
    std::vector<double> t;  // strictly increasing, t.front() == 0 not required
    std::vector<double> U;  // nonnegative samples
    std::vector<double> F;  // nonnegative forcing samples
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

struct ComparisonResult {
    bool pass = true;
    std::vector<double> bound;   // right-hand side at each sample time
    std::vector<double> margin;  // (bound - U) / max(bound, |U|, tiny)
};

// Evaluates the bound by exact integration of the factor e^{lambda1 (t-s)}
// over each subinterval with the forcing held at its trapezoid average, then
// compares sample by sample.  Small relative slack absorbs roundoff; the
// verdict is monotone in (lambda1, lambda2): enlarging either rate never
// turns a pass into a fail.
ComparisonResult verify_comparison(const ComparisonProblem& prob);

struct LambdaFit {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    bool feasible = true;  // false when U grows where both U and F vanish
};

// Fits rates so that U' <= lambda1 U + lambda2 F holds at every interior
// sample (centered differencing).  Among feasible pairs the fit minimizes the
// comparison bound at the final time, breaking ties toward smaller lambda1
// and then smaller lambda2; the returned pair always passes
// verify_comparison on the same data.
LambdaFit fit_lambdas(const std::vector<double>& t,
                      const std::vector<double>& U,
                      const std::vector<double>& F);

}  // namespace rhflow
