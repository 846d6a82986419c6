#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "shocksim/vec.hpp"

namespace shocksim::profiles {

/// Value and derivatives of a profile at a point, as far as `order` asked.
struct ProfilePoint {
    Vec3 y;
    double value = 0.0;
    Vec3 grad;        // order >= 1
    Sym3 hess;        // order >= 2
    Sym3 hess_d1;     // order >= 3: Hessian of the d/dy1 derivative
};

struct Weights {
    double eta = 1.0;        // 1 + y1^2 + |y_check|^6
    double tilde_eta = 1.0;  // eta + |y_check|^2
};

/// Stable self-similar solution of 1D Burgers: the real root of
/// w^3 + w + y1 = 0, evaluated in closed form without cancellation.
double w1d(double y1);

/// First three derivatives of w1d by implicit differentiation.
void w1d_jet(double y1, double& w, double& dw, double& d2w, double& d3w);

/// 3D profile: B^{-1/2} w1d(B^{3/2} y1) with B = 1/(1+|y_check|^2).
double bar_w(const Vec3& y);

/// Analytic jet of bar_w through third derivatives of the requested kind.
/// order 0: value; 1: +grad; 2: +hess; 3: +hess_d1.
ProfilePoint bar_w_jet(const Vec3& y, int order);

Weights weights(const Vec3& y);

/// Self-similar Burgers operator applied to an arbitrary (value, grad)
/// evaluator: -W/2 + (3/2 y1 + W) dW1 + y2/2 dW2 + y3/2 dW3.
using JetFn = std::function<void(const Vec3& y, double& value, Vec3& grad)>;
double ss_burgers_residual(const JetFn& profile, const Vec3& y);
double ss_burgers_residual(const Vec3& y);  // closed-form bar_w

/// CSV table `y1,y2,y3,W,dW1,dW2,dW3` row-major over the given axes.
void export_profile_table(std::ostream& os, const std::vector<double>& axis1,
                          const std::vector<double>& axis2, const std::vector<double>& axis3);

} // namespace shocksim::profiles
