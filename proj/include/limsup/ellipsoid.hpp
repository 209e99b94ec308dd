#pragma once

#include <cstdint>
#include <vector>

#include "limsup/dimension.hpp"
#include "limsup/schedule.hpp"

namespace limsup {

// Semiaxes of the inscribed ellipsoids E_n of convex bodies in [0, 1]^d,
// modelled as power laws kappa_i n^-alpha_i and listed in decreasing order.
// The circumscribed ellipsoid is the dilation by d.
class EllipsoidSchedule {
 public:
  // Throws DomainError unless alphas are non-decreasing and the tuples are
  // non-increasing from the first index where every semiaxis is <= 1.
  explicit EllipsoidSchedule(PowerLawSchedule semiaxes);

  std::size_t dimension() const { return semiaxes_.dimension(); }
  const PowerLawSchedule& semiaxes() const { return semiaxes_; }
  double dilation() const { return static_cast<double>(dimension()); }
  // Semiaxes of the factor-d dilations.
  PowerLawSchedule dilated() const { return semiaxes_.scaled(dilation()); }

 private:
  PowerLawSchedule semiaxes_;
};

// Critical exponent with s = (1, ..., 1), capped at d. The same for the
// inner ellipsoids and their dilations.
double convex_body_dimension(const EllipsoidSchedule& sched, double tol = kDefaultBisectionTol);

}  // namespace limsup
