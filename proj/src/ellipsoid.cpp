#include "limsup/ellipsoid.hpp"

#include "limsup/errors.hpp"

namespace limsup {

EllipsoidSchedule::EllipsoidSchedule(PowerLawSchedule semiaxes) : semiaxes_(std::move(semiaxes)) {
  const auto from = semiaxes_.ordered_from();
  if (!from) throw DomainError("semiaxes are not eventually listed in decreasing order");
  // ordering has to hold wherever the radii are admissible
  if (*from > semiaxes_.n_min()) {
    throw DomainError("semiaxes are out of order at n = " + std::to_string(semiaxes_.n_min()));
  }
}

double convex_body_dimension(const EllipsoidSchedule& sched, double tol) {
  const RegularityVector ones(std::vector<double>(sched.dimension(), 1.0));
  return critical_exponent_series(sched.semiaxes(), ones, tol);
}

}  // namespace limsup
