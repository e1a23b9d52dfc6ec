#include "holopush/fourier.hpp"

#include "holopush/error.hpp"

namespace holopush {

CxVector<double> cauchy_coeffs(const CxVector<double>& boundary_values) {
  if (!is_power_of_two(boundary_values.size()))
    throw Error(ErrorKind::Argument, "center_family.cauchy_coeffs", "node count must be a power of two");
  return fourier_coefficients<double>(boundary_values);
}

}  // namespace holopush
