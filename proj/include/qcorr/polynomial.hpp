#pragma once

// Dense integer polynomials, coefficients in increasing degree.  Used for
// exact vanishing tests of character sums at roots of unity.

#include <cstdint>
#include <vector>

namespace qcorr {

using IntPoly = std::vector<std::int64_t>;

void trim(IntPoly& p);
IntPoly poly_multiply(const IntPoly& p, const IntPoly& q);

/// Remainder of p modulo a monic divisor.
IntPoly poly_mod_monic(IntPoly p, const IntPoly& divisor);

/// Exact quotient by a monic divisor; throws std::domain_error if it leaves a remainder.
IntPoly poly_divide_exact(const IntPoly& p, const IntPoly& divisor);

/// The n-th cyclotomic polynomial.
IntPoly cyclotomic_polynomial(std::int64_t n);

/// True iff sum_e coeff[e] * zeta^e = 0 for zeta = exp(2 pi i / n), decided
/// exactly: p is first folded modulo x^n - 1, then reduced modulo Phi_n.
bool vanishes_at_primitive_root(const IntPoly& p, std::int64_t n);

}  // namespace qcorr
