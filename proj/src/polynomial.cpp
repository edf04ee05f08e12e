#include "qcorr/polynomial.hpp"

#include <stdexcept>

namespace qcorr {

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

IntPoly poly_multiply(const IntPoly& p, const IntPoly& q) {
  if (p.empty() || q.empty()) return {};
  IntPoly r(p.size() + q.size() - 1, 0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  trim(r);
  return r;
}

IntPoly poly_mod_monic(IntPoly p, const IntPoly& divisor) {
  trim(p);
  if (divisor.empty() || divisor.back() != 1) throw std::domain_error("divisor must be monic");
  const auto d = divisor.size() - 1;
  while (p.size() > d) {
    const auto lead = p.back();
    const auto shift = p.size() - 1 - d;
    for (std::size_t i = 0; i <= d; ++i) p[shift + i] -= lead * divisor[i];
    trim(p);
  }
  return p;
}

IntPoly poly_divide_exact(const IntPoly& p, const IntPoly& divisor) {
  IntPoly rem = p;
  trim(rem);
  if (divisor.empty() || divisor.back() != 1) throw std::domain_error("divisor must be monic");
  const auto d = divisor.size() - 1;
  if (rem.size() <= d) {
    if (!rem.empty()) throw std::domain_error("inexact polynomial division");
    return {};
  }
  IntPoly quotient(rem.size() - d, 0);
  while (rem.size() > d) {
    const auto lead = rem.back();
    const auto shift = rem.size() - 1 - d;
    quotient[shift] = lead;
    for (std::size_t i = 0; i <= d; ++i) rem[shift + i] -= lead * divisor[i];
    trim(rem);
  }
  if (!rem.empty()) throw std::domain_error("inexact polynomial division");
  return quotient;
}

IntPoly cyclotomic_polynomial(std::int64_t n) {
  if (n < 1) throw std::domain_error("cyclotomic index must be positive");
  // x^n - 1 = prod_{d | n} Phi_d(x)
  IntPoly p(static_cast<std::size_t>(n) + 1, 0);
  p.front() = -1;
  p.back() = 1;
  for (std::int64_t d = 1; d < n; ++d) {
    if (n % d == 0) p = poly_divide_exact(p, cyclotomic_polynomial(d));
  }
  return p;
}

bool vanishes_at_primitive_root(const IntPoly& p, std::int64_t n) {
  if (n < 1) throw std::domain_error("root order must be positive");
  IntPoly folded(static_cast<std::size_t>(n), 0);
  for (std::size_t e = 0; e < p.size(); ++e) folded[e % static_cast<std::size_t>(n)] += p[e];
  return poly_mod_monic(std::move(folded), cyclotomic_polynomial(n)).empty();
}

}  // namespace qcorr
