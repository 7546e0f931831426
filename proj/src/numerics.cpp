#include "lgp/numerics.hpp"

namespace lgp {

PauliCoefficients pauli_decompose(const Matrix2& m) {
  // tr(sigma_k M) / 2 written out entrywise.
  const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  return {
      0.5 * (a + d),
      0.5 * (b + c),
      0.5 * kI * (b - c),
      0.5 * (a - d),
  };
}

}  // namespace lgp
