#include "gnk/conjugation.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace gnk {

CirculantSymbol::CirculantSymbol(Vector column) : column_(std::move(column)) {
  const Index n = column_.size();
  if (n < 1) throw Error("circulant symbol needs a non-empty column");
  Eigen::FFT<double> fft;
  std::vector<Complex> in(column_.data(), column_.data() + n), out;
  fft.fwd(out, in);
  spectrum_ = Eigen::Map<CVector>(out.data(), n);
}

CirculantSymbol CirculantSymbol::conjugation(int n) {
  if (n < 2 || n % 2 != 0) throw Error("conjugation symbol requires even n >= 2");
  Vector b(n);
  b[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    b[i] = sign / n * std::cos(i * kPi / n) / std::sin(i * kPi / n);
  }
  // cot(pi/2) vanishes exactly; keep the entry at an exact zero.
  b[n / 2] = 0.0;
  return CirculantSymbol(std::move(b));
}

CirculantSymbol CirculantSymbol::from_column(Vector column) {
  return CirculantSymbol(std::move(column));
}

Vector apply_circulant_blocks(const CirculantSymbol& symbol, const Vector& x) {
  const Index n = symbol.n();
  if (x.size() % n != 0) throw Error("vector length is not a multiple of the block size");
  Eigen::FFT<double> fft;
  Vector out(x.size());
  std::vector<Complex> in(n), spec, back;
  for (Index k = 0; k < x.size() / n; ++k) {
    for (Index p = 0; p < n; ++p) in[p] = x[k * n + p];
    fft.fwd(spec, in);
    for (Index p = 0; p < n; ++p) spec[p] *= symbol.spectrum()[p];
    fft.inv(back, spec);
    double scale = 0.0, residue = 0.0;
    for (Index p = 0; p < n; ++p) {
      scale = std::max(scale, std::abs(back[p].real()));
      residue = std::max(residue, std::abs(back[p].imag()));
      out[k * n + p] = back[p].real();
    }
    if (residue > 1e-10 * std::max(1.0, scale))
      throw Error("circulant product has a non-negligible imaginary part");
  }
  return out;
}

}  // namespace gnk
