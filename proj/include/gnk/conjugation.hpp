#pragma once

#include "gnk/types.hpp"

namespace gnk {

/// Circulant n x n matrix stored by its first column and that column's
/// discrete Fourier transform.
class CirculantSymbol {
 public:
  /// Symbol of the matrix L with (L)_pq = (-1)^(p-q) (1/n) cot((p-q) pi / n)
  /// for p != q and zero diagonal: b_1 = 0, b_i = (-1)^(i-1) (1/n) cot((i-1) pi / n).
  static CirculantSymbol conjugation(int n);

  /// Circulant matrix with the given first column.
  static CirculantSymbol from_column(Vector column);

  int n() const { return static_cast<int>(column_.size()); }
  const Vector& column() const { return column_; }
  const CVector& spectrum() const { return spectrum_; }

 private:
  explicit CirculantSymbol(Vector column);

  Vector column_;
  CVector spectrum_;
};

/// Applies the block-diagonal operator diag(C, ..., C) to a real vector made of
/// consecutive blocks of length n, each block through the convolution theorem.
/// Throws if the result carries an imaginary residue above 1e-10.
Vector apply_circulant_blocks(const CirculantSymbol& symbol, const Vector& x);

/// The conjugation operator L-hat on (m+1) blocks.
inline Vector apply_Lhat(const CirculantSymbol& symbol, const Vector& x) {
  return apply_circulant_blocks(symbol, x);
}

}  // namespace gnk
