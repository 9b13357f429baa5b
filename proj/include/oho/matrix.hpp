#ifndef OHO_MATRIX_HPP
#define OHO_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace oho {

// Dense row-major matrix of 64-bit floats.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }

  bool empty() const { return rows == 0 || cols == 0; }
};

// c = a * b. Throws DimensionError on shape mismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

bool all_finite(const DenseMatrix& a);

}  // namespace oho

#endif  // OHO_MATRIX_HPP
