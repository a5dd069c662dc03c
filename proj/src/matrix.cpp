#include "bta/matrix.hpp"

namespace bta {

namespace {
void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b))
        throw dimension_error(std::string(op) + ": shape mismatch " + a.shape_str() +
                              " vs " + b.shape_str());
}
}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw dimension_error("matmul: shape mismatch " + a.shape_str() + " vs " +
                              b.shape_str());
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    Matrix out = a;
    for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "sub");
    Matrix out = a;
    for (size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    Matrix out = a;
    for (size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix scale(const Matrix& a, double c) {
    Matrix out = a;
    for (size_t i = 0; i < out.size(); ++i) out[i] *= c;
    return out;
}

Matrix linear(const Matrix& x, const Matrix& w, const Matrix& b) {
    if (w.cols() != x.rows() || b.rows() != w.rows() || b.cols() != x.cols())
        throw dimension_error("linear: shape mismatch X=" + x.shape_str() + " W=" +
                              w.shape_str() + " B=" + b.shape_str());
    return add(matmul(w, x), b);
}

}  // namespace bta
