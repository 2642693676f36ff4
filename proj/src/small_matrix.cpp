#include "mimoim/small_matrix.hpp"

#include <cmath>

#include "mimoim/errors.hpp"

namespace mimoim {

CMatrix multiply(const CMatrix& a, const CMatrix& b, CmCounter& cm)
{
    if (a.cols() != b.rows())
        throw ArgumentError("multiply: inner dimensions differ");
    CMatrix out(a.rows(), b.cols());
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < b.cols(); ++j) {
            cplx acc = 0.0;
            for (unsigned k = 0; k < a.cols(); ++k)
                acc += cm.mul(a(i, k), b(k, j));
            out(i, j) = acc;
        }
    return out;
}

CMatrix multiply_ah_b(const CMatrix& a, const CMatrix& b, CmCounter& cm)
{
    if (a.rows() != b.rows())
        throw ArgumentError("multiply_ah_b: inner dimensions differ");
    CMatrix out(a.cols(), b.cols());
    for (unsigned i = 0; i < a.cols(); ++i)
        for (unsigned j = 0; j < b.cols(); ++j) {
            cplx acc = 0.0;
            for (unsigned k = 0; k < a.rows(); ++k)
                acc += cm.mul(std::conj(a(k, i)), b(k, j));
            out(i, j) = acc;
        }
    return out;
}

CMatrix multiply_a_bh(const CMatrix& a, const CMatrix& b, CmCounter& cm)
{
    if (a.cols() != b.cols())
        throw ArgumentError("multiply_a_bh: inner dimensions differ");
    CMatrix out(a.rows(), b.rows());
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < b.rows(); ++j) {
            cplx acc = 0.0;
            for (unsigned k = 0; k < a.cols(); ++k)
                acc += cm.mul(a(i, k), std::conj(b(j, k)));
            out(i, j) = acc;
        }
    return out;
}

CVector multiply(const CMatrix& a, const CVector& v, CmCounter& cm)
{
    if (a.cols() != v.size())
        throw ArgumentError("multiply: vector length differs from column count");
    CVector out(a.rows(), 0.0);
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned k = 0; k < a.cols(); ++k)
            out[i] += cm.mul(a(i, k), v[k]);
    return out;
}

CMatrix invert_hpd(CMatrix a, CmCounter& cm)
{
    const unsigned n = a.rows();
    if (a.cols() != n)
        throw ArgumentError("invert_hpd: matrix must be square");
    for (unsigned k = 0; k < n; ++k) {
        const cplx pivot = a(k, k);
        if (!(pivot.real() > 0.0) || !std::isfinite(pivot.real()) || !std::isfinite(pivot.imag()))
            throw NumericError("invert_hpd: non-positive or non-finite pivot");
        const cplx inv = 1.0 / pivot;
        a(k, k) = 1.0;
        for (unsigned j = 0; j < n; ++j)
            a(k, j) = cm.mul(a(k, j), inv);
        for (unsigned i = 0; i < n; ++i) {
            if (i == k)
                continue;
            const cplx f = a(i, k);
            a(i, k) = 0.0;
            for (unsigned j = 0; j < n; ++j)
                a(i, j) -= cm.mul(f, a(k, j));
        }
    }
    return a;
}

} // namespace mimoim
