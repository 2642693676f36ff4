#pragma once

#include <cstdint>
#include <vector>

#include "mimoim/types.hpp"

namespace mimoim {

/// Tally of complex multiplications. Squared magnitudes and real scalings are not counted.
struct CmCounter {
    std::uint64_t count = 0;

    cplx mul(cplx a, cplx b)
    {
        ++count;
        return a * b;
    }
};

/// Row-major dense complex matrix sized for per-subcarrier MIMO work (a few antennas).
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(unsigned rows, unsigned cols, cplx fill = 0.0)
        : rows_(rows)
        , cols_(cols)
        , data_(static_cast<std::size_t>(rows) * cols, fill)
    {
    }

    static CMatrix identity(unsigned n)
    {
        CMatrix m(n, n);
        for (unsigned i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }
    cplx& operator()(unsigned r, unsigned c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const cplx& operator()(unsigned r, unsigned c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

private:
    unsigned rows_ = 0;
    unsigned cols_ = 0;
    std::vector<cplx> data_;
};

// Counted kernels. Each scalar product of two complex operands is one CM.

/// A * B.
CMatrix multiply(const CMatrix& a, const CMatrix& b, CmCounter& cm);
/// A^H * B.
CMatrix multiply_ah_b(const CMatrix& a, const CMatrix& b, CmCounter& cm);
/// A * B^H.
CMatrix multiply_a_bh(const CMatrix& a, const CMatrix& b, CmCounter& cm);
/// A * v.
CVector multiply(const CMatrix& a, const CVector& v, CmCounter& cm);

/**
 * In-place Gauss-Jordan inverse of a Hermitian positive definite matrix.
 * Pivots stay positive for HPD input, so no row exchanges are needed.
 * Costs exactly n^3 CMs.
 */
CMatrix invert_hpd(CMatrix a, CmCounter& cm);

} // namespace mimoim
