#pragma once
// Thin LAPACKE wrappers shared by the spectral modules.  The complex type
// must be pinned to std::complex before lapacke.h is seen anywhere in the
// build; keep this the only include point.

#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace cxlab {

// dense nonsymmetric eigenvalues of a column-major n x n complex matrix;
// a is destroyed.  vr columns (column-major) are the unit right eigenvectors
// when vectors is set.
inline void eig_complex(std::vector<std::complex<double>>& a, int n,
                        std::vector<std::complex<double>>& w,
                        std::vector<std::complex<double>>& vr, bool vectors) {
    w.assign(n, {});
    vr.assign(vectors ? std::size_t(n) * n : 1, {});
    lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, a.data(), n, w.data(),
        nullptr, 1, vr.data(), vectors ? n : 1);
    if (info != 0)
        throw std::runtime_error("zgeev failed, info = " +
                                 std::to_string(info) + " at n = " +
                                 std::to_string(n));
}

// real nonsymmetric eigenvalues; complex conjugate pairs packed per LAPACK
// convention in vr (consecutive columns hold real/imag parts).
inline void eig_real(std::vector<double>& a, int n,
                     std::vector<double>& wr, std::vector<double>& wi,
                     std::vector<double>& vr, bool vectors) {
    wr.assign(n, 0.0);
    wi.assign(n, 0.0);
    vr.assign(vectors ? std::size_t(n) * n : 1, 0.0);
    lapack_int info = LAPACKE_dgeev(
        LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, a.data(), n, wr.data(),
        wi.data(), nullptr, 1, vr.data(), vectors ? n : 1);
    if (info != 0)
        throw std::runtime_error("dgeev failed, info = " +
                                 std::to_string(info) + " at n = " +
                                 std::to_string(n));
}

}  // namespace cxlab
