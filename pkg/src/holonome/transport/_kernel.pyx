# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Dormand-Prince 5(4) integration of Y' = A(t) Y along one path segment.

A(t) = sum_k g_k(t) R_k with g_k = phi_k'(t) / phi_k(t), and
phi_k(t) = p_k + l_k t + u_k cos(theta0 + omega t) + v_k sin(theta0 + omega t).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, fabs, pow, isfinite
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

ctypedef double complex cplx

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_NONFINITE = 2
STATUS_MAXSTEPS = 3


cdef inline int _generator(const cplx[:, ::1] coef, double theta0, double omega, double t,
                           const cplx* R, cplx* A, Py_ssize_t d) noexcept nogil:
    """Fill A (row-major d x d) with sum_k g_k(t) R_k; returns 0 if some phi_k vanishes."""
    cdef Py_ssize_t m = coef.shape[0], k, a, dd = d * d
    cdef double ang = theta0 + omega * t
    cdef double c = cos(ang), s = sin(ang)
    cdef cplx phi, dphi, g
    cdef const cplx* Rk
    for a in range(dd):
        A[a] = 0
    for k in range(m):
        phi = coef[k, 0] + coef[k, 1] * t + coef[k, 2] * c + coef[k, 3] * s
        dphi = coef[k, 1] - coef[k, 2] * omega * s + coef[k, 3] * omega * c
        if phi == 0:
            return 0
        g = dphi / phi
        if g == 0:
            continue
        Rk = R + k * dd
        for a in range(dd):
            A[a] = A[a] + g * Rk[a]
    return 1


cdef inline void _matmul(cplx* A, cplx* Y, cplx* out, int d) noexcept nogil:
    """out = A @ Y for row-major d x d matrices (column-major call with swapped operands)."""
    cdef cplx one = 1.0, zero = 0.0
    cdef char trans = b'N'
    zgemm(&trans, &trans, &d, &d, &d, &one, Y, &d, A, &d, &zero, out, &d)


cdef inline void _stage(cplx* Y, cplx* out, Py_ssize_t dd, double h, int nk,
                        cplx** K, double* a) noexcept nogil:
    cdef Py_ssize_t i
    cdef int j
    cdef cplx acc
    for i in range(dd):
        acc = 0
        for j in range(nk):
            if a[j] != 0:
                acc = acc + a[j] * K[j][i]
        out[i] = Y[i] + h * acc


def integrate_segment(cplx[:, ::1] coef, double theta0, double omega, cplx[:, :, ::1] R,
                      cplx[:, ::1] Y0, double tol, long fixed_steps=0, double h_init=0.01,
                      long max_steps=2000000):
    """Return (Y(1), accepted, rejected, status) for Y' = A(t) Y on [0, 1]."""
    cdef Py_ssize_t d = Y0.shape[0], dd = d * d, i
    cdef const cplx* Rp = &R[0, 0, 0]
    cdef int di = <int>d
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] Yout = np.array(Y0, dtype=np.complex128, order="C")
    cdef cplx* Y = <cplx*> Yout.data
    cdef cplx* work = <cplx*> malloc(10 * dd * sizeof(cplx))
    if work == NULL:
        raise MemoryError()
    cdef cplx* A = work
    cdef cplx* Ys = work + dd
    cdef cplx* Ynew = work + 2 * dd
    cdef cplx* K[7]
    for i in range(7):
        K[i] = work + (3 + i) * dd
    cdef cplx* swap
    cdef double a2[1]
    cdef double a3[2]
    cdef double a4[3]
    cdef double a5[4]
    cdef double a6[5]
    cdef double b[6]
    a2[0] = A21
    a3[0] = A31; a3[1] = A32
    a4[0] = A41; a4[1] = A42; a4[2] = A43
    a5[0] = A51; a5[1] = A52; a5[2] = A53; a5[3] = A54
    a6[0] = A61; a6[1] = A62; a6[2] = A63; a6[3] = A64; a6[4] = A65
    b[0] = B1; b[1] = 0; b[2] = B3; b[3] = B4; b[4] = B5; b[5] = B6

    cdef double t = 0.0, h, err, ymax, fac, dif
    cdef long accepted = 0, rejected = 0
    cdef int status = 0, ok
    cdef bint fixed = fixed_steps > 0
    cdef bint have_k1 = False
    cdef cplx delta

    h = 1.0 / fixed_steps if fixed else h_init
    with nogil:
        while (fixed and accepted < fixed_steps) or (not fixed and 1.0 - t > 1e-13):
            if accepted + rejected >= max_steps:
                status = 3
                break
            if not fixed:
                if t + h > 1.0:
                    h = 1.0 - t
                if h < 1e-14:
                    status = 1
                    break
            if not have_k1:
                ok = _generator(coef, theta0, omega, t, Rp, A, d)
                if not ok:
                    status = 2
                    break
                _matmul(A, Y, K[0], di)
                have_k1 = True
            _stage(Y, Ys, dd, h, 1, K, a2)
            ok = _generator(coef, theta0, omega, t + C2 * h, Rp, A, d)
            _matmul(A, Ys, K[1], di)
            _stage(Y, Ys, dd, h, 2, K, a3)
            ok = ok & _generator(coef, theta0, omega, t + C3 * h, Rp, A, d)
            _matmul(A, Ys, K[2], di)
            _stage(Y, Ys, dd, h, 3, K, a4)
            ok = ok & _generator(coef, theta0, omega, t + C4 * h, Rp, A, d)
            _matmul(A, Ys, K[3], di)
            _stage(Y, Ys, dd, h, 4, K, a5)
            ok = ok & _generator(coef, theta0, omega, t + C5 * h, Rp, A, d)
            _matmul(A, Ys, K[4], di)
            _stage(Y, Ys, dd, h, 5, K, a6)
            ok = ok & _generator(coef, theta0, omega, t + h, Rp, A, d)
            _matmul(A, Ys, K[5], di)
            _stage(Y, Ynew, dd, h, 6, K, b)
            _matmul(A, Ynew, K[6], di)
            if not ok:
                status = 2
                break

            err = 0.0
            ymax = 1.0
            for i in range(dd):
                delta = E1 * K[0][i] + E3 * K[2][i] + E4 * K[3][i] + E5 * K[4][i] + E6 * K[5][i] + E7 * K[6][i]
                dif = fabs(delta.real) + fabs(delta.imag)
                if dif > err:
                    err = dif
                dif = fabs(Ynew[i].real) + fabs(Ynew[i].imag)
                if not isfinite(dif):
                    status = 2
                if dif > ymax:
                    ymax = dif
            if status != 0:
                break
            # error per unit step: h * |delta| compared with tol * h
            err = err / (tol * ymax)

            if fixed or err <= 1.0:
                accepted += 1
                t = accepted * h if fixed else t + h
                for i in range(dd):
                    Y[i] = Ynew[i]
                swap = K[0]
                K[0] = K[6]
                K[6] = swap
                if fixed:
                    continue
            else:
                rejected += 1
            if err == 0.0:
                fac = 5.0
            else:
                fac = 0.9 * pow(err, -0.25)
                if fac < 0.2:
                    fac = 0.2
                elif fac > 5.0:
                    fac = 5.0
            h = h * fac
    free(work)
    return Yout, accepted, rejected, status
