# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the NumPy reference kernel (see reference.py).

Same arithmetic, fused into a single pass over the cells to avoid the
temporaries of the vectorized version.  No fast-math: results must match
the reference bit for bit.
"""

import numpy as np
cimport numpy as cnp

from libc.math cimport fabs


def claw_step(double[::1] vp, double[::1] fp, double[::1] dfp,
              double[::1] gpp_pad, double[::1] gppp_pad, double[::1] h_int,
              double[::1] w_face, double alpha, double eps, double dt,
              double dx, double[::1] out):
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t i
    cdef double lam = dt / dx
    cdef double mu = eps * dt / (dx * dx)
    cdef double w, flux_l, flux_r, speed_l, speed_r, speed
    cdef double fhat_prev, fhat, smax = 0.0

    # face 0 (left face of the first interior cell)
    w = w_face[0]
    flux_l = fp[0] - alpha * gpp_pad[0] * w
    flux_r = fp[1] - alpha * gpp_pad[1] * w
    speed_l = fabs(dfp[0] - alpha * gppp_pad[0] * w)
    speed_r = fabs(dfp[1] - alpha * gppp_pad[1] * w)
    speed = speed_l if speed_l > speed_r else speed_r
    if speed > smax:
        smax = speed
    fhat_prev = 0.5 * (flux_l + flux_r) - 0.5 * speed * (vp[1] - vp[0])

    for i in range(n):
        w = w_face[i + 1]
        flux_l = fp[i + 1] - alpha * gpp_pad[i + 1] * w
        flux_r = fp[i + 2] - alpha * gpp_pad[i + 2] * w
        speed_l = fabs(dfp[i + 1] - alpha * gppp_pad[i + 1] * w)
        speed_r = fabs(dfp[i + 2] - alpha * gppp_pad[i + 2] * w)
        speed = speed_l if speed_l > speed_r else speed_r
        if speed > smax:
            smax = speed
        fhat = 0.5 * (flux_l + flux_r) - 0.5 * speed * (vp[i + 2] - vp[i + 1])
        out[i] = (vp[i + 1]
                  - lam * (fhat - fhat_prev)
                  + mu * (vp[i + 2] - 2.0 * vp[i + 1] + vp[i])
                  - dt * h_int[i])
        fhat_prev = fhat
    return smax
