"""NumPy reference implementation of the viscous conservation-law step.

One forward-Euler step of the semi-discrete scheme: local Lax-Friedrichs
(Rusanov) differencing of the combined flux f(t, v) - alpha*g'(v)*W(x),
centered second difference for the eps*v_xx term, pointwise source.

All arrays arrive ghost-padded (one cell each side), so the loop body is
boundary-free; the caller fills ghosts by wrap-around or zero extension.
The compiled kernel mirrors this arithmetic operation for operation.
"""

import numpy as np


def claw_step(vp, fp, dfp, gpp_pad, gppp_pad, h_int, w_face,
              alpha, eps, dt, dx, out):
    """Advance padded state one step.

    Parameters
    ----------
    vp, fp, dfp, gpp_pad, gppp_pad:
        ghost-padded arrays of length n+2: state v, flux f(t, v),
        derivative f_v(t, v), gate g'(v) and g''(v).
    h_int:
        length-n source values h(t, v) at interior cells.
    w_face:
        length-n+1 density |u|^2 at faces; w_face[m] sits between
        padded cells m and m+1.
    out:
        length-n output buffer for the updated state.

    Returns the largest local characteristic speed encountered.
    """
    vL = vp[:-1]
    vR = vp[1:]
    flux_L = fp[:-1] - alpha * gpp_pad[:-1] * w_face
    flux_R = fp[1:] - alpha * gpp_pad[1:] * w_face
    speed_L = np.abs(dfp[:-1] - alpha * gppp_pad[:-1] * w_face)
    speed_R = np.abs(dfp[1:] - alpha * gppp_pad[1:] * w_face)
    speed = np.maximum(speed_L, speed_R)
    fhat = 0.5 * (flux_L + flux_R) - 0.5 * speed * (vR - vL)

    lam = dt / dx
    mu = eps * dt / (dx * dx)
    out[:] = (vp[1:-1]
              - lam * (fhat[1:] - fhat[:-1])
              + mu * (vp[2:] - 2.0 * vp[1:-1] + vp[:-2])
              - dt * h_int)
    return float(np.max(speed))
