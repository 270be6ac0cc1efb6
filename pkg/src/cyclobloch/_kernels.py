"""Fused RK4 kernel for the driven 1D chain.

The block integrator below is the hot path for every 1D run; it implements
exactly the same stepping, drive evaluation, and per-step renormalization
policy as the generic loop in `propagator.evolve`, with the Hamiltonian
application inlined. Equivalence against `hamiltonian.h1d_derivative` is
enforced by the test suite.
"""

import numpy as np
from numba import njit


@njit(cache=True, fastmath=False)
def h1d_rk4_block(y, cos_c, sin_c, jx_half, jy, wx, wy, t0, dt, n_sub, drift_tol):
    """Advance y in place by n_sub RK4 steps of size dt starting at t0.

    Returns (steps_done, drift): steps_done < n_sub signals that the norm
    drifted by more than drift_tol on step steps_done (counted from 1) and
    integration stopped; drift is then the offending value.
    """
    n = y.shape[0]
    k = np.empty((4, n), np.complex128)
    yt = np.empty(n, np.complex128)
    half = 0.5 * dt
    for s in range(n_sub):
        t_step = t0 + s * dt
        for stage in range(4):
            if stage == 0:
                ts = t_step
                src = y
            elif stage == 1:
                ts = t_step + half
                for i in range(n):
                    yt[i] = y[i] + half * k[0, i]
                src = yt
            elif stage == 2:
                ts = t_step + half
                for i in range(n):
                    yt[i] = y[i] + half * k[1, i]
                src = yt
            else:
                ts = t_step + dt
                for i in range(n):
                    yt[i] = y[i] + dt * k[2, i]
                src = yt
            fwd = jx_half * np.exp(-1j * wx * ts)
            bwd = np.conj(fwd)
            ct = jy * np.cos(wy * ts)
            st = jy * np.sin(wy * ts)
            for i in range(n):
                acc = (ct * cos_c[i] + st * sin_c[i]) * src[i]
                if i + 1 < n:
                    acc += fwd * src[i + 1]
                if i > 0:
                    acc += bwd * src[i - 1]
                k[stage, i] = 1j * acc
        sixth = dt / 6.0
        nrm2 = 0.0
        for i in range(n):
            y[i] = y[i] + sixth * (k[0, i] + 2.0 * (k[1, i] + k[2, i]) + k[3, i])
            nrm2 += y[i].real * y[i].real + y[i].imag * y[i].imag
        nrm = np.sqrt(nrm2)
        drift = abs(nrm - 1.0)
        if drift > drift_tol:
            return s + 1, drift
        inv = 1.0 / nrm
        for i in range(n):
            y[i] *= inv
    return n_sub, 0.0
