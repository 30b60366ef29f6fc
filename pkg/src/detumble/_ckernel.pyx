# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled closed-loop plant. Same interface and arithmetic as ``_pykernel.Plant``."""

from libc.math cimport sqrt, fabs

from .errors import DegenerateQuaternion

cdef enum:
    N = 13

cdef int LAW_NONE = 0
cdef int LAW_PROPORTIONAL = 1
cdef int LAW_FEEDBACK_LINEARIZED = 2
cdef int LAW_TWO_STAGE = 3


cdef inline double _clamp(double v, double lim) nogil:
    if v > lim:
        return lim
    if v < -lim:
        return -lim
    return v


cdef class Plant:
    cdef readonly double ix, iy, iz, mu
    cdef readonly int law
    cdef double kp, kq, kr
    cdef double pc_cmd, qc_cmd, rc_cmd
    cdef double p_command, q_limit, den_floor
    cdef bint mask_x, mask_y, mask_z
    cdef readonly double limit

    backend = "cython"

    def __init__(self, inertia, mu, law, gains, rate_cmd, p_command, q_limit, den_floor, mask, limit):
        self.ix, self.iy, self.iz = [float(i) for i in inertia]
        self.mu = mu
        self.law = law
        self.kp, self.kq, self.kr = [float(g) for g in gains]
        self.pc_cmd, self.qc_cmd, self.rc_cmd = [float(c) for c in rate_cmd]
        self.p_command = p_command
        self.q_limit = q_limit
        self.den_floor = den_floor
        self.mask_x, self.mask_y, self.mask_z = [bool(m) for m in mask]
        self.limit = limit

    @property
    def inertia(self):
        return (self.ix, self.iy, self.iz)

    cdef void _moment(self, double p, double q, double r, int stage, double* out) nogil:
        cdef double ix = self.ix, iy = self.iy, iz = self.iz
        cdef double l = 0.0, m = 0.0, n = 0.0
        cdef double gp, gq, gr, pc, qc, den
        if self.law == LAW_PROPORTIONAL:
            l = self.kp * (p - self.pc_cmd)
            m = self.kq * (q - self.qc_cmd)
            n = self.kr * (r - self.rc_cmd)
        elif self.law == LAW_FEEDBACK_LINEARIZED:
            gp = self.kp * (p - self.pc_cmd)
            gq = self.kq * (q - self.qc_cmd)
            gr = self.kr * (r - self.rc_cmd)
            l = ix * gp + (iz - iy) * q * r
            m = iy * gq + (ix - iz) * r * p
            n = iz * gr + (iy - ix) * p * q
        elif self.law == LAW_TWO_STAGE:
            if stage == 1:
                pc = self.p_command
                gr = self.kr * (r - 0.0)
                den = p * (ix - iy)
                if fabs(den) < self.den_floor:
                    den = -self.den_floor if den < 0.0 else self.den_floor
                qc = _clamp(iz * gr / den, self.q_limit)
            else:
                pc = 0.0
                qc = 0.0
            gp = self.kp * (p - pc)
            gq = self.kq * (q - qc)
            l = ix * gp - q * r * (iy - iz)
            m = iy * gq - p * r * (iz - ix)
            n = 0.0
        if not self.mask_x:
            l = 0.0
        elif self.limit > 0.0:
            l = _clamp(l, self.limit)
        if not self.mask_y:
            m = 0.0
        elif self.limit > 0.0:
            m = _clamp(m, self.limit)
        if not self.mask_z:
            n = 0.0
        elif self.limit > 0.0:
            n = _clamp(n, self.limit)
        out[0] = l
        out[1] = m
        out[2] = n

    cdef void _deriv(self, double* y, int stage, double* dy) nogil:
        cdef double mom[3]
        cdef double p = y[10], q = y[11], r = y[12]
        cdef double q0 = y[6], q1 = y[7], q2 = y[8], q3 = y[9]
        cdef double rad, k
        self._moment(p, q, r, stage, mom)
        rad = sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])
        k = -self.mu / (rad * rad * rad)
        dy[0] = y[3]
        dy[1] = y[4]
        dy[2] = y[5]
        dy[3] = k * y[0]
        dy[4] = k * y[1]
        dy[5] = k * y[2]
        dy[6] = 0.5 * (-q1 * p - q2 * q - q3 * r)
        dy[7] = 0.5 * (q0 * p + q2 * r - q3 * q)
        dy[8] = 0.5 * (q0 * q - q1 * r + q3 * p)
        dy[9] = 0.5 * (q0 * r + q1 * q - q2 * p)
        dy[10] = ((self.iy - self.iz) * q * r + mom[0]) / self.ix
        dy[11] = ((self.iz - self.ix) * r * p + mom[1]) / self.iy
        dy[12] = ((self.ix - self.iy) * p * q + mom[2]) / self.iz

    def moment(self, omega, int stage):
        cdef double out[3]
        self._moment(omega[0], omega[1], omega[2], stage, out)
        return (out[0], out[1], out[2])

    def derivative(self, y, int stage):
        cdef double ys[N]
        cdef double dy[N]
        cdef int i
        for i in range(N):
            ys[i] = y[i]
        self._deriv(ys, stage, dy)
        return tuple([dy[i] for i in range(N)])

    def step(self, y, double dt, int stage):
        cdef double y0[N]
        cdef double tmp[N]
        cdef double k1[N]
        cdef double k2[N]
        cdef double k3[N]
        cdef double k4[N]
        cdef double h = 0.5 * dt, h6 = dt / 6.0, nq
        cdef int i
        for i in range(N):
            y0[i] = y[i]
        with nogil:
            self._deriv(y0, stage, k1)
            for i in range(N):
                tmp[i] = y0[i] + h * k1[i]
            self._deriv(tmp, stage, k2)
            for i in range(N):
                tmp[i] = y0[i] + h * k2[i]
            self._deriv(tmp, stage, k3)
            for i in range(N):
                tmp[i] = y0[i] + dt * k3[i]
            self._deriv(tmp, stage, k4)
            for i in range(N):
                tmp[i] = y0[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            nq = sqrt(tmp[6] * tmp[6] + tmp[7] * tmp[7] + tmp[8] * tmp[8] + tmp[9] * tmp[9])
        if not nq > 1e-9:
            raise DegenerateQuaternion(f"quaternion norm collapsed to {nq!r}")
        for i in range(6, 10):
            tmp[i] = tmp[i] / nq
        return tuple([tmp[i] for i in range(N)])
