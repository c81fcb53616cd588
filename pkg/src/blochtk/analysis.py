"""Spectrum and trajectory observables: FWHM, Lorentzian fits, peaks.

Also holds the closed-form references for a resonantly damped two-level
system and for the trapped ground-state coherence of a Lambda system; the
integration tests check the engine against these.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Curve:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.shape != self.y.shape or self.x.size < 3:
            raise ValueError("curve needs matching x/y of length >= 3")
        if not np.all(np.diff(self.x) > 0):
            raise ValueError("x must be strictly increasing")


@dataclass(frozen=True)
class LorentzianFit:
    center: float
    fwhm: float
    amplitude: float
    offset: float
    residual_rms: float
    converged: bool = True


def fwhm_interpolated(curve: Curve) -> float:
    """Width between the two half-maximum crossings, linearly interpolated.

    The curve minimum serves as the baseline. Requires a single interior
    maximum with both crossings inside the domain.
    """
    y0 = curve.y - curve.y.min()
    k = int(np.argmax(y0))
    if k == 0 or k == y0.size - 1:
        raise ValueError("maximum sits on the domain edge")
    half = y0[k] / 2.0
    left = _crossing(curve.x, y0, k, half, -1)
    right = _crossing(curve.x, y0, k, half, +1)
    return right - left


def _crossing(x, y0, k, half, direction):
    i = k
    while 0 <= i + direction < y0.size:
        j = i + direction
        if y0[j] <= half:
            # interpolate between samples j and i
            x1, y1 = x[j], y0[j]
            x2, y2 = x[i], y0[i]
            if y2 == y1:
                return x1
            return x1 + (half - y1) * (x2 - x1) / (y2 - y1)
        i = j
    raise ValueError("no half-maximum crossing inside the domain")


def _lorentz(x, x0, w, a, off):
    q = (w / 2.0) ** 2
    return off + a * q / ((x - x0) ** 2 + q)


def lorentzian_fit(curve: Curve, max_iter: int = 200, tol: float = 1e-10) -> LorentzianFit:
    """Least-squares Lorentzian fit by damped Gauss-Newton.

    Seeded from the interpolated FWHM and the sample maximum; iterates
    until the relative parameter change drops below ``tol``. On
    non-convergence the best iterate is returned flagged.
    """
    x, y = curve.x, curve.y
    k = int(np.argmax(y))
    p = np.array([x[k], fwhm_interpolated(curve), y[k] - y.min(), y.min()])

    def cost(p):
        return float(np.sum((_lorentz(x, *p) - y) ** 2))

    lam = 1e-3
    c = cost(p)
    converged = False
    for _ in range(max_iter):
        x0, w, a, off = p
        q = (w / 2.0) ** 2
        dx = x - x0
        denom = q + dx**2
        u = q / denom
        r = off + a * u - y
        J = np.empty((x.size, 4))
        J[:, 0] = a * q * 2 * dx / denom**2
        J[:, 1] = a * (w / 2.0) * dx**2 / denom**2
        J[:, 2] = u
        J[:, 3] = 1.0
        g = J.T @ r
        H = J.T @ J
        step = None
        for _ in range(25):
            try:
                step = np.linalg.solve(H + lam * np.diag(np.diag(H)) + 1e-300 * np.eye(4), -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            p_new = p + step
            c_new = cost(p_new)
            if np.isfinite(c_new) and c_new <= c:
                lam = max(lam / 10, 1e-12)
                break
            lam *= 10
        else:
            break
        rel = np.max(np.abs(step) / np.maximum(np.abs(p), 1e-300))
        p, c = p_new, c_new
        if rel < tol:
            converged = True
            break
    x0, w, a, off = p
    rms = float(np.sqrt(c / x.size))
    return LorentzianFit(center=float(x0), fwhm=abs(float(w)), amplitude=float(a),
                         offset=float(off), residual_rms=rms, converged=converged)


def peak_find(curve: Curve) -> list[tuple[float, float]]:
    """Strict local maxima with 3-point parabolic refinement, sorted by x."""
    x, y = curve.x, curve.y
    peaks = []
    for i in range(1, x.size - 1):
        if y[i] > y[i - 1] and y[i] > y[i + 1]:
            denom = y[i - 1] - 2 * y[i] + y[i + 1]
            if denom != 0:
                frac = 0.5 * (y[i - 1] - y[i + 1]) / denom
                xp = x[i] + frac * (x[i + 1] - x[i])
                yp = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * frac
            else:
                xp, yp = x[i], y[i]
            peaks.append((float(xp), float(yp)))
    return peaks


def two_level_steady_state(omega: float, gamma_pop: float, gamma_coh: float,
                           delta: float) -> float:
    """Steady-state excited population of the driven, damped two-level atom.

    rho_22 = 2 Omega^2 (gamma/Gamma) / (delta^2 + gamma^2 + 4 Omega^2 gamma/Gamma)

    Half maximum falls at delta^2 = gamma^2 + 4 Omega^2 gamma/Gamma, i.e.
    FWHM = 2 sqrt(gamma^2 + 4 Omega^2 gamma/Gamma): power broadening. The
    resonant saturation limit is 1/2.
    """
    if gamma_pop <= 0 or gamma_coh <= 0:
        raise ValueError("rates must be positive")
    s = omega**2 * gamma_coh / gamma_pop
    return 2 * s / (delta**2 + gamma_coh**2 + 4 * s)


def power_broadened_fwhm(omega: float, gamma_pop: float, gamma_coh: float) -> float:
    """FWHM (rad/s) of the steady-state excited-population resonance."""
    return 2.0 * np.sqrt(gamma_coh**2 + 4 * omega**2 * gamma_coh / gamma_pop)


def cpt_coherence(omega_12: float, omega_23: float) -> float:
    """Trapped ground-state coherence of the resonant Lambda system,
    -Omega12*Omega23 / (Omega12^2 + Omega23^2)."""
    if omega_12 == 0 and omega_23 == 0:
        raise ValueError("at least one Rabi rate must be nonzero")
    return -omega_12 * omega_23 / (omega_12**2 + omega_23**2)
