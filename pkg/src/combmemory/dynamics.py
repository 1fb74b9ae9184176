"""Space-time write/read dynamics and numerical kernel validation.

Two independent routes compute the same physics:

* analytic route — the closed-form Bessel-kernel integrals for the stored
  coherence profile and the retrieved envelope, evaluated by composite
  Simpson quadrature with a grid-refinement error estimate;
* PDE route — a marching integrator for the coupled envelope equations
  (d/dt + gamma_s) b = sqrt(d gamma_s) a,  d/dz a = -sqrt(d gamma_s) b,
  with the decay handled by an exact exponential factor per step and one
  corrector pass for second-order accuracy.

Everything internal runs in scaled units (tau = gamma_s t, z in [0,1]); the
public API speaks SI seconds.  Only the pump-projected scalar field is
simulated: comb components orthogonal to the pump never couple.

The end-to-end transfer function is measured with trailing probes: the
coherence decays at gamma_s during write, so only input arriving within the
last ~1/gamma_s of the window is stored.  A probe placed at the end of the
window has its whole composite response captured in the read record, and the
ratio of output to input spectral amplitudes reproduces the channel kernel.
Referenced to a read clock that restarts at the end of the write window, the
measured gain equals -K_omega * exp(i omega T).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .channel import MemoryParams, kernel
from .errors import (
    DimensionError,
    PhysicsError,
    ProbeDesignError,
    ResolutionError,
    ResolutionWarning,
)

__all__ = [
    "FieldGrid",
    "StoredProfile",
    "bessel_j0",
    "simpson_weights",
    "tukey_window",
    "write_analytic",
    "read_analytic",
    "read_horizon",
    "pde_write",
    "pde_read",
    "energy_budget",
    "transfer_function_estimate",
    "expected_gain",
]

QUAD_ERROR_LIMIT = 1e-6      # estimated relative quadrature error above this errors out
LEAKAGE_LIMIT = 1e-2         # capture-bias estimate above this is a probe-design error
PROBE_BAND_LIMIT = 0.3       # |omega| / gamma_s supported by the probe protocol
CFL_WARN = 0.1               # gamma_s * dt above this is under-resolved marching


# ----------------------------------------------------------------------------
# special functions and quadrature weights

_SERIES_CUT = 12.0


def bessel_j0(x):
    """Zeroth-order Bessel function of the first kind.

    Power series below x = 12, Hankel asymptotic expansion beyond, with
    per-element truncation at each point's smallest term.  Absolute error is
    below 1e-12 for x <= 50 (the arguments 2*sqrt(...) used here stay well
    inside that).  Accepts scalars or arrays; even in x.
    """
    scalar = np.isscalar(x) or np.ndim(x) == 0
    ax = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    out = np.empty_like(ax)

    small = ax < _SERIES_CUT
    if small.any():
        xs = ax[small]
        q = 0.25 * xs * xs
        term = np.ones_like(xs)
        acc = np.ones_like(xs)
        for k in range(1, 45):  # converged to < 1e-18 of the peak term at x = 12
            term = term * (-q) / (k * k)
            acc = acc + term
        out[small] = acc

    if (~small).any():
        xl = ax[~small]
        P = np.ones_like(xl)
        Q = np.zeros_like(xl)
        active = np.ones(xl.shape, dtype=bool)
        prev = np.full_like(xl, np.inf)
        ak = 1.0
        for k in range(1, 40):
            ak = ak * (-((2 * k - 1) ** 2)) / (8.0 * k)
            t = ak / xl**k
            # freeze each point once its asymptotic terms start growing
            active &= ~(np.abs(t) > prev)
            if not active.any():
                break
            s = (-1) ** (k // 2) if k % 2 == 0 else (-1) ** ((k - 1) // 2)
            if k % 2 == 0:
                P = np.where(active, P + s * t, P)
            else:
                Q = np.where(active, Q + s * t, Q)
            prev = np.where(active, np.abs(t), prev)
        chi = xl - 0.25 * np.pi
        out[~small] = np.sqrt(2.0 / (np.pi * xl)) * (P * np.cos(chi) - Q * np.sin(chi))

    return float(out[0]) if scalar else out


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights for n uniform samples with spacing h.

    An odd interval count is closed with a 3/8-rule tail, so any n >= 3 is
    integrated at full (fourth) order.
    """
    if n < 3:
        raise DimensionError("composite Simpson needs at least 3 samples")
    w = np.zeros(n)
    m = n - 1
    if m % 2 == 0:
        w[0] = w[-1] = 1.0
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= h / 3.0
    elif n == 4:
        w[:] = np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * h / 8.0)
    else:
        k = n - 3  # Simpson over samples [0, k-1], 3/8 tail over the last four
        w[0] = w[k - 1] = 1.0
        w[1:k - 1:2] = 4.0
        w[2:k - 1:2] = 2.0
        w *= h / 3.0
        w[k - 1:] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * h / 8.0)
    return w


def tukey_window(n: int, taper: float = 0.1) -> np.ndarray:
    """Raised-cosine (Tukey) window; ``taper`` is the total cosine fraction."""
    if not (0.0 <= taper <= 1.0):
        raise PhysicsError("taper must lie in [0, 1]")
    t = np.linspace(0.0, 1.0, int(n))
    w = np.ones(int(n))
    if taper == 0.0:
        return w
    edge = taper / 2.0
    lo = t < edge
    hi = t > 1.0 - edge
    w[lo] = 0.5 * (1.0 + np.cos(np.pi * (t[lo] / edge - 1.0)))
    w[hi] = 0.5 * (1.0 + np.cos(np.pi * ((t[hi] - 1.0 + edge) / edge)))
    return w


# ----------------------------------------------------------------------------
# grids

@dataclass(frozen=True)
class FieldGrid:
    """Discretized fields a(z, t) and b(z, t) from a PDE run (SI time)."""

    z_points: np.ndarray
    t_points: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z_points, dtype=float)
        t = np.asarray(self.t_points, dtype=float)
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        if np.any(np.diff(z) <= 0) or np.any(np.diff(t) <= 0):
            raise PhysicsError("grids must be strictly ascending")
        if a.shape != (z.size, t.size) or b.shape != a.shape:
            raise DimensionError("field arrays must be shaped (n_z, n_t)")
        for arr in (a, b):
            if not np.all(np.isfinite(arr.view(float))):
                raise PhysicsError("fields must be finite everywhere")
        for arr in (z, t, a, b):
            arr.flags.writeable = False
        object.__setattr__(self, "z_points", z)
        object.__setattr__(self, "t_points", t)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def to_csv(self, path):
        """Flat (z, t, re_a, im_a, re_b, im_b) table; size is n_z * n_t rows."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["z", "t", "re_a", "im_a", "re_b", "im_b"])
            for i, z in enumerate(self.z_points):
                for j, t in enumerate(self.t_points):
                    w.writerow([
                        f"{z:.15g}", f"{t:.15g}",
                        f"{self.a[i, j].real:.15g}", f"{self.a[i, j].imag:.15g}",
                        f"{self.b[i, j].real:.15g}", f"{self.b[i, j].imag:.15g}",
                    ])


@dataclass(frozen=True)
class StoredProfile:
    """Coherence profile b(z, T) left in the ensemble after the write window."""

    z_points: np.ndarray
    b_T: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z_points, dtype=float)
        b = np.asarray(self.b_T, dtype=complex)
        if z.ndim != 1 or b.shape != z.shape:
            raise DimensionError("profile needs matching 1-d z and b arrays")
        if np.any(np.diff(z) <= 0):
            raise PhysicsError("z grid must be strictly ascending")
        if not np.all(np.isfinite(b.view(float))):
            raise PhysicsError("profile must be finite")
        z.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "z_points", z)
        object.__setattr__(self, "b_T", b)

    @property
    def stored_energy(self) -> float:
        """integral |b|^2 dz over the ensemble (trapezoid on the stored grid)."""
        return float(np.trapezoid(np.abs(self.b_T) ** 2, self.z_points))


def _uniform_spacing(x: np.ndarray, name: str) -> float:
    dx = np.diff(x)
    if dx.size == 0:
        raise DimensionError(f"{name} grid needs at least 2 samples")
    if np.abs(dx - dx[0]).max() > 1e-9 * abs(dx[0]):
        raise DimensionError(f"{name} grid must be uniform")
    return float(dx[0])


# ----------------------------------------------------------------------------
# analytic route

def _stored_quadrature(z, samples, taus, d):
    """b(z) = sqrt(d) int e^{-(Gamma-tau)} J0(2 sqrt(d z (Gamma-tau))) a dtau."""
    wts = simpson_weights(taus.size, taus[1] - taus[0])
    back = taus[-1] - taus
    Jm = bessel_j0(2.0 * np.sqrt(np.maximum(np.outer(z, back) * d, 0.0)))
    return np.sqrt(d) * (Jm * (wts * np.exp(-back) * samples)[None, :]).sum(axis=1)


def write_analytic(a_in, params: MemoryParams, n_z: int) -> StoredProfile:
    """Stored coherence profile b(z, T) from the closed-form write kernel.

    Parameters
    ----------
    a_in : array_like of complex
        Input envelope sampled uniformly on [0, T] (SI amplitude units).
    params : MemoryParams
    n_z : int
        Number of output positions on [0, 1].

    The kernel integral is evaluated by composite Simpson quadrature over the
    sample grid.  A stride-2 refinement estimate guards the result; estimated
    relative error above 1e-6 raises ResolutionError.

    The profile matches the PDE route: b = sqrt(d gamma_s) * int e^{-gamma_s u}
    J0(2 sqrt(d gamma_s z u)) a(T-u) du, evaluated in scaled time with the
    input amplitude carried as a / sqrt(gamma_s).
    """
    a = np.asarray(a_in, dtype=complex) / np.sqrt(params.gamma_s)
    if a.ndim != 1 or a.size < 9:
        raise DimensionError("a_in must be a 1-d envelope with at least 9 samples")
    if n_z < 4:
        raise DimensionError("n_z must be at least 4")
    n_t = a.size
    Gamma = params.gamma_s * params.T
    tau = np.linspace(0.0, Gamma, n_t)
    z = np.linspace(0.0, 1.0, int(n_z))

    if params.d == 0.0:
        return StoredProfile(z, np.zeros(int(n_z), dtype=complex))

    fine = _stored_quadrature(z, a, tau, params.d)

    # Richardson check on a common subdomain (full grid when n_t is odd)
    m = n_t if n_t % 2 == 1 else n_t - 1
    sub_fine = _stored_quadrature(z, a[:m], tau[:m], params.d) if m != n_t else fine
    sub_coarse = _stored_quadrature(z, a[:m:2], tau[:m:2], params.d)
    scale = max(float(np.abs(fine).max()), 1e-300)
    est = float(np.abs(sub_fine - sub_coarse).max()) / 15.0 / scale
    if est > QUAD_ERROR_LIMIT:
        raise ResolutionError(
            f"write quadrature error estimate {est:.2e} exceeds {QUAD_ERROR_LIMIT:g}; "
            f"try at least {2 * n_t - 1} input samples"
        )
    return StoredProfile(z, fine)


def read_analytic(profile: StoredProfile, params: MemoryParams, t_read) -> np.ndarray:
    """Retrieved envelope at the ensemble output for the given read times.

    Evaluates -exp(-gamma_s t) sqrt(alpha/T) * integral over the stored
    profile, including the overall minus sign of the retrieved field.  Read
    times are SI seconds counted from the start of the read stage.
    """
    t = np.asarray(t_read, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise DimensionError("t_read must be a nonempty 1-d grid")
    if t.min() < 0:
        raise PhysicsError("read times must be >= 0")
    z = profile.z_points
    if z.size < 4:
        raise DimensionError("profile needs at least 4 z samples")
    _uniform_spacing(z, "z")  # quadrature below assumes a uniform grid
    if params.d == 0.0:
        return np.zeros(t.size, dtype=complex)
    d = params.d
    tau = params.gamma_s * t

    def out_env(zs, bs):
        wts = simpson_weights(zs.size, zs[1] - zs[0])
        Jr = bessel_j0(2.0 * np.sqrt(np.maximum(np.outer(tau, 1.0 - zs) * d, 0.0)))
        return -np.sqrt(d) * np.exp(-tau) * (Jr * (wts * bs)[None, :]).sum(axis=1)

    fine = out_env(z, profile.b_T)
    m = z.size if z.size % 2 == 1 else z.size - 1
    sub_fine = out_env(z[:m], profile.b_T[:m]) if m != z.size else fine
    sub_coarse = out_env(z[:m:2], profile.b_T[:m:2])
    scale = max(float(np.abs(fine).max()), 1e-300)
    est = float(np.abs(sub_fine - sub_coarse).max()) / 15.0 / scale
    if est > QUAD_ERROR_LIMIT:
        raise ResolutionError(
            f"read quadrature error estimate {est:.2e} exceeds {QUAD_ERROR_LIMIT:g}; "
            f"try at least {2 * z.size - 1} profile samples"
        )
    return np.sqrt(params.gamma_s) * fine  # scaled envelope back to SI amplitude


def read_horizon(profile: StoredProfile, params: MemoryParams, rel_tol: float = 1e-4) -> float:
    """Read window length: 5T capped, stopping early once retrieval has converged.

    Marches the retrieved energy in chunks of T/10 and stops when a chunk adds
    less than ``rel_tol`` of the running total.
    """
    chunk = params.T / 10.0
    total = 0.0
    t_end = chunk
    for k in range(50):  # cap at 5T
        t = np.linspace(k * chunk, (k + 1) * chunk, 129)
        env = read_analytic(profile, params, t)
        wts = simpson_weights(t.size, t[1] - t[0])
        inc = float(np.sum(wts * np.abs(env) ** 2))
        total += inc
        t_end = (k + 1) * chunk
        if total > 0.0 and inc < rel_tol * total and k >= 9:  # at least one T
            break
    return t_end


# ----------------------------------------------------------------------------
# PDE route

def _cumtrapz(y: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(0.5 * h * (y[1:] + y[:-1]), out=out[1:])
    return out


def _march(b0, boundary, h, d, n_z, record_output=False):
    """Advance the coupled pair over the scaled boundary samples.

    Exponential integrator in tau (exact decay factor, predictor-corrector
    source weights I0 = 1-e^{-h}, I1 = (h-1+e^{-h})/h) with the field slaved
    to the coherence through a cumulative trapezoid in z at every stage.
    """
    sq = np.sqrt(d)
    hz = 1.0 / (n_z - 1)
    e = np.exp(-h)
    I0 = 1.0 - e
    I1 = (h - 1.0 + e) / h
    b = b0.astype(complex).copy()
    a = boundary[0] - sq * _cumtrapz(b, hz)
    n_t = boundary.size
    if record_output:
        out = np.empty(n_t, dtype=complex)
        out[0] = a[-1]
        hist_a = hist_b = None
    else:
        hist_a = np.empty((n_z, n_t), dtype=complex)
        hist_b = np.empty((n_z, n_t), dtype=complex)
        hist_a[:, 0] = a
        hist_b[:, 0] = b
        out = None
    for j in range(1, n_t):
        b_star = b * e + sq * I0 * a
        a_star = boundary[j] - sq * _cumtrapz(b_star, hz)
        b = b * e + sq * ((I0 - I1) * a + I1 * a_star)
        a = boundary[j] - sq * _cumtrapz(b, hz)
        if record_output:
            out[j] = a[-1]
        else:
            hist_a[:, j] = a
            hist_b[:, j] = b
    return out, hist_a, hist_b, b


def pde_write(a_in, params: MemoryParams, n_z: int, n_t: int) -> FieldGrid:
    """Integrate the write stage over [0, T] with all atoms initially unexcited.

    ``a_in`` is the boundary envelope a(0, t): either an array of n_t uniform
    samples or a callable of SI time.  Warns when gamma_s * dt exceeds 0.1.
    """
    if n_z < 4 or n_t < 4:
        raise DimensionError("n_z and n_t must be at least 4")
    t = np.linspace(0.0, params.T, int(n_t))
    if callable(a_in):
        bound = np.asarray([a_in(tk) for tk in t], dtype=complex)
    else:
        bound = np.asarray(a_in, dtype=complex)
        if bound.shape != t.shape:
            raise DimensionError(f"a_in must provide exactly n_t = {n_t} samples")
    h = params.gamma_s * params.T / (n_t - 1)
    if h > CFL_WARN:
        warnings.warn(
            f"gamma_s * dt = {h:.3f} exceeds {CFL_WARN}; marching is under-resolved",
            ResolutionWarning,
            stacklevel=2,
        )
    z = np.linspace(0.0, 1.0, int(n_z))
    if params.d == 0.0:
        a = np.broadcast_to(bound, (int(n_z), int(n_t))).copy()
        return FieldGrid(z, t, a, np.zeros_like(a))
    # scaled field: a_tilde = a / sqrt(gamma_s); ratio-free quantities are
    # unaffected, b matches the analytic-kernel normalization
    sg = np.sqrt(params.gamma_s)
    _, ha, hb, _ = _march(np.zeros(int(n_z)), bound / sg, h, params.d, int(n_z))
    return FieldGrid(z, t, ha * sg, hb)


def pde_read(
    profile: StoredProfile,
    params: MemoryParams,
    n_z: int,
    n_t: int,
    t_max: float | None = None,
):
    """Integrate the read stage from a stored profile; dark input boundary.

    Returns ``(t_points, envelope)`` with the envelope taken at z = 1.  The
    horizon defaults to 5T with early stop once the retrieved energy converges
    (increment below 1e-4 of the total over the trailing T/10).
    """
    if n_z < 4 or n_t < 4:
        raise DimensionError("n_z and n_t must be at least 4")
    z = np.linspace(0.0, 1.0, int(n_z))
    if profile.z_points.size != z.size or np.abs(profile.z_points - z).max() > 1e-12:
        raise DimensionError("profile grid must match linspace(0, 1, n_z)")
    horizon = 5.0 * params.T if t_max is None else float(t_max)
    t = np.linspace(0.0, horizon, int(n_t))
    if params.d == 0.0:
        return t, np.zeros(int(n_t), dtype=complex)
    h = params.gamma_s * horizon / (n_t - 1)
    if h > CFL_WARN:
        warnings.warn(
            f"gamma_s * dt = {h:.3f} exceeds {CFL_WARN}; marching is under-resolved",
            ResolutionWarning,
            stacklevel=2,
        )
    out, _, _, _ = _march(
        profile.b_T, np.zeros(int(n_t), dtype=complex), h, params.d, int(n_z),
        record_output=True,
    )
    env = out * np.sqrt(params.gamma_s)  # scaled envelope back to SI amplitude
    if t_max is None:
        # early stop: drop the converged tail chunk by chunk (T/10 each)
        per = max(int(round((n_t - 1) / 50.0)), 1)
        energy = np.cumsum(np.abs(env) ** 2) * (t[1] - t[0])
        keep = n_t
        for k in range(10 * per, n_t, per):
            total = energy[min(k, n_t - 1)]
            inc = total - energy[k - per]
            if total > 0.0 and inc < 1e-4 * total:
                keep = k + 1
                break
        t, env = t[:keep], env[:keep]
    return t, env


def energy_budget(grid: FieldGrid, params: MemoryParams) -> dict:
    """Write-stage energy bookkeeping: input = transmitted + stored + decayed.

    Returns the four terms plus the relative residual.  The decayed term is
    2 gamma_s * double integral of |b|^2 (coherence loss during the window).
    """
    t, z = grid.t_points, grid.z_points
    wt = simpson_weights(t.size, _uniform_spacing(t, "t"))
    wz = simpson_weights(z.size, _uniform_spacing(z, "z"))
    e_in = float(np.sum(wt * np.abs(grid.a[0]) ** 2))
    e_out = float(np.sum(wt * np.abs(grid.a[-1]) ** 2))
    e_stored = float(np.sum(wz * np.abs(grid.b[:, -1]) ** 2))
    e_decay = float(2.0 * params.gamma_s * wz @ (np.abs(grid.b) ** 2 @ wt))
    resid = abs(e_in - e_out - e_stored - e_decay) / max(e_in, 1e-300)
    return {
        "input": e_in,
        "transmitted": e_out,
        "stored": e_stored,
        "decayed": e_decay,
        "residual": resid,
    }


# ----------------------------------------------------------------------------
# transfer-function measurement

def expected_gain(params: MemoryParams, omega):
    """Channel prediction for the measured gain: -K_omega * exp(i omega T)."""
    w = np.asarray(omega, dtype=float)
    g = -kernel(params, w) * np.exp(1j * w * params.T)
    return complex(g) if np.isscalar(omega) or w.ndim == 0 else g


def _probe_gain_analytic(d, Gamma, omega_hat, tau_p, probe, n_z, tau_r):
    wts_p = simpson_weights(tau_p.size, tau_p[1] - tau_p[0])
    z = np.linspace(0.0, 1.0, n_z)
    back = Gamma - tau_p
    Jw = bessel_j0(2.0 * np.sqrt(np.maximum(np.outer(z, back) * d, 0.0)))
    b = np.sqrt(d) * (Jw * (wts_p * np.exp(-back) * probe)[None, :]).sum(axis=1)

    wts_z = simpson_weights(n_z, z[1] - z[0])
    Jr = bessel_j0(2.0 * np.sqrt(np.maximum(np.outer(tau_r, 1.0 - z) * d, 0.0)))
    a_out = -np.sqrt(d) * np.exp(-tau_r) * (Jr * (wts_z * b)[None, :]).sum(axis=1)

    wts_r = simpson_weights(tau_r.size, tau_r[1] - tau_r[0])
    A_in = np.sum(wts_p * probe * np.exp(-1j * omega_hat * tau_p))
    A_out = np.sum(wts_r * a_out * np.exp(-1j * omega_hat * tau_r))
    return A_out / A_in


def _probe_gain_pde(d, Gamma, omega_hat, tau_p, probe, n_z, tau_r):
    h_w = tau_p[1] - tau_p[0]
    # fields vanish before the probe support; start marching at its left edge
    _, _, _, b_end = _march(np.zeros(n_z), probe, h_w, d, n_z)
    out, _, _, _ = _march(
        b_end, np.zeros(tau_r.size, dtype=complex), tau_r[1] - tau_r[0], d, n_z,
        record_output=True,
    )
    wts_p = simpson_weights(tau_p.size, h_w)
    wts_r = simpson_weights(tau_r.size, tau_r[1] - tau_r[0])
    A_in = np.sum(wts_p * probe * np.exp(-1j * omega_hat * tau_p))
    A_out = np.sum(wts_r * out * np.exp(-1j * omega_hat * tau_r))
    return A_out / A_in


def transfer_function_estimate(
    params: MemoryParams,
    probe_frequencies,
    T_read: float | None = None,
    *,
    path: str = "analytic",
    probe_width: float | None = None,
    taper: float = 0.1,
    n_probe: int = 1601,
    n_z: int = 1200,
    n_read: int = 6001,
) -> np.ndarray:
    """Measure the end-to-end write->read gain at the given frequencies.

    A smoothly windowed complex sinusoid occupying the trailing
    ``probe_width`` seconds of the write window is stored and retrieved; the
    output spectral amplitude on the read clock divided by the input spectral
    amplitude gives the complex gain, to be compared against
    ``expected_gain``: -K_omega * exp(i omega T).

    Frequencies are limited to |omega| <= 0.3 gamma_s.  The default probe
    width 0.002 |K_0| / (d gamma_s) keeps the capture-bias estimate
    d <gamma_s (T - t)> / |K_0| around 0.1%; probes whose estimate exceeds 1%
    raise ProbeDesignError.  ``path`` selects the analytic quadrature route or
    the PDE marching route.
    """
    omegas = np.atleast_1d(np.asarray(probe_frequencies, dtype=float))
    if np.any(np.abs(omegas) > PROBE_BAND_LIMIT * params.gamma_s):
        raise PhysicsError(
            f"probe frequencies must satisfy |omega| <= {PROBE_BAND_LIMIT} gamma_s"
        )
    if path not in ("analytic", "pde"):
        raise PhysicsError(f"unknown dynamics path {path!r}")
    if omegas.size == 0:
        return np.zeros(0, dtype=complex)
    if params.d == 0.0:
        return np.zeros(omegas.size, dtype=complex)

    Gamma = params.gamma_s * params.T
    K0 = abs(kernel(params, 0.0))
    if probe_width is None:
        probe_width = 0.002 * K0 / (params.d * params.gamma_s)
    w_hat = params.gamma_s * float(probe_width)
    if not (0.0 < w_hat <= Gamma):
        raise ProbeDesignError(
            f"probe width {probe_width:g} s does not fit in the write window"
        )
    tau_p = np.linspace(Gamma - w_hat, Gamma, int(n_probe))
    env = tukey_window(int(n_probe), taper)
    wts_p = simpson_weights(tau_p.size, tau_p[1] - tau_p[0])
    centroid = float(np.sum(wts_p * env * (Gamma - tau_p)) / np.sum(wts_p * env))
    leakage = params.d * centroid / K0
    if leakage > LEAKAGE_LIMIT:
        raise ProbeDesignError(
            f"capture-bias estimate {leakage:.3f} exceeds {LEAKAGE_LIMIT}; "
            "narrow the probe or raise the optical depth"
        )

    horizon = 5.0 * params.T if T_read is None else float(T_read)
    tau_r = np.linspace(0.0, params.gamma_s * horizon, int(n_read))
    measure = _probe_gain_analytic if path == "analytic" else _probe_gain_pde
    gains = np.empty(omegas.size, dtype=complex)
    for i, om in enumerate(omegas):
        om_hat = om / params.gamma_s
        probe = env * np.exp(1j * om_hat * tau_p)
        g_read = measure(params.d, Gamma, om_hat, tau_p, probe, int(n_z), tau_r)
        gains[i] = g_read
    return gains
