"""Parametric signal models built from an estimated signal subspace.

A finite-rank signal obeys a linear recurrence ``s_n = sum_k a_k s_{n-k}``;
its characteristic roots carry damping rates and frequencies, and complex
amplitudes complete the explicit form ``s_n = sum_m c_m mu_m^n`` (real form:
damped sinusoids ``A rho^n cos(2 pi omega n + phi)``).
"""

import cmath
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lstsq

from .exceptions import NonForecastableError

__all__ = [
    "LinearRecurrence",
    "SinusoidTerm",
    "SignalModel",
    "min_norm_lrr",
    "esprit_roots",
    "characteristic_roots",
    "roots_to_terms",
    "estimate_amplitudes",
]

CONDITION_WARN_LIMIT = 1e12


@dataclass(frozen=True)
class LinearRecurrence:
    """Coefficients ``a_1 ... a_tau`` of ``s_n = sum_k a_k s_{n-k}``
    (``a_1`` multiplies the most recent value)."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           np.asarray(self.coefficients, dtype=np.float64))

    @property
    def order(self):
        return self.coefficients.size

    def extend(self, values, steps):
        """Continue a governed series ``steps`` points past its end."""
        tau = self.order
        values = np.asarray(values, dtype=np.float64)
        if values.size < tau:
            raise ValueError(f"need at least {tau} seed values, got {values.size}")
        buf = list(values[-tau:])
        rev = self.coefficients  # a_1 ... a_tau
        out = np.empty(int(steps))
        for t in range(int(steps)):
            nxt = float(np.dot(rev, buf[::-1]))
            out[t] = nxt
            buf.pop(0)
            buf.append(nxt)
        return out

    def residuals(self, values):
        """``s_n - sum_k a_k s_{n-k}`` over every applicable n."""
        v = np.asarray(values, dtype=np.float64)
        tau = self.order
        if v.size <= tau:
            raise ValueError("series shorter than the recurrence order")
        pred = np.zeros(v.size - tau)
        for k, a in enumerate(self.coefficients, start=1):
            pred += a * v[tau - k : v.size - k]
        return v[tau:] - pred


def min_norm_lrr(basis):
    """Minimum-norm linear recurrence of order L-1 governing the signals in
    the column span of ``basis`` (an L x r orthonormal matrix).

    The coefficient vector is ``(sum_m pi_m U_m-without-last) / (1 - nu^2)``
    with ``pi_m`` the last coordinates and ``nu^2 = sum pi_m^2``; for
    ``L = r + 1`` this is the unique minimal recurrence.

    Raises
    ------
    NonForecastableError
        When ``nu^2 = 1`` (vertical subspace), no such recurrence exists.
    """
    U = np.asarray(basis, dtype=np.float64)
    if U.ndim == 1:
        U = U[:, None]
    L = U.shape[0]
    if L < 2:
        raise ValueError("basis vectors must have at least 2 coordinates")
    pi = U[-1, :]
    nu2 = float(pi @ pi)
    if nu2 >= 1.0 - 1e-10:
        raise NonForecastableError(
            f"vertical component subspace (nu^2 = {nu2:.12f}); no governing "
            "recurrence of order L-1 exists"
        )
    head = U[:-1, :] @ pi / (1.0 - nu2)  # (a_{L-1}, ..., a_1)
    return LinearRecurrence(coefficients=head[::-1])


def esprit_roots(basis, cond=1e-12):
    """Characteristic roots from the shift-invariance of the subspace basis.

    Eigenvalues of ``pinv(U-without-last-row) @ U-without-first-row``; the
    pseudo-inverse is taken through a rank-revealing orthogonal
    factorisation with relative threshold ``cond``.
    """
    U = np.asarray(basis, dtype=np.float64)
    if U.ndim == 1:
        U = U[:, None]
    L, r = U.shape
    if r < 1 or L < r + 1:
        raise ValueError(f"need L >= r + 1 rows; got L={L}, r={r}")
    shift, _, rank, _ = lstsq(U[:-1, :], U[1:, :], cond=cond, lapack_driver="gelsy")
    if rank < r:
        raise ValueError("rank-deficient shifted basis; cannot estimate roots")
    return np.linalg.eigvals(shift)


def characteristic_roots(lrr, cluster_tol=1e-6):
    """Roots of ``mu^tau - sum_k a_k mu^{tau-k}`` with multiplicities.

    Roots closer than ``cluster_tol`` (relative to the largest magnitude)
    are merged; multiple roots are numerically fragile, so noisy inputs in
    practice report simple roots.
    """
    a = lrr.coefficients if isinstance(lrr, LinearRecurrence) else np.asarray(lrr, dtype=np.float64)
    if a.size == 0:
        return []
    poly = np.concatenate(([1.0], -a))
    roots = np.roots(poly)
    scale = max(np.max(np.abs(roots)), 1.0) if roots.size else 1.0
    tol = cluster_tol * scale
    remaining = sorted(roots, key=lambda z: (-abs(z), cmath.phase(z)))
    clustered = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        rest = []
        for z in remaining:
            if abs(z - seed) <= tol:
                members.append(z)
            else:
                rest.append(z)
        remaining = rest
        clustered.append((complex(np.mean(members)), len(members)))
    return clustered


@dataclass(frozen=True)
class SinusoidTerm:
    """One real term ``A n^power rho^n cos(2 pi omega n + phi)``."""

    amplitude: float
    damping: float
    frequency: float
    phase: float
    power: int = 0

    def evaluate(self, n):
        n = np.asarray(n, dtype=np.float64)
        return (self.amplitude * n**self.power * self.damping**n
                * np.cos(2 * np.pi * self.frequency * n + self.phase))


@dataclass
class SignalModel:
    """Characteristic roots with multiplicities, complex amplitudes and the
    derived real (damped-sinusoid) form."""

    roots: list  # [(complex root, multiplicity)]
    amplitudes: np.ndarray  # complex, one per (root, power) column
    terms: list = field(default_factory=list)
    condition_number: float = float("nan")

    def evaluate(self, n):
        n = np.asarray(n, dtype=np.float64)
        out = np.zeros(n.shape, dtype=complex)
        col = 0
        for mu, mult in self.roots:
            for power in range(mult):
                out += self.amplitudes[col] * n**power * np.power(mu, n)
                col += 1
        return out.real

    def to_dict(self):
        return {
            "roots": [{"re": mu.real, "im": mu.imag, "mult": mult} for mu, mult in self.roots],
            "terms": [
                {"A": t.amplitude, "rho": t.damping, "omega": t.frequency, "phi": t.phase}
                | ({"power": t.power} if t.power else {})
                for t in self.terms
            ],
        }


def _wrap_phase(phi):
    """Map a phase to (-pi, pi]."""
    phi = float((phi + np.pi) % (2 * np.pi) - np.pi)
    return np.pi if phi == -np.pi else phi


def roots_to_terms(roots, amplitudes, tol=1e-8):
    """Convert a conjugate-closed root/amplitude set into real damped
    sinusoids ``A rho^n cos(2 pi omega n + phi)`` with ``A >= 0`` and
    ``phi`` in (-pi, pi].

    Real roots become pure exponentials (frequency 0, or 0.5 for negative
    roots); each conjugate pair merges into one sinusoid.
    """
    flat = []
    col = 0
    for mu, mult in _normalize_roots(roots):
        for power in range(mult):
            flat.append((complex(mu), power, complex(amplitudes[col])))
            col += 1
    if col != len(np.atleast_1d(amplitudes)):
        raise ValueError("amplitude count does not match total root multiplicity")

    scale = max((abs(mu) for mu, _, _ in flat), default=1.0)
    terms = []
    used = [False] * len(flat)
    for i, (mu, power, c) in enumerate(flat):
        if used[i]:
            continue
        used[i] = True
        if abs(mu.imag) <= tol * max(abs(mu), 1.0):
            rho = abs(mu.real)
            freq = 0.0 if mu.real >= 0 else 0.5
            if abs(c.imag) > tol * max(abs(c), 1.0):
                raise ValueError(f"real root {mu:.6g} carries a complex amplitude {c:.6g}")
            amp = abs(c.real)
            phase = 0.0 if c.real >= 0 else np.pi
            terms.append(SinusoidTerm(amp, rho, freq, phase, power))
            continue
        # find the conjugate partner
        partner = None
        for j in range(i + 1, len(flat)):
            mu2, power2, _ = flat[j]
            if used[j] or power2 != power:
                continue
            if abs(mu2 - mu.conjugate()) <= 10 * tol * scale:
                partner = j
                break
        if partner is None:
            raise ValueError(f"complex root {mu:.6g} has no conjugate partner")
        used[partner] = True
        c2 = flat[partner][2]
        if abs(c2 - c.conjugate()) > 1e-6 * max(abs(c), 1.0) + 1e-12:
            warnings.warn("amplitudes of a conjugate root pair are not conjugate; "
                          "averaging to the nearest real term")
        pos = mu if mu.imag > 0 else flat[partner][0]
        cpos = c if mu.imag > 0 else c2
        amp = 2.0 * abs(cpos)
        phase = _wrap_phase(cmath.phase(cpos)) if amp > 0 else 0.0
        terms.append(SinusoidTerm(amp, abs(pos), cmath.phase(pos) / (2 * np.pi), phase, power))
    terms.sort(key=lambda t: (t.frequency, -t.amplitude))
    return terms


def _normalize_roots(roots):
    out = []
    for entry in roots:
        if isinstance(entry, tuple):
            mu, mult = entry
            out.append((complex(mu), int(mult)))
        else:
            out.append((complex(entry), 1))
    return out


def estimate_amplitudes(signal, roots):
    """Least-squares amplitudes of ``s_n ~ sum c_m n^l mu_m^n`` on n = 1..N.

    ``roots`` may be plain complex values or ``(root, multiplicity)`` pairs;
    a multiplicity k root contributes columns ``n^l mu^n`` for l < k.  The
    design-matrix condition number is reported on the model and a warning is
    emitted past 1e12.
    """
    s = np.asarray(signal, dtype=np.float64)
    pairs = _normalize_roots(roots)
    n_unknowns = sum(mult for _, mult in pairs)
    if n_unknowns == 0:
        raise ValueError("no roots supplied")
    if any(mu == 0 for mu, _ in pairs):
        raise ValueError("characteristic roots must be nonzero")
    if s.size < n_unknowns:
        raise ValueError(f"series of length {s.size} cannot fit {n_unknowns} amplitudes")
    n = np.arange(1, s.size + 1, dtype=np.float64)
    cols = []
    for mu, mult in pairs:
        base = np.exp(n * np.log(complex(mu)))
        for power in range(mult):
            cols.append(n**power * base)
    design = np.column_stack(cols)
    cond = float(np.linalg.cond(design))
    if cond > CONDITION_WARN_LIMIT:
        warnings.warn(f"ill-conditioned amplitude system (cond = {cond:.3e})")
    coeffs, *_ = np.linalg.lstsq(design, s.astype(complex), rcond=None)
    terms = roots_to_terms(pairs, coeffs)
    return SignalModel(roots=pairs, amplitudes=coeffs, terms=terms, condition_number=cond)
