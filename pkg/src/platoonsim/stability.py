"""Linear stability tools: analytic thresholds, ring-closure roots, and a
numerical eigenvalue oracle.

Two independent routes are kept deliberately separate.  The analytic
thresholds (``crit_noconn``, ``crit_twoway``) are closed-form long-wave
criteria for uniform platoons.  The oracle (``eig_oracle``) linearizes the
actual vehicle laws about equilibrium for a concrete finite ring and computes
the spectrum of the full 2n-dimensional Jacobian, which is what the analytic
results must be checked against.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .models import ModelKind
from .ovfunc import OVParams, ov_prime

__all__ = [
    "UNSTABLE_FOR_ALL_A",
    "StabilityQuery",
    "StabilityResult",
    "CharacteristicRoot",
    "crit_noconn",
    "crit_twoway",
    "neutral_line",
    "char_roots",
    "char_root_residual",
    "build_jacobian",
    "eig_oracle",
    "dominant_head_mode",
    "classify",
]

# threshold value meaning "no sensitivity stabilizes this configuration";
# positive infinity so that `a > threshold` is False for every finite a
UNSTABLE_FOR_ALL_A = math.inf


@dataclass(frozen=True)
class StabilityQuery:
    """One analytic-vs-oracle comparison point for a uniform ring."""

    model: ModelKind
    size: int
    m_platoons: int
    h: float
    a: float
    p: float = 0.3
    t_d: float = 0.0


@dataclass(frozen=True)
class StabilityResult:
    """Analytic threshold and oracle spectral abscissa for one query."""

    query: StabilityQuery
    analytic_threshold: float
    analytic_stable: bool
    oracle_max_real: float
    oracle_stable: bool

    @property
    def margin_frac(self) -> float:
        """Relative distance of a from the analytic neutral line."""
        if not math.isfinite(self.analytic_threshold):
            return math.inf
        return abs(self.query.a - self.analytic_threshold) / self.analytic_threshold

    @property
    def agree(self) -> bool:
        return self.analytic_stable == self.oracle_stable


@dataclass(frozen=True)
class CharacteristicRoot:
    """One ring-closure root r for mode k, with its branch sign."""

    r: complex
    k: int
    branch: int  # +1 or -1


def crit_noconn(size: int, h: float, ovp: OVParams) -> float:
    """Stability threshold a* for unconnected uniform platoons of ``size``.

    The ring is asymptotically stable when a > 2 N V'(h) / ((N-1)^2 + 1).
    Defined for size >= 2; a size-1 "platoon" is an HDV and has no platoon
    criterion of this form.
    """
    if int(size) != size or size < 2:
        raise ValueError(f"platoon size must be an integer >= 2, got {size}")
    vp = ov_prime(ovp, h)
    return 2.0 * size * vp / ((size - 1) ** 2 + 1)


def crit_twoway(size: int, h: float, p: float, t_d: float, ovp: OVParams) -> float:
    """Stability threshold a* for two-way connected uniform platoons.

    With D = (1 + 2p) * (N - 2 t_d V'(h)), the ring is stable when a > 2 V'(h) / D.
    When D <= 0 no finite sensitivity stabilizes the ring and
    ``UNSTABLE_FOR_ALL_A`` (positive infinity) is returned; a negative number
    is never presented as a threshold.  p = 0 gives the front-connected case.
    """
    if int(size) != size or size < 1:
        raise ValueError(f"platoon size must be an integer >= 1, got {size}")
    if p < 0.0 or t_d < 0.0:
        raise ValueError(f"need p >= 0 and t_d >= 0, got p={p}, t_d={t_d}")
    vp = ov_prime(ovp, h)
    D = (1.0 + 2.0 * p) * (size - 2.0 * t_d * vp)
    if D <= 0.0:
        return UNSTABLE_FOR_ALL_A
    return 2.0 * vp / D


def neutral_line(
    model: ModelKind,
    size: int,
    h_lo: float,
    h_hi: float,
    n_samples: int,
    ovp: OVParams,
    p: float = 0.3,
    t_d: float = 0.0,
) -> np.ndarray:
    """Sample the neutral stability line a*(h) on [h_lo, h_hi].

    Returns an (n_samples, 2) array of (h, a*) rows; rows inside an
    unstable-for-all-a gap carry ``inf`` in the second column so plotting
    layers can show the gap.  The range must lie inside the OV ramp
    (h_s, h_f), where V' is positive.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    if not (ovp.h_s < h_lo < h_hi < ovp.h_f):
        raise ValueError(
            f"headway range [{h_lo}, {h_hi}] must lie strictly inside "
            f"({ovp.h_s}, {ovp.h_f})"
        )
    hs = np.linspace(h_lo, h_hi, n_samples)
    out = np.empty((n_samples, 2))
    for i, h in enumerate(hs):
        if model == ModelKind.LEADER_NO_CONNECTION:
            a_star = crit_noconn(size, float(h), ovp)
        elif model == ModelKind.LEADER_FRONT_CONNECTED:
            a_star = crit_twoway(size, float(h), 0.0, t_d, ovp)
        elif model == ModelKind.LEADER_TWO_WAY_CONNECTED:
            a_star = crit_twoway(size, float(h), p, t_d, ovp)
        else:
            raise ValueError(f"no neutral line for model {model}")
        out[i] = (h, a_star)
    return out


def char_roots(size: int, m_platoons: int) -> List[CharacteristicRoot]:
    """All ring-closure roots for unconnected uniform platoons.

    For each mode k = 1..m the two branches of
    r = (-N +- sqrt(N^2 - 4 (N-1) (1 - exp(2 pi i k / m)))) / (2 (N-1))
    satisfy ((N-1) r + 1)^m (r + 1)^m = 1.  Mode k = m contributes the
    structural roots r = 0 and r = -N / (N-1).
    """
    if int(size) != size or size < 2:
        raise ValueError(f"platoon size must be an integer >= 2, got {size}")
    if int(m_platoons) != m_platoons or m_platoons < 1:
        raise ValueError(f"platoon count must be an integer >= 1, got {m_platoons}")
    N = size
    roots = []
    for k in range(1, m_platoons + 1):
        omega = cmath.exp(2j * cmath.pi * k / m_platoons)
        disc = cmath.sqrt(N * N - 4.0 * (N - 1) * (1.0 - omega))
        for branch in (+1, -1):
            r = (-N + branch * disc) / (2.0 * (N - 1))
            roots.append(CharacteristicRoot(r=r, k=k, branch=branch))
    return roots


def char_root_residual(root: CharacteristicRoot, size: int, m_platoons: int) -> float:
    """|((N-1) r + 1)^m (r + 1)^m - 1| for one closure root."""
    N = size
    m = m_platoons
    val = ((N - 1) * root.r + 1.0) ** m * (root.r + 1.0) ** m
    return abs(val - 1.0)


def _head_offsets(sizes: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    sizes = np.asarray(sizes, dtype=int)
    offs = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    heads = offs + sizes - 1
    return offs, heads


def build_jacobian(
    sizes: Sequence[int],
    leader_kind: ModelKind,
    h: float,
    a: float,
    p: float,
    t_d: float,
    ovp: OVParams,
) -> np.ndarray:
    """Jacobian of the full linearized ring about the uniform-flow equilibrium.

    State ordering is (positions, speeds); the matrix has the block form
    [[0, I], [K, C]].  Communication delay enters through a first-order Taylor
    expansion of the delayed gaps, Delta(t - t_d) ~ Delta(t) - t_d Delta'(t),
    which adds speed coupling to the connected-leader rows.  Size-1 platoons
    always contribute plain HDV rows.
    """
    sizes = [int(s) for s in sizes]
    if any(s < 1 for s in sizes):
        raise ValueError("platoon sizes must be >= 1")
    n = sum(sizes)
    m = len(sizes)
    vp = ov_prime(ovp, h)
    offs, heads = _head_offsets(sizes)

    K = np.zeros((n, n))
    C = np.zeros((n, n))
    connected = leader_kind in (
        ModelKind.LEADER_FRONT_CONNECTED,
        ModelKind.LEADER_TWO_WAY_CONNECTED,
    )
    p_eff = 0.0 if leader_kind == ModelKind.LEADER_FRONT_CONNECTED else p

    for i, N in enumerate(sizes):
        off = offs[i]
        head = heads[i]
        # followers relax toward the average gap to their own head
        for j in range(1, N):  # 1-based follower index j, head is j = N
            g = off + j - 1
            cnt = N - j
            K[g, head] += a * vp / cnt
            K[g, g] -= a * vp / cnt
            C[g, g] -= a
        if N == 1 or not connected:
            # HDV or unconnected leader: plain OVM on the vehicle ahead
            nxt = (head + 1) % n
            K[head, nxt] += a * vp
            K[head, head] -= a * vp
            C[head, head] -= a
        else:
            front = heads[(i + 1) % m]
            rear = heads[(i - 1) % m]
            nf = sizes[(i + 1) % m]  # front head-to-head gap spans the platoon ahead
            nr = N  # rear gap spans this platoon's own body
            wf = (1.0 + p_eff) * a * vp / nf
            wr = p_eff * a * vp / nr
            K[head, front] += wf
            K[head, head] -= wf
            K[head, head] -= wr
            K[head, rear] += wr
            # first-order delay: -t_d * (gap rate) rides on each gap term
            C[head, front] -= wf * t_d
            C[head, head] += wf * t_d
            C[head, head] += wr * t_d
            C[head, rear] -= wr * t_d
            C[head, head] -= a
    top = np.hstack([np.zeros((n, n)), np.eye(n)])
    bottom = np.hstack([K, C])
    return np.vstack([top, bottom])


def eig_oracle(
    sizes: Sequence[int],
    leader_kind: ModelKind,
    h: float,
    a: float,
    p: float,
    t_d: float,
    ovp: OVParams,
    zero_tol: float = 1e-8,
) -> float:
    """Spectral abscissa of the linearized ring, excluding the translation mode.

    Builds the full Jacobian, drops structural zero eigenvalues (|lambda| <
    ``zero_tol``; uniform translation is always one), and returns the largest
    remaining real part.  Negative means the finite ring is asymptotically
    stable.
    """
    J = build_jacobian(sizes, leader_kind, h, a, p, t_d, ovp)
    eig = scipy.linalg.eigvals(J)
    keep = np.abs(eig) >= zero_tol
    if not np.any(keep):
        raise RuntimeError("no non-structural eigenvalues; degenerate system")
    return float(np.max(eig[keep].real))


def dominant_head_mode(
    sizes: Sequence[int],
    leader_kind: ModelKind,
    h: float,
    a: float,
    p: float,
    t_d: float,
    ovp: OVParams,
    zero_tol: float = 1e-8,
) -> Tuple[float, int]:
    """Spectral abscissa plus the ring wavenumber of the least-damped mode.

    For uniform rings the platoon heads are evenly spaced, so the eigenvector
    of the least-damped eigenvalue restricted to head positions is (close to)
    a discrete Fourier mode of the m heads; its wavenumber k in 1..m-1
    identifies which spatial pattern grows or decays slowest.
    """
    J = build_jacobian(sizes, leader_kind, h, a, p, t_d, ovp)
    eig, vecs = scipy.linalg.eig(J)
    keep = np.flatnonzero(np.abs(eig) >= zero_tol)
    idx = keep[np.argmax(eig[keep].real)]
    _, heads = _head_offsets(sizes)
    head_comp = vecs[heads, idx]
    spectrum = np.fft.fft(head_comp)
    k = int(np.argmax(np.abs(spectrum)))
    return float(eig[idx].real), k


def classify(query: StabilityQuery, ovp: OVParams) -> StabilityResult:
    """Evaluate the analytic criterion and the oracle for one uniform query."""
    if query.model == ModelKind.LEADER_NO_CONNECTION:
        a_star = crit_noconn(query.size, query.h, ovp)
    elif query.model == ModelKind.LEADER_FRONT_CONNECTED:
        a_star = crit_twoway(query.size, query.h, 0.0, query.t_d, ovp)
    elif query.model == ModelKind.LEADER_TWO_WAY_CONNECTED:
        a_star = crit_twoway(query.size, query.h, query.p, query.t_d, ovp)
    else:
        raise ValueError(f"no analytic criterion for model {query.model}")
    max_re = eig_oracle(
        [query.size] * query.m_platoons,
        query.model,
        query.h,
        query.a,
        query.p,
        query.t_d,
        ovp,
    )
    return StabilityResult(
        query=query,
        analytic_threshold=a_star,
        analytic_stable=query.a > a_star,
        oracle_max_real=max_re,
        oracle_stable=max_re < 0.0,
    )
