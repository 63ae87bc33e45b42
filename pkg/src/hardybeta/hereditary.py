"""Hereditary calculus on matrices: resolvents, gramians, Stein identities.

For an output pair ``(C, A)`` (``A`` an n-by-n complex matrix, ``C`` p-by-n)
and an admissible weight sequence this module evaluates

* the weighted resolvents ``R_k(zA) = sum_j (1/beta_{k+j}) (zA)^j``,
* the shifted observability gramians
  ``G^(k) = sum_j (1/beta_{j+k}) A^{*j} C^* C A^j``,
* the hereditary maps ``Gamma[X] = sum_j c_j A^{*j} X A^j`` and their shifted
  companions built from the quotient-series tables,
* Stein-identity residuals and a tolerance-qualified classification of the
  pair (contractive, isometric, hypercontractive, strongly stable, exactly
  observable).

All series are truncated adaptively with a certified absolute tail bound:
powers are dominated by ``K * q^j`` where ``q`` is built from the spectral
radius via ``rho_tilde = (1 + rho)/2`` and ``K`` is a running burn-in
estimate, while the scalar coefficient tail is bounded from the stored
tables plus a trailing-ratio extrapolation.  Series-summed quantities are
restricted to spectral radius at most 0.999.

Everything here is a pure function of immutable inputs; results are safe to
share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    DivergenceError,
    HereditaryDomainError,
    InvalidParameterError,
    ObservabilityError,
    SpectralRadiusError,
    TruncationError,
)
from .weights import WeightSequence, gamma_k_coeffs

#: series-summed quantities refuse spectral radius beyond this
RHO_MAX = 0.999

#: adaptive loops ignore decay-rate powers below this to avoid underflow noise
_UNDERFLOW = 1e-280


def hermitize(M: np.ndarray) -> np.ndarray:
    """Symmetrize roundoff: (M + M*) / 2."""
    return 0.5 * (M + M.conj().T)


def opnorm(M: np.ndarray) -> float:
    """Operator (spectral) norm."""
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def spectral_radius(A: np.ndarray) -> float:
    A = np.atleast_2d(np.asarray(A))
    return float(np.max(np.abs(np.linalg.eigvals(A)))) if A.size else 0.0


def min_eig(M: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part."""
    if M.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(hermitize(M))[0])


def psd_sqrt(M: np.ndarray) -> np.ndarray:
    """Hermitian square root; negative roundoff eigenvalues are clipped to 0."""
    lam, V = np.linalg.eigh(hermitize(M))
    lam = np.where(lam < 0.0, 0.0, lam)
    return hermitize((V * np.sqrt(lam)) @ V.conj().T)


def hermitian_inverse(M: np.ndarray, rank_tol: float = 1e-10) -> np.ndarray:
    """Inverse of a Hermitian positive definite matrix via eigen-solve.

    Refuses (rather than pseudo-inverts) matrices whose smallest eigenvalue
    falls below ``rank_tol`` times the largest.
    """
    lam, V = np.linalg.eigh(hermitize(M))
    if lam[0] <= rank_tol * max(lam[-1], 0.0) or lam[0] <= 0.0:
        raise ObservabilityError(
            f"matrix numerically singular: eig range [{lam[0]:.3e}, {lam[-1]:.3e}]")
    return hermitize((V / lam) @ V.conj().T)


@dataclass
class OutputPair:
    """Matrices ``(C, A)`` with ``A`` n-by-n on the state space and ``C``
    p-by-n into the output space; the spectral radius of ``A`` is cached."""

    A: np.ndarray
    C: np.ndarray
    spectral_radius: float = field(init=False)

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=complex))
        self.C = np.atleast_2d(np.asarray(self.C, dtype=complex))
        if self.A.shape[0] != self.A.shape[1]:
            raise InvalidParameterError("A must be square")
        if self.C.shape[1] != self.A.shape[0]:
            raise InvalidParameterError(
                f"C has {self.C.shape[1]} columns, expected {self.A.shape[0]}")
        self.spectral_radius = spectral_radius(self.A)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.C.shape[0]


@dataclass
class GramianTable:
    """Shifted gramians ``G^(k)`` for ``k = 0..k_max`` with certified tails."""

    entries: dict
    tail_bounds: dict
    trunc_order: int

    def __getitem__(self, k: int) -> np.ndarray:
        return self.entries[k]

    @property
    def k_max(self) -> int:
        return max(self.entries)


@dataclass
class ClassificationReport:
    """Tolerance-qualified classification flags with their justifying residuals."""

    output_stable: bool
    contractive_pair: bool
    isometric_pair: bool
    hypercontraction: bool
    strongly_stable_beta: bool
    exactly_observable: bool
    residuals: dict
    k_checked: int
    certified_all_k: bool = False

    @property
    def flags(self) -> dict:
        return {
            "output_stable": self.output_stable,
            "contractive_pair": self.contractive_pair,
            "isometric_pair": self.isometric_pair,
            "hypercontraction": self.hypercontraction,
            "strongly_stable_beta": self.strongly_stable_beta,
            "exactly_observable": self.exactly_observable,
        }


@dataclass
class DeltaReport:
    """Limit data for the decreasing sequence ``A^{*k} Gamma^(k)[H] A^k``."""

    delta: np.ndarray
    converged: bool
    monotone_min_eig: float
    sum_identity_residual: float | None


# ---------------------------------------------------------------------------
# certified adaptive summation
# ---------------------------------------------------------------------------

def _suffix_sums(wq: np.ndarray) -> np.ndarray:
    """``S[J] = sum_{j > J} wq[j]`` for ``J = 0..len(wq)-1``."""
    rev = np.cumsum(wq[::-1])[::-1]
    out = np.empty_like(rev)
    out[:-1] = rev[1:]
    out[-1] = 0.0
    return out


def _beyond_table(row_abs: np.ndarray, powq: np.ndarray, q: float,
                  window: int = 16) -> float:
    """Bound on the sum of the (unstored) continuation of ``row_abs * powq``.

    Decaying tails are extrapolated geometrically from the trailing growth
    ratio of the damped sequence.  Trailing coefficients that sit at the
    recursion noise floor (negligible against the row's scale) are assumed
    to stay at that floor, so only the ``q`` damping continues.  A genuinely
    non-decaying tail yields ``inf`` and the caller reports non-convergence.
    """
    m = min(window + 1, len(row_abs))
    traw = row_abs[-m:]
    if traw.max() == 0.0:
        return 0.0
    if traw.max() <= 1e-9 * row_abs.max() and q < 1.0:
        return 10.0 * float(traw.max()) * float(powq[-1]) * q / (1.0 - q)
    nz = np.nonzero(traw > 0)[0]
    if len(nz) < 2:
        return float("inf")
    steps = np.diff(nz).astype(float)
    ratios = (traw[nz[1:]] / traw[nz[:-1]]) ** (1.0 / steps)
    r = float(ratios.max()) * q  # per-step growth of the damped sequence
    if r >= 1.0:
        return float("inf")
    last = float(traw[nz[-1]]) * float(powq[len(row_abs) - m + nz[-1]])
    gap = m - 1 - nz[-1]
    return last * r ** gap * r / (1.0 - r)


class _TailCertificate:
    """Shared truncation certificate for sums ``sum_j row_i[j] * T_j`` where
    the matrix terms obey ``||T_j|| <= K q^j`` with K estimated on the fly."""

    def __init__(self, rows, q):
        self.q = q
        Jcap = min(len(r) for r in rows) - 1
        self.Jcap = Jcap
        powq = np.power(q, np.arange(Jcap + 1)) if q > 0 else \
            np.concatenate([[1.0], np.zeros(Jcap)])
        self.suffix = []
        self.beyond = []
        for r in rows:
            row_abs = np.abs(np.asarray(r[:Jcap + 1], dtype=float))
            wq = row_abs * powq
            self.suffix.append(_suffix_sums(wq))
            self.beyond.append(_beyond_table(row_abs, powq, q))
        self.K = 0.0

    def update_K(self, term_norm: float, j: int):
        qj = self.q ** j if self.q > 0 else (1.0 if j == 0 else 0.0)
        if qj > _UNDERFLOW:
            self.K = max(self.K, term_norm / qj)

    def bound(self, J: int) -> float:
        """Certified bound on all rows' tails past index J."""
        J = min(J, self.Jcap)
        worst = max(s[J] + b for s, b in zip(self.suffix, self.beyond))
        return self.K * worst


def _conjugation_sums(A, X, rows, q, tol, context):
    """Evaluate ``sum_j rows[i][j] A^{*j} X A^j`` for several coefficient rows
    with one shared certified truncation.

    Returns (list of sums, list of tail bounds, truncation order used).
    """
    A = np.asarray(A, dtype=complex)
    X = np.asarray(X, dtype=complex)
    cert = _TailCertificate(rows, q)
    moments = []
    M = X.copy()
    J = 0
    for j in range(cert.Jcap + 1):
        moments.append(M)
        nrm = float(np.linalg.norm(M))
        cert.update_K(nrm, j)
        J = j
        if nrm == 0.0:
            break
        if j >= 4 and cert.bound(j) <= tol:
            break
        if j < cert.Jcap:
            M = A.conj().T @ M @ A
    else:
        J = cert.Jcap
    if cert.bound(J) > tol and float(np.linalg.norm(moments[-1])) != 0.0:
        raise ConvergenceError(
            f"{context}: tail bound {cert.bound(J):.3e} > tol {tol:.3e} "
            f"after {J + 1} stored terms; increase the weight truncation")
    stack = np.stack(moments)
    sums, tails = [], []
    for i, r in enumerate(rows):
        coeff = np.asarray(r[:J + 1], dtype=float)
        sums.append(hermitize(np.tensordot(coeff, stack, axes=(0, 0))))
        tails.append(cert.K * (cert.suffix[i][min(J, cert.Jcap)] + cert.beyond[i]))
    return sums, tails, J


# ---------------------------------------------------------------------------
# resolvents
# ---------------------------------------------------------------------------

def resolvent_apply(w: WeightSequence, k: int, A, z: complex,
                    tol: float = 1e-12) -> np.ndarray:
    """Evaluate ``R_k(zA) = sum_j (1/beta_{k+j}) z^j A^j`` with tail <= tol.

    Requires ``|z| * rho(A) < 1``.  Raises ConvergenceError when the stored
    coefficient table is exhausted before the certified tail bound drops
    below ``tol``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    n = A.shape[0]
    rho = spectral_radius(A)
    if abs(z) * rho >= 1.0:
        raise DivergenceError(
            f"|z| * rho(A) = {abs(z) * rho:.6f} >= 1: series diverges")
    Jcap = w.trunc_len - k
    if Jcap < 0:
        raise TruncationError(f"shift k={k} exceeds stored length")
    inv_b = w.inv_betas[k:]
    S = inv_b[0] * np.eye(n, dtype=complex)
    if z == 0 or not A.any():
        return S
    q = abs(z) * 0.5 * (1.0 + rho)
    cert = _TailCertificate([inv_b], q)
    cert.update_K(math.sqrt(n), 0)
    zA = z * A
    P = np.eye(n, dtype=complex)
    for j in range(1, Jcap + 1):
        P = P @ zA
        S += inv_b[j] * P
        cert.update_K(float(np.linalg.norm(P)), j)
        if j >= 4 and cert.bound(j) <= tol:
            return S
    if cert.bound(Jcap) > tol:
        raise ConvergenceError(
            f"resolvent tail bound {cert.bound(Jcap):.3e} > tol {tol:.3e}; "
            "increase the weight truncation")
    return S


def resolvent_scalar(w: WeightSequence, k: int, x, tol: float = 1e-12):
    """Scalar series ``sum_j x^j / beta_{k+j}`` vectorized over ``x``.

    Used for the space kernel ``K(z, zeta) = R(z * conj(zeta))``.
    """
    xs = np.asarray(x, dtype=complex)
    scalar_in = xs.ndim == 0
    xs = np.atleast_1d(xs)
    if np.any(np.abs(xs) >= 1.0):
        raise DivergenceError("scalar resolvent needs |x| < 1")
    Jcap = w.trunc_len - k
    if Jcap < 0:
        raise TruncationError(f"shift k={k} exceeds stored length")
    inv_b = w.inv_betas[k:]
    q = float(np.max(np.abs(xs))) if xs.size else 0.0
    if q == 0.0:
        vals = np.full(xs.shape, inv_b[0], dtype=complex)
        return vals[0] if scalar_in else vals
    cert = _TailCertificate([inv_b], q)
    cert.update_K(1.0, 0)
    J = Jcap
    for j in range(4, Jcap + 1):
        if cert.bound(j) <= tol:
            J = j
            break
    else:
        if cert.bound(Jcap) > tol:
            raise ConvergenceError("scalar resolvent table too short for tol")
    # Horner evaluation of the degree-J truncation
    vals = np.full(xs.shape, inv_b[J], dtype=complex)
    for j in range(J - 1, -1, -1):
        vals = vals * xs + inv_b[j]
    return vals[0] if scalar_in else vals


# ---------------------------------------------------------------------------
# gramians and observability
# ---------------------------------------------------------------------------

def _gramian_rows(w, ks, rho, tol, CstarC, A, context):
    q = (0.5 * (1.0 + rho)) ** 2
    kmax = max(ks)
    Jcap = w.trunc_len - kmax
    if Jcap < 4:
        raise TruncationError(
            f"stored weights too short for gramian shift k={kmax}")
    rows = [w.inv_betas[k:k + Jcap + 1] for k in ks]
    sums, tails, J = _conjugation_sums(A, CstarC, rows, q, tol, context)
    return dict(zip(ks, sums)), dict(zip(ks, tails)), J


def gramian(w: WeightSequence, k: int, pair: OutputPair,
            tol: float = 1e-10) -> np.ndarray:
    """Shifted observability gramian ``G^(k)`` with certified tail <= tol."""
    if pair.spectral_radius > RHO_MAX:
        raise SpectralRadiusError(
            f"rho(A) = {pair.spectral_radius:.4f} > {RHO_MAX}: gramian series "
            "not summable at desk scale")
    CstarC = pair.C.conj().T @ pair.C
    entries, _, _ = _gramian_rows(w, [k], pair.spectral_radius, tol,
                                  CstarC, pair.A, "gramian")
    return entries[k]


def gramian_table(w: WeightSequence, pair: OutputPair, k_max: int,
                  tol: float = 1e-10) -> GramianTable:
    """All shifted gramians ``G^(k)``, ``k = 0..k_max``, from shared moments."""
    if pair.spectral_radius > RHO_MAX:
        raise SpectralRadiusError(
            f"rho(A) = {pair.spectral_radius:.4f} > {RHO_MAX}")
    CstarC = pair.C.conj().T @ pair.C
    ks = list(range(k_max + 1))
    entries, tails, J = _gramian_rows(w, ks, pair.spectral_radius, tol,
                                      CstarC, pair.A, "gramian_table")
    return GramianTable(entries=entries, tail_bounds=tails, trunc_order=J)


def observability_coeffs(w: WeightSequence, k: int, pair: OutputPair,
                         J: int) -> list:
    """Taylor coefficients ``(1/beta_{j+k}) C A^j`` of the shifted
    observability map, for ``j = 0..J``."""
    if k + J > w.trunc_len:
        raise TruncationError("stored weights too short")
    out = []
    Q = pair.C.copy()
    for j in range(J + 1):
        out.append(w.inv_betas[k + j] * Q)
        if j < J:
            Q = Q @ pair.A
    return out


# ---------------------------------------------------------------------------
# hereditary maps
# ---------------------------------------------------------------------------

def _check_domain(A, X, tol):
    """Domain condition for the hereditary calculus: X >= A* X A >= 0."""
    X = hermitize(np.asarray(X, dtype=complex))
    A = np.asarray(A, dtype=complex)
    scale = max(opnorm(X), 1.0)
    if min_eig(X) < -tol * scale:
        raise HereditaryDomainError("X must be positive semidefinite")
    if min_eig(X - A.conj().T @ X @ A) < -tol * scale:
        raise HereditaryDomainError("X - A* X A must be positive semidefinite")


def _map_rate(A):
    rho = spectral_radius(A)
    # under the domain condition the moments are norm-bounded even at rho = 1
    return (0.5 * (1.0 + min(rho, 1.0))) ** 2 if rho < 1.0 else 1.0


def gamma_map(w: WeightSequence, A, X, tol: float = 1e-10) -> np.ndarray:
    """Hereditary map ``Gamma[X] = sum_j c_j A^{*j} X A^j``.

    Requires the domain condition ``X >= A* X A >= 0`` and a reciprocal
    coefficient table whose summability check did not come back "diverging".
    """
    _check_domain(A, X, tol)
    if w.wiener is not None and w.wiener.verdict == "diverging":
        raise HereditaryDomainError(
            "reciprocal coefficients diverge: hereditary map undefined")
    sums, _, _ = _conjugation_sums(A, X, [w.c_coeffs], _map_rate(A), tol,
                                   "gamma_map")
    return sums[0]


def gamma_k_map(w: WeightSequence, k: int, A, X,
                tol: float = 1e-10) -> np.ndarray:
    """Shifted hereditary map built from the quotient-series coefficients."""
    _check_domain(A, X, tol)
    if w.wiener is not None and w.wiener.verdict == "diverging":
        raise HereditaryDomainError(
            "reciprocal coefficients diverge: hereditary map undefined")
    if k == 0:
        return hermitize(np.asarray(X, dtype=complex))
    d = gamma_k_coeffs(w, k, w.trunc_len - k)
    sums, _, _ = _conjugation_sums(A, X, [d], _map_rate(A), tol, "gamma_k_map")
    return sums[0]


def gamma_binomial(m: int, A, X) -> np.ndarray:
    """Finite binomial defect map ``sum_j (-1)^j binom(m, j) A^{*j} X A^j``."""
    A = np.asarray(A, dtype=complex)
    M = np.asarray(X, dtype=complex)
    out = np.zeros_like(M)
    for j in range(m + 1):
        out = out + ((-1) ** j * math.comb(m, j)) * M
        if j < m:
            M = A.conj().T @ M @ A
    return hermitize(out)


def stein_residual(w: WeightSequence, k: int, pair: OutputPair,
                   G_k, G_k1) -> float:
    """Operator-norm residual of ``A* G^(k+1) A + (1/beta_k) C* C = G^(k)``."""
    A, C = pair.A, pair.C
    lhs = A.conj().T @ np.asarray(G_k1, dtype=complex) @ A \
        + w.inv_betas[k] * (C.conj().T @ C)
    return opnorm(lhs - np.asarray(G_k, dtype=complex))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _psd_defect(M) -> float:
    """Most negative scaled eigenvalue; >= 0 means PSD to working precision."""
    scale = max(opnorm(M), 1.0)
    return min_eig(M) / scale


def classify(w: WeightSequence, pair: OutputPair, k_max: int = 20,
             tol: float = 1e-8) -> ClassificationReport:
    """Tolerance-qualified classification of an output pair.

    Checks, with every verdict accompanied by its numeric residual: operator
    contractivity, positivity of the hereditary maps of the identity up to
    ``k_max`` (certified for all k at once when the weight is a beta_alpha
    family with integer alpha, via the binomial defect maps), the
    contractive / isometric pair conditions, exact observability of the
    gramian, and strong stability in the weighted sense.

    Series-summed quantities restrict the spectral radius to 0.999.
    """
    A = pair.A
    rho = pair.spectral_radius
    if rho > RHO_MAX:
        raise SpectralRadiusError(
            f"rho(A) = {rho:.4f} > {RHO_MAX}: classification needs a "
            "series-summable gramian")
    n = pair.n
    I = np.eye(n, dtype=complex)
    opA = opnorm(A)
    contraction = opA <= 1.0 + tol

    q = _map_rate(A)
    rows = [w.c_coeffs]
    for k in range(1, k_max + 1):
        rows.append(gamma_k_coeffs(w, k, w.trunc_len - k))
    sums, _, _ = _conjugation_sums(A, I, rows, q, tol * 0.1, "classify")
    gamma_I = sums[0]
    gamma_k_I = sums[1:]

    gamma_min = _psd_defect(gamma_I)
    gamma_k_min = min(_psd_defect(G) for G in gamma_k_I)
    hyper_truncated = contraction and gamma_min >= -tol and gamma_k_min >= -tol

    certified = False
    betan_min = None
    if w.kind == "beta_alpha" and w.alpha is not None \
            and abs(w.alpha - round(w.alpha)) < 1e-12:
        nn = int(round(w.alpha))
        betan_min = min(_psd_defect(gamma_binomial(1, A, I)),
                        _psd_defect(gamma_binomial(nn, A, I)))
        certified = contraction and betan_min >= -tol
    hypercontraction = hyper_truncated or certified

    CstarC = pair.C.conj().T @ pair.C
    pair_defect = gamma_I - CstarC
    contractive_pair = hypercontraction and _psd_defect(pair_defect) >= -tol
    isom_res = opnorm(pair_defect)
    isometric_pair = hypercontraction and isom_res <= tol * max(opnorm(gamma_I), 1.0)

    table = gramian_table(w, pair, 0, tol=tol * 0.1)
    G = table[0]
    gram_eigs = np.linalg.eigvalsh(hermitize(G))
    exactly_observable = bool(gram_eigs[0] > tol * max(gram_eigs[-1], 1.0))

    Ak = np.linalg.matrix_power(A, k_max)
    stab = Ak.conj().T @ gamma_k_I[-1] @ Ak
    stab_res = opnorm(stab)
    strongly_stable_beta = stab_res <= tol

    residuals = {
        "operator_norm_excess": opA - 1.0,
        "gamma_identity_min_eig": gamma_min,
        "gamma_shifted_min_eig": gamma_k_min,
        "pair_defect_min_eig": _psd_defect(pair_defect),
        "isometry_residual": isom_res,
        "gramian_min_eig": float(gram_eigs[0]),
        "gramian_tail_bound": table.tail_bounds[0],
        "beta_strong_stability": stab_res,
    }
    if betan_min is not None:
        residuals["integer_alpha_certificate_min_eig"] = betan_min

    return ClassificationReport(
        output_stable=True,
        contractive_pair=contractive_pair,
        isometric_pair=isometric_pair,
        hypercontraction=hypercontraction,
        strongly_stable_beta=strongly_stable_beta,
        exactly_observable=exactly_observable,
        residuals=residuals,
        k_checked=k_max,
        certified_all_k=certified,
    )


def delta_limit(w: WeightSequence, A, H, k_max: int = 20,
                tol: float = 1e-8) -> DeltaReport:
    """Limit of the decreasing sequence ``D_k = A^{*k} Gamma^(k)[H] A^k``.

    Requires ``H`` to satisfy the domain and shifted-positivity conditions up
    to ``tol``.  Returns ``D_{k_max}`` together with a monotone-decrease
    certificate (worst eigenvalue of the decrements, which must be PSD) and,
    when the sequence has numerically converged, the residual of the
    summation identity ``sum_j (1/beta_j) A^{*j} Gamma[H] A^j = H - Delta``.
    """
    A = np.asarray(A, dtype=complex)
    H = hermitize(np.asarray(H, dtype=complex))
    _check_domain(A, H, tol)
    scale = max(opnorm(H), 1.0)

    q = _map_rate(A)
    rows = [w.c_coeffs]
    for k in range(1, k_max + 2):
        rows.append(gamma_k_coeffs(w, k, w.trunc_len - k))
    sums, _, _ = _conjugation_sums(A, H, rows, q, tol * 0.1, "delta_limit")
    gamma_H = sums[0]
    for k, G in enumerate(sums[1:], start=1):
        if _psd_defect(G) < -tol:
            raise HereditaryDomainError(
                f"shifted hereditary map of H not PSD at k={k}")

    D = [H]  # D_0 = Gamma^(0)[H] = H
    P = np.eye(A.shape[0], dtype=complex)
    for k in range(1, k_max + 2):
        P = P @ A
        D.append(hermitize(P.conj().T @ sums[k] @ P))
    mono = min(min_eig(D[k] - D[k + 1]) for k in range(k_max + 1)) / scale
    if mono < -10 * tol:
        raise HereditaryDomainError(
            f"monotone decrease violated: worst decrement eigenvalue {mono:.3e}")

    delta = D[k_max]
    converged = opnorm(D[k_max] - D[k_max - 1]) <= tol * scale

    residual = None
    if converged and _psd_defect(gamma_H) >= -tol:
        rows2 = [w.inv_betas]
        sums2, _, _ = _conjugation_sums(A, gamma_H, rows2, q, tol * 0.1,
                                        "delta_limit sum identity")
        residual = opnorm(sums2[0] - (H - delta))

    return DeltaReport(delta=delta, converged=converged,
                       monotone_min_eig=mono,
                       sum_identity_residual=residual)
