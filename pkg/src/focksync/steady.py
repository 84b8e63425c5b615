"""Steady states of the generator and the eigenvalue branch through zero.

The stationary solution is obtained from the trace-constrained sparse LU
system; the eigenvalue adiabatically connected to it is followed in the
counting field with shift-inverted Arnoldi iterations seeded by the
previous eigenpair. Exponentially small eigenvalues hit the same machine
precision wall as any spectral method; results carry an explicit quality
flag below |lambda| ~ 1e3 * eps * ||L|| and a documented trust floor at
1e-12 * ||L||.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .liouville import SuperOperator, trace_functional, unvec, vec

DENSE_EIG_DIM = 400
TRUST_FLOOR = 1e-12          # |lambda| / ||L|| below this is unresolvable
QUALITY_FLOOR_FACTOR = 1e3   # flag below 1e3 * machine eps * ||L||
NEGATIVE_EIG_TOL = 1e-9


class SteadyStateError(RuntimeError):
    """Singular or degenerate stationary system."""


class TruncationError(RuntimeError):
    """Steady state leaks into the highest Fock level."""


def _as_sparse(L):
    if isinstance(L, SuperOperator):
        return L.matrix.tocsr(), L.norm
    mat = sp.csr_matrix(L)
    return mat, float(abs(mat).sum(axis=1).max())


def steady_state(L, check_truncation=True):
    """Stationary density matrix of a trace-preserving generator.

    Solves L vec(rho) = 0 with one row replaced by the trace constraint,
    applies one step of iterative refinement, then hermitizes and clips
    roundoff-negative eigenvalues.

    Parameters
    ----------
    L : SuperOperator or sparse matrix
        Generator built at q = 0.
    check_truncation : bool
        Raise TruncationError when the top Fock level holds more than 1e-8
        population (single-mode generators only).

    Returns
    -------
    ndarray
        M x M density matrix.
    """
    if isinstance(L, SuperOperator) and L.q != 0.0:
        raise ValueError("steady_state needs a generator built at q = 0")
    mat, norm = _as_sparse(L)
    d = mat.shape[0]
    m = int(round(math.sqrt(d)))

    weight = max(1.0, norm / d)
    trace_row = trace_functional(m) * weight

    a = mat.tolil(copy=True)
    a[0, :] = trace_row
    a = a.tocsc()
    b = np.zeros(d, dtype=complex)
    b[0] = weight

    try:
        lu = spla.splu(a)
    except RuntimeError as err:
        raise SteadyStateError(
            "stationary system is singular; the steady-state manifold may be "
            "degenerate (try breaking a symmetry or a different solver)"
        ) from err
    x = lu.solve(b)
    # one round of iterative refinement on the constrained system
    x = x + lu.solve(b - a @ x)

    resid = np.linalg.norm(mat @ x)
    if not np.isfinite(resid) or resid > 1e-10 * max(norm, 1.0):
        raise SteadyStateError(
            f"steady-state residual {resid:.3e} exceeds 1e-10 * ||L|| = "
            f"{1e-10 * norm:.3e}"
        )

    rho = unvec(x, m)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    rho = _repair_positivity(rho)

    if check_truncation and isinstance(L, SuperOperator) and len(L.hilbert_dims) == 1:
        top = rho[m - 1, m - 1].real
        if top > 1e-8:
            raise TruncationError(
                f"steady state holds {top:.2e} population in the top Fock "
                f"level; increase the truncation"
            )
    return rho


def _repair_positivity(rho):
    evals, evecs = np.linalg.eigh(rho)
    if evals.min() < -NEGATIVE_EIG_TOL:
        raise SteadyStateError(
            f"steady state has eigenvalue {evals.min():.3e} below the "
            f"-{NEGATIVE_EIG_TOL} roundoff budget"
        )
    if evals.min() < 0.0:
        evals = np.clip(evals, 0.0, None)
        rho = (evecs * evals) @ evecs.conj().T
        rho = rho / np.trace(rho).real
    return rho


@dataclass(frozen=True)
class EigenResult:
    value: complex
    vector: np.ndarray
    residual: float
    gap: float
    overlap: float


def _select_pair(lams, vecs, guess, v0):
    """Pick the Ritz pair continuing the branch.

    With a reference vector the selection is by eigenvector overlap, which
    is what distinguishes the stationary branch from spurious modes (for
    instance metastable population trapped above the gain blockade when a
    second basin fits inside the truncation); otherwise by eigenvalue
    proximity to the guess.
    """
    if v0 is not None:
        ref = v0 / np.linalg.norm(v0)
        overlaps = np.abs(ref.conj() @ vecs) / np.linalg.norm(vecs, axis=0)
        best = int(np.argmax(overlaps))
        return best, float(overlaps[best])
    return int(np.argmin(np.abs(lams - guess))), 1.0


def leading_eigenvalue(L, guess=0.0, v0=None, k=3, refine=2, maxiter=2000):
    """Eigenvalue of L continuing a branch near guess.

    Sparse path: shift-inverted Arnoldi around the guess (several Ritz
    pairs, so the distance to the next eigenvalue is reported), then
    inverse-iteration polishing of the right residual. Dense path below
    DENSE_EIG_DIM. When a reference vector v0 is supplied the returned
    pair is the one with the largest overlap against it.
    """
    mat, norm = _as_sparse(L)
    d = mat.shape[0]

    if d <= DENSE_EIG_DIM:
        evals, evecs = np.linalg.eig(mat.toarray())
        if v0 is not None:
            i0, overlap = _select_pair(evals, evecs, guess, v0)
        else:
            i0, overlap = int(np.argmin(np.abs(evals - guess))), 1.0
        v = evecs[:, i0]
        lam = evals[i0]
        resid = np.linalg.norm(mat @ v - lam * v) / np.linalg.norm(v)
        others = np.delete(evals, i0)
        return EigenResult(lam, v, resid, np.abs(others - lam).min(), overlap)

    sigma = complex(guess)
    eye = sp.identity(d, format="csc", dtype=complex)
    lu = None
    for _ in range(3):
        try:
            lu = spla.splu((mat - sigma * eye).tocsc())
            break
        except RuntimeError:
            sigma = sigma + (1e-10 * max(norm, 1.0)) * (1.0 + 1.0j)
    if lu is None:
        raise SteadyStateError(f"shift-invert factorization failed at {guess}")

    op = spla.LinearOperator((d, d), matvec=lu.solve, dtype=complex)
    if v0 is not None:
        v0 = np.asarray(v0, dtype=complex)
    try:
        mu, vecs = spla.eigs(
            op, k=k, which="LM", v0=v0, ncv=min(d - 1, 36), maxiter=maxiter
        )
    except spla.ArpackNoConvergence as err:
        if err.eigenvalues is not None and len(err.eigenvalues) >= 1:
            mu, vecs = err.eigenvalues, err.eigenvectors
        else:
            raise SteadyStateError(
                f"Arnoldi did not converge near {guess}"
            ) from err
    lams = sigma + 1.0 / mu
    idx, overlap = _select_pair(lams, vecs, guess, v0)
    lam = lams[idx]
    v = vecs[:, idx]
    gap = np.abs(np.delete(lams, idx) - lam).min() if len(lams) > 1 else np.inf

    # polish the right residual with inverse iteration and a Rayleigh update
    v = v / np.linalg.norm(v)
    for _ in range(refine):
        w = lu.solve(v)
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0.0:
            break
        v = w / nw
        lam = np.vdot(v, mat @ v)
    resid = np.linalg.norm(mat @ v - lam * v)
    return EigenResult(lam, v, resid, gap, overlap)


@dataclass(frozen=True)
class EigenTrack:
    """Continuation of the stationary eigenvalue along the counting field."""

    q_values: np.ndarray
    lambda0: np.ndarray
    residuals: np.ndarray
    gaps: np.ndarray
    flags: tuple
    norm: float
    steady: np.ndarray

    def value(self, q):
        idx = np.nonzero(np.isclose(self.q_values, q))[0]
        if idx.size == 0:
            raise KeyError(f"q = {q} not in track")
        return self.lambda0[idx[0]]

    @property
    def quality_floor(self):
        return QUALITY_FLOOR_FACTOR * np.finfo(float).eps * self.norm


def lambda0_curve(params_or_builder, q_list, space=None):
    """Track the eigenvalue branch through lambda(0) = 0.

    Parameters
    ----------
    params_or_builder : ModelParams or callable
        Either model parameters (the single-mode generator is built per q)
        or a callable q -> SuperOperator.
    q_list : sequence of float
        Counting-field values; must contain 0 and stay within |q| <= 0.5.
    space : FockSpace or int, optional
        Truncation override when model parameters are given.

    Returns
    -------
    EigenTrack
        Eigenvalues, residuals, gaps and per-point flags ('floor' when the
        value is below the resolvable scale, 'crossing' when another
        eigenvalue approaches the branch, 'aborted' past a continuity
        failure).
    """
    if callable(params_or_builder):
        build = params_or_builder
    else:
        from .liouville import liouvillian_single

        params = params_or_builder
        build = lambda q: liouvillian_single(params, q, space)

    q_arr = np.asarray(sorted(q_list), dtype=float)
    if not np.any(q_arr == 0.0):
        raise ValueError("q_list must contain 0")
    if np.abs(q_arr).max() > 0.5:
        raise ValueError("|q| <= 0.5 required")

    L0 = build(0.0)
    norm = L0.norm
    rho = steady_state(L0)
    v_ss = vec(rho)
    resid0 = float(np.linalg.norm(L0.matrix @ v_ss) / np.linalg.norm(v_ss))

    n = len(q_arr)
    lam = np.zeros(n, dtype=complex)
    res = np.zeros(n)
    gaps = np.full(n, np.inf)
    flags = [[] for _ in range(n)]

    i0 = int(np.nonzero(q_arr == 0.0)[0][0])
    lam[i0] = 0.0
    res[i0] = resid0

    floor = QUALITY_FLOOR_FACTOR * np.finfo(float).eps * norm

    for direction in (+1, -1):
        order = range(i0 + 1, n) if direction > 0 else range(i0 - 1, -1, -1)
        prev_lam = 0.0 + 0.0j
        prev_prev = None
        prev_q = 0.0
        prev_prev_q = None
        v_prev = v_ss
        aborted = False
        for i in order:
            qi = q_arr[i]
            if aborted:
                lam[i] = np.nan
                flags[i].append("aborted")
                continue
            guess = prev_lam
            if prev_prev is not None and prev_q != prev_prev_q:
                slope = (prev_lam - prev_prev) / (prev_q - prev_prev_q)
                guess = prev_lam + slope * (qi - prev_q)
            Lq = build(qi)
            result = leading_eigenvalue(Lq, guess=guess, v0=v_prev)
            step = abs(result.value - prev_lam)
            if step > 0.05 * norm:
                lam[i] = np.nan
                flags[i].append("aborted")
                aborted = True
                continue
            if result.overlap < 0.8 or result.gap < TRUST_FLOOR * norm:
                flags[i].append("crossing")
            if abs(result.value) < floor:
                flags[i].append("floor")
            lam[i] = result.value
            res[i] = result.residual
            gaps[i] = result.gap
            prev_prev, prev_lam = prev_lam, result.value
            prev_prev_q, prev_q = prev_q, qi
            v_prev = result.vector

    return EigenTrack(
        q_values=q_arr,
        lambda0=lam,
        residuals=res,
        gaps=gaps,
        flags=tuple(tuple(f) for f in flags),
        norm=norm,
        steady=rho,
    )
