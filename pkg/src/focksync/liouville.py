"""Superoperator construction for the gain-blockade model.

Vectorization is column-stacking: vec(A rho B) = kron(B.T, A) vec(rho).
The counting field q enters by conjugating only the factors that act from
the left of the density matrix: ladder operators pick up sqrt(n - q)
elements and diagonal functions are shifted, f(n) -> f(n - q). That
includes the L^dag L inside the anticommutator when it multiplies from the
left; right-acting factors are untouched.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from . import fockspace as fs
from .specfun import kummer_1f1_neg, laguerre_first_zero

TWO_MODE_DIM_CAP = 4096


class DeformationError(ValueError):
    """The requested jump operator has no defined q-deformation."""


class TruncationWarning(UserWarning):
    """Provided Fock space is smaller than the recommended truncation."""


@dataclass(frozen=True)
class ModelParams:
    """Physical rates of the single-mode model plus two-mode extras.

    Rates are angular frequencies with hbar = 1; gamma_a sets the unit.
    Either n0 (Fock target, from which alpha_a is the first Laguerre zero)
    or alpha_a directly must be given whenever epsilon > 0.
    """

    gamma_a: float = 1.0
    epsilon: float = 0.0
    n0: int | None = None
    alpha_a: float | None = None
    delta: float = 0.0
    f: float = 0.0
    theta: float = 0.0
    e_tilde: float = 0.0
    gamma_b: float = 0.0
    alpha_b: float | None = None

    def __post_init__(self):
        if self.gamma_a <= 0.0:
            raise ValueError("gamma_a must be positive")
        if self.epsilon < 0.0 or self.f < 0.0:
            raise ValueError("epsilon and f must be nonnegative")
        if self.alpha_a is None and self.n0 is not None:
            object.__setattr__(self, "alpha_a", laguerre_first_zero(self.n0))
        if self.epsilon > 0.0:
            if self.alpha_a is None:
                raise ValueError("epsilon > 0 needs n0 or alpha_a")
            if self.alpha_a <= 0.0:
                raise ValueError("alpha_a must be positive")

    def with_drive(self, delta=None, f=None, theta=None):
        """Copy with replaced drive parameters (used by sweeps)."""
        kw = {}
        if delta is not None:
            kw["delta"] = delta
        if f is not None:
            kw["f"] = f
        if theta is not None:
            kw["theta"] = theta
        return replace(self, **kw)


@dataclass(frozen=True)
class SuperOperator:
    """Sparse matrix acting on column-stacked density matrices."""

    matrix: sp.spmatrix
    q: float
    hilbert_dims: tuple
    norm: float = field(default=0.0)

    def __post_init__(self):
        if self.norm == 0.0:
            object.__setattr__(
                self, "norm", float(abs(self.matrix).sum(axis=1).max())
            )

    @property
    def dim(self):
        return self.matrix.shape[0]


def vec(rho):
    """Column-stack a matrix."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, m=None):
    """Inverse of vec; m defaults to sqrt(len(v))."""
    v = np.asarray(v)
    if m is None:
        m = int(round(math.sqrt(v.size)))
    return v.reshape((m, -1), order="F")


def left_mul(op):
    """Superoperator for rho -> op rho."""
    op = sp.csr_matrix(op)
    return sp.kron(sp.identity(op.shape[0], format="csr"), op, format="csr")


def right_mul(op):
    """Superoperator for rho -> rho op."""
    op = sp.csr_matrix(op)
    return sp.kron(op.T, sp.identity(op.shape[0], format="csr"), format="csr")


def trace_functional(m):
    """Row vector representing rho -> Tr(rho) on vec(rho)."""
    row = np.zeros(m * m)
    row[np.arange(m) * (m + 1)] = 1.0
    return row


@dataclass(frozen=True)
class JumpOp:
    """Jump operator in the ladder/diagonal algebra, L = ladder * g(n).

    kind is 'lower' (L = a g(n)) or 'raise' (L = a^dag g(n)); g = None
    means the constant 1. This restricted form is what makes the
    q-deformation well defined.
    """

    kind: str
    g: object = None

    def __post_init__(self):
        if self.kind not in ("lower", "raise"):
            raise DeformationError(f"unsupported jump kind {self.kind!r}")

    def _gvals(self, x):
        if self.g is None:
            return np.ones_like(x)
        return np.asarray([self.g(v) for v in x], dtype=float)

    def matrix(self, space, q=0.0):
        m = fs._dim(space)
        n = np.arange(m)
        g = self._gvals(n - q)
        if self.kind == "lower":
            return fs.destroy(space, q) @ np.diag(g).astype(complex)
        return fs.create(space, q) @ np.diag(g).astype(complex)

    def ldagl_deformed(self, space, q=0.0):
        """Deformed L^dag L as the product L(q)^dag L(q).

        For real q the adjoint of the deformed operator equals the deformed
        adjoint, so this is the conjugated L^dag L; taking the truncated
        product keeps the top Fock level consistent with the truncated jump
        (and puts 0 rather than -q at the vacuum entry of the decay
        channel, the recorded truncation artifact).
        """
        lq = self.matrix(space, q)
        return lq.conj().T @ lq


def decay_op():
    """Single-photon loss jump operator a."""
    return JumpOp("lower")


def gain_op(alpha):
    """Blockaded gain jump operator a^dag 1F1(-n, 2, alpha)."""
    return JumpOp("raise", lambda x: kummer_1f1_neg(x, alpha))


def _dissipator_from_matrix(L0):
    """Standard GKSL dissipator of a plain matrix (q = 0 only)."""
    L0 = np.asarray(L0, dtype=complex)
    ldagl = L0.conj().T @ L0
    m = L0.shape[0]
    eye = sp.identity(m, format="csr")
    return (
        sp.kron(sp.csr_matrix(L0.conj()), sp.csr_matrix(L0), format="csr")
        - 0.5 * sp.kron(eye, sp.csr_matrix(ldagl), format="csr")
        - 0.5 * sp.kron(sp.csr_matrix(ldagl.T), eye, format="csr")
    )


def _dissipator_matrix(jump, q, space):
    if isinstance(jump, JumpOp):
        lq = jump.matrix(space, q)
        l0 = jump.matrix(space, 0.0)
        ldagl_q = jump.ldagl_deformed(space, q)
        ldagl_0 = jump.ldagl_deformed(space, 0.0)
        m = lq.shape[0]
        eye = sp.identity(m, format="csr")
        return (
            sp.kron(sp.csr_matrix(l0.conj()), sp.csr_matrix(lq), format="csr")
            - 0.5 * sp.kron(eye, sp.csr_matrix(ldagl_q), format="csr")
            - 0.5 * sp.kron(sp.csr_matrix(ldagl_0.T), eye, format="csr")
        )
    if q != 0.0:
        raise DeformationError(
            "deformation undefined for a plain matrix jump operator; "
            "pass a JumpOp to deform"
        )
    return _dissipator_from_matrix(jump)


def dissipator(jump, q=0.0, space=None):
    """Deformed dissipator D_q[L] as a SuperOperator.

    D_q[L] rho = L(q) rho L^dag - ((L^dag L)(q) rho + rho L^dag L) / 2 with
    the deformation applied to left-acting factors only. jump is a JumpOp
    (the deformable algebra) or a plain matrix (then q must be 0).
    """
    if isinstance(jump, JumpOp):
        if space is None:
            raise ValueError("dissipator of a JumpOp needs a space")
        m = fs._dim(space)
    else:
        m = np.asarray(jump).shape[0]
    mat = _dissipator_matrix(jump, q, space)
    return SuperOperator(matrix=sp.csr_matrix(mat), q=q, hilbert_dims=(m,))


def hamiltonian_term(h_q, h_0):
    """Superoperator -i (H(q) rho - rho H(0)) from the two Hamiltonians."""
    return -1j * (left_mul(h_q) - right_mul(h_0)).tocsr()


def drive_hamiltonian(params, space, q=0.0):
    """Rotating-frame drive Delta n + i f (a^dag e^{-i theta} - a e^{i theta}).

    With q != 0 the left-deformed version: n -> n - q and deformed ladders.
    """
    m = fs._dim(space)
    h = params.delta * fs.number(space, q)
    if params.f != 0.0:
        h = h + 1j * params.f * (
            fs.create(space, q) * np.exp(-1j * params.theta)
            - fs.destroy(space, q) * np.exp(1j * params.theta)
        )
    return h


def recommended_dim(params):
    """Truncation heuristic for the single-mode model.

    n0 + max(12, ceil(6 sqrt(n0))) for the undriven blockade model, plus
    an allowance for the photon number n_f injected by the drive; for the
    pure drive model (epsilon = 0) the displaced scale with a Gaussian
    margin.
    """
    nf = params.f**2 / (params.delta**2 + params.gamma_a**2 / 4.0)
    if params.epsilon > 0.0 and params.n0 is not None:
        n0 = params.n0
        base = n0 + max(12, math.ceil(6.0 * math.sqrt(n0)))
        if nf > 0.0:
            base += math.ceil(nf + 6.0 * math.sqrt(nf) + 6.0)
        return base
    return max(8, math.ceil(nf + 8.0 * math.sqrt(nf) + 10.0))


def liouvillian_single(params, q=0.0, space=None):
    """Generator of the driven single-mode model at counting field q.

    gamma_a D_q[a] + epsilon D_q[a^dag 1F1(-n, 2, alpha_a)] plus the drive
    commutator with the left factor deformed.
    """
    if abs(q) > 0.5:
        raise ValueError("liouvillian_single requires |q| <= 0.5")
    rec = recommended_dim(params)
    if space is None:
        space = fs.FockSpace(rec)
    m = fs._dim(space)
    if m < rec:
        warnings.warn(
            f"space dim {m} below recommended truncation {rec}",
            TruncationWarning,
            stacklevel=2,
        )

    mat = params.gamma_a * _dissipator_matrix(decay_op(), q, space)
    if params.epsilon > 0.0:
        mat = mat + params.epsilon * _dissipator_matrix(
            gain_op(params.alpha_a), q, space
        )
    if params.delta != 0.0 or params.f != 0.0:
        h_q = drive_hamiltonian(params, space, q)
        h_0 = h_q if q == 0.0 else drive_hamiltonian(params, space, 0.0)
        mat = mat + hamiltonian_term(h_q, h_0)
    return SuperOperator(matrix=sp.csr_matrix(mat), q=q, hilbert_dims=(m,))


def effective_gain_rate(e_tilde, gamma_b):
    """Gain rate of the single-mode model obtained by eliminating mode b.

    Weak-coupling elimination of a fast mode driven through
    e_tilde (C b^dag + C^dag b) with population decay gamma_b yields the
    jump C at rate 4 e_tilde^2 / gamma_b; verified against the two-mode
    solver in the gamma_b -> infinity limit.
    """
    return 4.0 * e_tilde**2 / gamma_b


def liouvillian_two_mode(params, spaces):
    """Two-mode generator with the pair-creation gain Hamiltonian.

    -i [H, .] + gamma_a D[a x I] + gamma_b D[I x b], with
    H = e_tilde (a^dag F_a(n_a)) x (b^dag F_b(n_b)) + h.c.
    No counting field here; counting runs on the effective model.
    """
    space_a, space_b = spaces
    ma, mb = fs._dim(space_a), fs._dim(space_b)
    if ma * mb > TWO_MODE_DIM_CAP:
        raise ValueError(
            f"two-mode dimension {ma * mb} exceeds cap {TWO_MODE_DIM_CAP}"
        )
    if params.gamma_b <= 0.0:
        raise ValueError("two-mode model needs gamma_b > 0")
    alpha_a = params.alpha_a
    alpha_b = params.alpha_b if params.alpha_b is not None else alpha_a
    if alpha_a is None or alpha_b is None:
        raise ValueError("two-mode model needs alpha_a (or n0) and alpha_b")

    eye_a = np.eye(ma, dtype=complex)
    eye_b = np.eye(mb, dtype=complex)
    a_full = np.kron(fs.destroy(space_a), eye_b)
    b_full = np.kron(eye_a, fs.destroy(space_b))

    raise_a = fs.create(space_a) @ fs.gain_profile(space_a, alpha_a)
    raise_b = fs.create(space_b) @ fs.gain_profile(space_b, alpha_b)
    h = params.e_tilde * np.kron(raise_a, raise_b)
    h = h + h.conj().T

    mat = (
        hamiltonian_term(h, h)
        + params.gamma_a * _dissipator_from_matrix(a_full)
        + params.gamma_b * _dissipator_from_matrix(b_full)
    )
    return SuperOperator(matrix=sp.csr_matrix(mat), q=0.0, hilbert_dims=(ma, mb))
