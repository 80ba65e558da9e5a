"""Operator algebra on truncated two-mode Fock spaces.

Everything is dense complex numpy; joint dimensions stay small enough
(<~1000) that sparsity would be pointless. The joint ordering is
mode-a-major: |j>_a ⊗ |k>_b sits at index j*n_b + k, which is exactly
what ``np.kron(A_a, B_b)`` produces.

Operator identities that hold in the infinite-dimensional algebra fail
at the top of a truncated ladder, so comparisons go through
:func:`max_interior_deviation`, which drops a configurable number of
edge levels per mode (default 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, InitVar

import numpy as np
from scipy.constants import hbar as HBAR_SI, k as KB_SI

__all__ = [
    "ModeSpace",
    "Operator",
    "PureState",
    "DensityMatrix",
    "annihilation",
    "creation",
    "number",
    "identity",
    "position_momentum",
    "tensor",
    "embed_a",
    "embed_b",
    "fock_state",
    "joint_fock_state",
    "coherent_state",
    "product_state",
    "partial_trace",
    "thermal_occupation",
    "expectation",
    "interior_indices",
    "max_interior_deviation",
]

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-9
COHERENT_TAIL_TOL = 1e-8

_TAGS = ("a", "b", "joint")


@dataclass(frozen=True)
class ModeSpace:
    """Truncation dimensions of the photon (a) and phonon (b) modes."""

    n_a: int
    n_b: int

    def __post_init__(self):
        if self.n_a < 2 or self.n_b < 2:
            raise ValueError(f"mode dimensions must be >= 2, got {self.n_a}x{self.n_b}")

    @property
    def dim(self) -> int:
        return self.n_a * self.n_b

    def index(self, j: int, k: int) -> int:
        """Joint index of |j>_a ⊗ |k>_b (mode-a-major)."""
        if not (0 <= j < self.n_a and 0 <= k < self.n_b):
            raise ValueError(f"state ({j},{k}) outside {self.n_a}x{self.n_b} space")
        return j * self.n_b + k


def _as_matrix(entries) -> np.ndarray:
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator entries must be square, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix on a single mode or the joint space.

    ``space_tag`` is one of "a", "b", "joint" and is checked wherever two
    operators must live on the same space.
    """

    mat: np.ndarray
    space_tag: str = "joint"

    def __post_init__(self):
        object.__setattr__(self, "mat", _as_matrix(self.mat))
        if self.space_tag not in _TAGS:
            raise ValueError(f"unknown space_tag {self.space_tag!r}")
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.mat.conj().T, self.space_tag)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return float(np.max(np.abs(self.mat - self.mat.conj().T))) <= tol

    def require_hermitian(self, tol: float = HERMITIAN_TOL) -> "Operator":
        dev = float(np.max(np.abs(self.mat - self.mat.conj().T)))
        if dev > tol:
            raise ValueError(f"operator not Hermitian: max|M - M†| = {dev:.3e} > {tol:.1e}")
        return self

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(self.mat @ self.mat.conj().T - np.eye(self.dim))))

    def __matmul__(self, other):
        if isinstance(other, Operator):
            if other.space_tag != self.space_tag or other.dim != self.dim:
                raise ValueError("operator product across different spaces")
            return Operator(self.mat @ other.mat, self.space_tag)
        if isinstance(other, PureState):
            if other.dim != self.dim:
                raise ValueError("dimension mismatch in operator application")
            return self.mat @ other.vec
        return NotImplemented

    def __add__(self, other: "Operator") -> "Operator":
        if other.space_tag != self.space_tag or other.dim != self.dim:
            raise ValueError("operator sum across different spaces")
        return Operator(self.mat + other.mat, self.space_tag)

    def __sub__(self, other: "Operator") -> "Operator":
        if other.space_tag != self.space_tag or other.dim != self.dim:
            raise ValueError("operator difference across different spaces")
        return Operator(self.mat - other.mat, self.space_tag)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.mat * scalar, self.space_tag)

    __rmul__ = __mul__


@dataclass(frozen=True)
class PureState:
    """Normalized state vector; norm checked to 1e-10 on construction."""

    vec: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        object.__setattr__(self, "vec", np.array(self.vec, dtype=complex).ravel())
        if validate:
            nrm = float(np.linalg.norm(self.vec))
            if abs(nrm - 1.0) > NORM_TOL:
                raise ValueError(f"state norm {nrm} deviates from 1 beyond {NORM_TOL:.0e}")
        self.vec.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.vec.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    def overlap(self, other: "PureState") -> complex:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch in overlap")
        return complex(np.vdot(self.vec, other.vec))

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.vec, self.vec.conj()), validate=False)


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix with Hermiticity/trace/positivity checks on construction."""

    mat: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        object.__setattr__(self, "mat", _as_matrix(self.mat))
        if validate:
            herm = float(np.max(np.abs(self.mat - self.mat.conj().T)))
            if herm > NORM_TOL:
                raise ValueError(f"density matrix not Hermitian: {herm:.3e}")
            tr = complex(np.trace(self.mat))
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"density matrix trace {tr} deviates from 1")
            lo = float(np.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2).min())
            if lo < -POSITIVITY_TOL:
                raise ValueError(f"density matrix has eigenvalue {lo:.3e} < -{POSITIVITY_TOL:.0e}")
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2).min())


def annihilation(space_dim: int, mode: str = "a") -> Operator:
    """Ladder lowering operator: entry (n-1, n) = sqrt(n)."""
    if space_dim < 2:
        raise ValueError(f"annihilation needs space_dim >= 2, got {space_dim}")
    m = np.zeros((space_dim, space_dim), dtype=complex)
    ns = np.arange(1, space_dim)
    m[ns - 1, ns] = np.sqrt(ns)
    return Operator(m, mode)


def creation(space_dim: int, mode: str = "a") -> Operator:
    return annihilation(space_dim, mode).dag()


def number(space_dim: int, mode: str = "a") -> Operator:
    return Operator(np.diag(np.arange(space_dim, dtype=float)).astype(complex), mode)


def identity(space_dim: int, mode: str = "a") -> Operator:
    return Operator(np.eye(space_dim, dtype=complex), mode)


def position_momentum(space_dim: int, m: float, omega: float) -> tuple[Operator, Operator]:
    """Quadratures x = sqrt(1/2mw)(b+b†), p = -i sqrt(mw/2)(b-b†), hbar = 1."""
    if m <= 0 or omega <= 0:
        raise ValueError(f"mass and frequency must be positive, got m={m}, omega={omega}")
    b = annihilation(space_dim, "b").mat
    bd = b.conj().T
    x = math.sqrt(1.0 / (2.0 * m * omega)) * (b + bd)
    p = -1j * math.sqrt(m * omega / 2.0) * (b - bd)
    return Operator(x, "b"), Operator(p, "b")


def tensor(a_op: Operator, b_op: Operator, space: ModeSpace) -> Operator:
    """Kronecker product A ⊗ B in mode-a-major ordering."""
    if a_op.dim != space.n_a:
        raise ValueError(f"mode-a operator has dim {a_op.dim}, space has n_a={space.n_a}")
    if b_op.dim != space.n_b:
        raise ValueError(f"mode-b operator has dim {b_op.dim}, space has n_b={space.n_b}")
    return Operator(np.kron(a_op.mat, b_op.mat), "joint")


def embed_a(a_op: Operator, space: ModeSpace) -> Operator:
    """A ⊗ 1_b on the joint space."""
    return tensor(a_op, identity(space.n_b, "b"), space)


def embed_b(b_op: Operator, space: ModeSpace) -> Operator:
    """1_a ⊗ B on the joint space."""
    return tensor(identity(space.n_a, "a"), b_op, space)


def fock_state(n: int, space_dim: int) -> PureState:
    if not 0 <= n < space_dim:
        raise ValueError(f"Fock level {n} outside dimension {space_dim}")
    v = np.zeros(space_dim, dtype=complex)
    v[n] = 1.0
    return PureState(v)


def joint_fock_state(j: int, k: int, space: ModeSpace) -> PureState:
    v = np.zeros(space.dim, dtype=complex)
    v[space.index(j, k)] = 1.0
    return PureState(v)


def _coherent_amplitudes(amplitude: complex, space_dim: int) -> np.ndarray:
    n = np.arange(space_dim)
    if amplitude == 0:
        c = np.zeros(space_dim, dtype=complex)
        c[0] = 1.0
        return c
    # log-space magnitudes keep large-n factorials finite
    from scipy.special import gammaln

    logmag = -abs(amplitude) ** 2 / 2 + n * math.log(abs(amplitude)) - 0.5 * gammaln(n + 1)
    return np.exp(logmag) * np.exp(1j * n * np.angle(amplitude))


def coherent_tail_weight(amplitude: complex, space_dim: int) -> float:
    """Probability weight of the truncated tail sum_{n>=dim} |c_n|^2."""
    c = _coherent_amplitudes(amplitude, space_dim)
    return max(0.0, 1.0 - float(np.sum(np.abs(c) ** 2)))


def required_coherent_dim(amplitude: complex, tol: float = COHERENT_TAIL_TOL) -> int:
    """Smallest truncation keeping the coherent tail weight below tol."""
    d = max(2, int(abs(amplitude) ** 2) + 2)
    while coherent_tail_weight(amplitude, d) >= tol:
        d += max(2, d // 4)
    while d > 2 and coherent_tail_weight(amplitude, d - 1) < tol:
        d -= 1
    return d


def coherent_state(amplitude: complex, space_dim: int) -> PureState:
    """Truncated coherent state, renormalized; rejects tail weight >= 1e-8."""
    tail = coherent_tail_weight(amplitude, space_dim)
    if tail >= COHERENT_TAIL_TOL:
        need = required_coherent_dim(amplitude)
        raise ValueError(
            f"coherent amplitude {amplitude}: truncated tail weight {tail:.2e} >= "
            f"{COHERENT_TAIL_TOL:.0e} at dim {space_dim}; need dim >= {need}"
        )
    c = _coherent_amplitudes(amplitude, space_dim)
    return PureState(c / np.linalg.norm(c))


def product_state(a_state: PureState, b_state: PureState, space: ModeSpace) -> PureState:
    if a_state.dim != space.n_a or b_state.dim != space.n_b:
        raise ValueError("factor-state dimensions do not match the mode space")
    return PureState(np.kron(a_state.vec, b_state.vec))


def partial_trace(rho: DensityMatrix, keep: str, space: ModeSpace) -> DensityMatrix:
    """Reduced density matrix on the kept mode ("a" or "b")."""
    if rho.dim != space.dim:
        raise ValueError(f"density matrix dim {rho.dim} does not match space dim {space.dim}")
    r4 = rho.mat.reshape(space.n_a, space.n_b, space.n_a, space.n_b)
    if keep == "a":
        red = np.einsum("jkik->ji", r4)
    elif keep == "b":
        red = np.einsum("jkjl->kl", r4)
    else:
        raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")
    red = (red + red.conj().T) / 2
    return DensityMatrix(red, validate=False)


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose occupation 1/(exp(hbar w / kB T) - 1); SI inputs, 0 at T=0."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be nonnegative, got {temperature}")
    if temperature == 0:
        return 0.0
    x = HBAR_SI * omega / (KB_SI * temperature)
    return 1.0 / math.expm1(x)


def expectation(op: Operator, state) -> complex:
    if isinstance(state, PureState):
        return complex(np.vdot(state.vec, op.mat @ state.vec))
    if isinstance(state, DensityMatrix):
        return complex(np.trace(op.mat @ state.mat))
    raise TypeError(f"cannot take expectation in {type(state)}")


def interior_indices(space: ModeSpace | int, exclude: int = 2) -> np.ndarray:
    """Joint (or single-mode) indices with the top ``exclude`` levels dropped."""
    if isinstance(space, ModeSpace):
        ja = np.arange(space.n_a - exclude)
        kb = np.arange(space.n_b - exclude)
        if ja.size == 0 or kb.size == 0:
            raise ValueError("edge exclusion leaves no interior block")
        return (ja[:, None] * space.n_b + kb[None, :]).ravel()
    dim = int(space)
    if dim - exclude <= 0:
        raise ValueError("edge exclusion leaves no interior block")
    return np.arange(dim - exclude)


def max_interior_deviation(a, b, space: ModeSpace | int | None = None, exclude: int = 2) -> float:
    """max |A - B| restricted to the interior block (top levels excluded)."""
    am = a.mat if isinstance(a, Operator) else np.asarray(a)
    bm = b.mat if isinstance(b, Operator) else np.asarray(b)
    if am.shape != bm.shape:
        raise ValueError("shape mismatch in interior comparison")
    if space is None:
        space = am.shape[0]
    idx = interior_indices(space, exclude)
    return float(np.max(np.abs((am - bm)[np.ix_(idx, idx)])))
