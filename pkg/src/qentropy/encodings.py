"""Purified-query oracles and projected unitary encodings.

Oracles are dense unitaries preparing a purification from the all-zeros
state.  Encodings expose the projected block Pi W Pi~ in a compressed form
whose singular values carry sqrt(p_i) (classical, scale 1), sqrt(p_i / n)
(quantum purified access, scale sqrt(n)), or the density matrix itself
(SWAP trick, scale 1).  For sizes where dense matrices are impractical a
spectral representation (singular value list only) is provided and is
bit-compatible with the dense path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dists import DensityMatrix, Distribution, ValidationError

DENSE_ORACLE_CAP = 4096      # max total dimension for a dense oracle unitary
DENSE_UNITARY_CAP = 1024     # max total dimension for fully dense 3-register checks


def _householder_completion(v: np.ndarray) -> np.ndarray:
    """Unitary whose first column is v (unit vector), via a Householder reflector."""
    d = v.size
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValidationError("column to complete must be a unit vector")
    e0 = np.zeros(d, dtype=complex)
    e0[0] = 1.0
    w = e0 - v
    nw = np.linalg.norm(w)
    if nw < 1e-14:
        return np.eye(d, dtype=complex)
    w = w / nw
    return np.eye(d, dtype=complex) - 2.0 * np.outer(w, w.conj())


@dataclass
class PurifiedOracle:
    """A unitary preparing a purification of a distribution or density matrix.

    `register_dims` is (d0, d1); the prepared state `unitary[:, 0]` reshaped
    to (d0, d1) purifies the target after tracing out `ancilla_axis`.
    """

    unitary: np.ndarray
    register_dims: tuple
    ancilla_axis: int
    kind: str  # "classical" | "quantum" | "frequency"
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return int(self.unitary.shape[0])

    def prepared_state(self) -> np.ndarray:
        return self.unitary[:, 0]

    def reduced_state(self) -> np.ndarray:
        """Partial trace of the prepared pure state over the ancilla register."""
        psi = self.prepared_state().reshape(self.register_dims)
        if self.ancilla_axis == 0:
            return np.einsum("ai,aj->ij", psi, psi.conj())
        return np.einsum("ia,ja->ij", psi, psi.conj())

    def unitarity_residual(self) -> float:
        u = self.unitary
        return float(np.abs(u.conj().T @ u - np.eye(self.dim)).max())


def build_purified_oracle_classical(p: Distribution) -> PurifiedOracle:
    """Two-register oracle with U|00> = sum_i sqrt(p_i) |i>|i>."""
    n = p.n
    if n * n > DENSE_ORACLE_CAP:
        raise ValidationError(f"dense classical oracle needs n^2 <= {DENSE_ORACLE_CAP}")
    v = np.zeros(n * n, dtype=complex)
    v[np.arange(n) * n + np.arange(n)] = np.sqrt(p.probs)
    return PurifiedOracle(
        unitary=_householder_completion(v),
        register_dims=(n, n),
        ancilla_axis=0,
        kind="classical",
        meta={"probs": np.array(p.probs)},
    )


def build_purified_oracle_quantum(rho: DensityMatrix) -> PurifiedOracle:
    """Oracle with U|00> = sum_i sqrt(p_i) |psi_i>|i> for rho = sum p_i |psi_i><psi_i|."""
    n = rho.n
    if n * n > DENSE_ORACLE_CAP:
        raise ValidationError(f"dense quantum oracle needs n^2 <= {DENSE_ORACLE_CAP}")
    ev, vec = np.linalg.eigh(rho.mat)
    ev = np.where(ev < 1e-12, 0.0, ev)
    ev = ev / ev.sum()
    psi = (vec * np.sqrt(ev)).astype(complex)  # psi[s, i] = sqrt(p_i) <s|psi_i>
    return PurifiedOracle(
        unitary=_householder_completion(psi.reshape(-1)),
        register_dims=(n, n),
        ancilla_axis=1,
        kind="quantum",
        meta={"eigenvalues": ev},
    )


@dataclass(frozen=True)
class FrequencyVector:
    """A vector of m labels from {0..n-1}, emulated as an empirical distribution."""

    values: tuple
    n: int

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValidationError("frequency vector must be non-empty")
        if any(not (0 <= v < self.n) for v in self.values):
            raise ValidationError("labels out of range")

    @property
    def m(self) -> int:
        return len(self.values)

    def counts(self) -> np.ndarray:
        c = np.zeros(self.n, dtype=np.int64)
        for v in self.values:
            c[v] += 1
        return c

    def induced_distribution(self) -> Distribution:
        """Empirical distribution counts/m (normalized by the vector length)."""
        return Distribution(self.counts() / self.m)


def build_frequency_oracle(vec: FrequencyVector) -> PurifiedOracle:
    """Oracle preparing sum_i sqrt(c_i/m) |pos_i>|i> from a frequency vector.

    |pos_i> is uniform over the positions j with vec[j] = i; the reduced
    state on the label register is diag(counts/m) exactly.
    """
    m, n = vec.m, vec.n
    if m * n > DENSE_ORACLE_CAP:
        raise ValidationError(f"dense frequency oracle needs m*n <= {DENSE_ORACLE_CAP}")
    counts = vec.counts()
    v = np.zeros(m * n, dtype=complex)
    for j, lab in enumerate(vec.values):
        # amplitude sqrt(c/m) * 1/sqrt(c) = 1/sqrt(m) at (position j, label lab)
        v[j * n + lab] = 1.0 / math.sqrt(m)
    return PurifiedOracle(
        unitary=_householder_completion(v),
        register_dims=(m, n),
        ancilla_axis=0,
        kind="frequency",
        meta={"counts": counts, "m": m},
    )


# ---------------------------------------------------------------------------
# Projected unitary encodings
# ---------------------------------------------------------------------------

@dataclass
class ProjectedUnitaryEncoding:
    """A projected block of a unitary, alpha-scaled: block has SVD sigma/alpha.

    `block` is a compressed dense form (may be None for spectral
    representations); `sigma` lists the encoded singular values (already the
    block's, i.e. true value / alpha).  `delta_enc` is the encoding error (0
    for all constructions here).
    """

    sigma: np.ndarray
    alpha: float
    ancilla_count: int
    kind: str
    block: np.ndarray | None = None
    oracle: PurifiedOracle | None = None
    delta_enc: float = 0.0

    def singular_values(self) -> np.ndarray:
        return self.sigma

    def true_values(self) -> np.ndarray:
        """Unnormalized singular values alpha * sigma."""
        return self.alpha * self.sigma


def projected_encoding_classical(oracle: PurifiedOracle) -> ProjectedUnitaryEncoding:
    """Three-register projected encoding of a classical oracle; sigma_i = sqrt(p_i).

    W = U (x) I on registers (ancilla, label, copy); the right projector fixes
    the first two registers to |00> and the left projector enforces label =
    copy.  The block's columns are orthogonal, supported on distinct copy
    indices, so an (d_a * n) x n compression is exact.
    """
    if oracle.ancilla_axis != 0:
        raise ValidationError("expected a classical-layout oracle (ancilla first)")
    d_a, n = oracle.register_dims
    u = oracle.prepared_state().reshape(d_a, n)
    block = np.zeros((d_a, n, n), dtype=complex)
    for i in range(n):
        block[:, i, i] = u[:, i]
    block = block.reshape(d_a * n, n)
    sigma = np.linalg.svd(block, compute_uv=False)
    return ProjectedUnitaryEncoding(
        sigma=np.sort(sigma)[::-1], alpha=1.0, ancilla_count=2,
        kind="classical", block=block, oracle=oracle,
    )


def projected_encoding_quantum(oracle: PurifiedOracle) -> ProjectedUnitaryEncoding:
    """Projected encoding from purified quantum access; sigma_i = sqrt(p_i / n).

    U' = (I (x) U_rho^dag)(W (x) I) with W preparing the maximally entangled
    state; projecting the middle registers to |00> leaves the n x n block
    conj(psi)/sqrt(n) where psi is the prepared purification.
    """
    if oracle.ancilla_axis != 1:
        raise ValidationError("expected a quantum-layout oracle (ancilla second)")
    n, _ = oracle.register_dims
    psi = oracle.prepared_state().reshape(oracle.register_dims)
    block = psi.conj() / math.sqrt(n)
    sigma = np.linalg.svd(block, compute_uv=False)
    return ProjectedUnitaryEncoding(
        sigma=np.sort(sigma)[::-1], alpha=math.sqrt(n), ancilla_count=2,
        kind="quantum", block=block, oracle=oracle,
    )


def block_encoding_density_swap(oracle: PurifiedOracle) -> ProjectedUnitaryEncoding:
    """SWAP-trick block encoding whose top-left block is rho itself (alpha = 1)."""
    if oracle.ancilla_axis != 1:
        raise ValidationError("expected a quantum-layout oracle (ancilla second)")
    psi = oracle.prepared_state().reshape(oracle.register_dims)
    block = psi @ psi.conj().T
    sigma = np.linalg.svd(block, compute_uv=False)
    return ProjectedUnitaryEncoding(
        sigma=np.sort(sigma)[::-1], alpha=1.0, ancilla_count=2,
        kind="swap", block=block, oracle=oracle,
    )


def swap_encoding_dense_unitary(oracle: PurifiedOracle) -> np.ndarray:
    """Explicit (U^dag (x) I) SWAP_{s,s'} (U (x) I) on registers (s, a, s').

    Small-dimension cross-check for the SWAP block encoding.
    """
    n, d_a = oracle.register_dims
    dim = n * d_a * n
    if dim > DENSE_UNITARY_CAP:
        raise ValidationError(f"dense SWAP unitary needs n^2*d_a <= {DENSE_UNITARY_CAP}")
    u = np.kron(oracle.unitary, np.eye(n, dtype=complex))
    swap = np.zeros((dim, dim))
    for s in range(n):
        for a in range(d_a):
            for sp in range(n):
                swap[(sp * d_a + a) * n + s, (s * d_a + a) * n + sp] = 1.0
    return u.conj().T @ swap @ u


# ---------------------------------------------------------------------------
# Spectral (large-n) representations
# ---------------------------------------------------------------------------

def spectral_encoding_classical(p: Distribution) -> ProjectedUnitaryEncoding:
    """Spectral shortcut: classical encoding without dense matrices."""
    return ProjectedUnitaryEncoding(
        sigma=np.sort(np.sqrt(p.probs))[::-1], alpha=1.0, ancilla_count=2,
        kind="classical",
    )


def spectral_encoding_quantum(spectrum: Distribution) -> ProjectedUnitaryEncoding:
    """Spectral shortcut for purified quantum access: sigma = sqrt(p_i / n)."""
    n = spectrum.n
    return ProjectedUnitaryEncoding(
        sigma=np.sort(np.sqrt(spectrum.probs / n))[::-1], alpha=math.sqrt(n),
        ancilla_count=2, kind="quantum",
    )


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    max_sv_deviation: float
    unitarity_residual: float
    tol: float


def verify_encoding(enc: ProjectedUnitaryEncoding, expected: np.ndarray,
                    tol: float = 1e-10) -> VerificationReport:
    """Check the encoded singular multiset against expectation.

    Recomputes singular values from the stored block when available and
    checks the underlying oracle's unitarity residual.
    """
    if enc.block is not None:
        got = np.sort(np.linalg.svd(enc.block, compute_uv=False))[::-1]
    else:
        got = np.sort(np.array(enc.sigma))[::-1]
    exp = np.sort(np.asarray(expected, dtype=float))[::-1]
    if got.size < exp.size:
        got = np.pad(got, (0, exp.size - got.size))
    elif exp.size < got.size:
        exp = np.pad(exp, (0, got.size - exp.size))
    dev = float(np.abs(got - exp).max())
    resid = enc.oracle.unitarity_residual() if enc.oracle is not None else 0.0
    return VerificationReport(ok=dev <= tol and resid <= tol,
                              max_sv_deviation=dev, unitarity_residual=resid, tol=tol)
