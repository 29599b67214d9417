"""Seeded random quantum objects: Haar pure states and unitaries, fixed-rank
density operators, complete POVMs, and trace-preserving instruments.

All sampling is deterministic given the generator/seed passed in; nothing here
touches global RNG state.
"""

from __future__ import annotations

import numpy as np

from .states import DimSpec, DensityOperator, PureState, ROLE_A, ROLE_B


def as_rng(seed) -> np.random.Generator:
    """Accept a seed, SeedSequence or Generator and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_rngs(seed, n: int) -> list[np.random.Generator]:
    """n independent child generators derived deterministically from seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-random d x d unitary via QR of a Ginibre matrix with phase fix."""
    rng = as_rng(rng)
    q, r = np.linalg.qr(_ginibre(rng, d, d))
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_isometry(rows: int, cols: int, rng) -> np.ndarray:
    """rows x cols matrix with orthonormal columns (rows >= cols)."""
    if rows < cols:
        raise ValueError(f"isometry needs rows >= cols, got {rows} x {cols}")
    rng = as_rng(rng)
    q, r = np.linalg.qr(_ginibre(rng, rows, cols))
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def _pair_spec(d: int) -> DimSpec:
    return DimSpec.make(("A", d, ROLE_A), ("B", d, ROLE_B))


def random_pure(dims: DimSpec | int, rng) -> PureState:
    """Haar-random pure state (normalized complex Gaussian vector).

    An integer d is shorthand for a two-party d x d A/B layout.
    """
    rng = as_rng(rng)
    spec = _pair_spec(dims) if isinstance(dims, int) else dims
    vec = _ginibre(rng, spec.total_dim, 1).ravel()
    return PureState(vec / np.linalg.norm(vec), spec)


def random_density(dims: DimSpec, rng, rank: int | None = None) -> DensityOperator:
    """Random density operator of the given rank via a Haar purification.

    The state is the reduced operator of a Haar-random pure vector on
    system x (rank)-dimensional ancilla; rank defaults to the full dimension.
    """
    rng = as_rng(rng)
    d = dims.total_dim
    if rank is None:
        rank = d
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} out of range 1..{d}")
    g = _ginibre(rng, d, rank)
    mat = g @ g.conj().T
    return DensityOperator(mat / np.trace(mat).real, dims)


def random_povm(d: int, outcomes: int, rng) -> list[np.ndarray]:
    """Complete POVM with the given number of outcomes on a d-level system.

    Built from an isometry V: C^d -> C^outcomes ⊗ C^d by slicing row blocks,
    so completeness holds by construction.
    """
    if outcomes < 1:
        raise ValueError("need at least one outcome")
    rng = as_rng(rng)
    v = random_isometry(outcomes * d, d, rng)
    elements = []
    for k in range(outcomes):
        block = v[k * d : (k + 1) * d, :]
        elements.append(block.conj().T @ block)
    return elements


def random_rank1_povm(d: int, outcomes: int, rng) -> list[np.ndarray]:
    """Complete POVM with rank-one elements a_k a_k^dag (outcomes >= d)."""
    if outcomes < d:
        raise ValueError(f"rank-one POVM needs outcomes >= d, got {outcomes} < {d}")
    rng = as_rng(rng)
    v = random_isometry(outcomes, d, rng)
    return [np.outer(v[k, :].conj(), v[k, :]) for k in range(outcomes)]


def random_instrument(d: int, n_outcomes: int, kraus_per_outcome, rng) -> list[list[np.ndarray]]:
    """Trace-preserving instrument: outcome j carries Kraus list {M_jk}.

    ``kraus_per_outcome`` is an int or a length-n_outcomes list. Raw Ginibre
    Kraus operators are right-normalized by S^{-1/2}, S = sum M^dag M.
    """
    rng = as_rng(rng)
    if isinstance(kraus_per_outcome, int):
        kraus_per_outcome = [kraus_per_outcome] * n_outcomes
    if len(kraus_per_outcome) != n_outcomes:
        raise ValueError("kraus_per_outcome length mismatch")
    raw = [[_ginibre(rng, d, d) for _ in range(nk)] for nk in kraus_per_outcome]
    s = sum(m.conj().T @ m for ms in raw for m in ms)
    evals, evecs = np.linalg.eigh(s)
    s_inv_sqrt = (evecs / np.sqrt(evals)) @ evecs.conj().T
    return [[m @ s_inv_sqrt for m in ms] for ms in raw]


def sample_random(kind: str, dims, seed, rank: int | None = None,
                  outcomes: int | None = None):
    """Dispatch sampler matching the CLI surface.

    kind: "pure" | "density" | "unitary" | "povm"; dims is a DimSpec for
    states and an int local dimension for unitary/povm.
    """
    rng = as_rng(seed)
    if kind == "pure":
        return random_pure(dims, rng)
    if kind == "density":
        return random_density(dims, rng, rank=rank)
    if kind == "unitary":
        return random_unitary(int(dims), rng)
    if kind == "povm":
        if outcomes is None:
            raise ValueError("povm sampling needs an outcome count")
        return random_povm(int(dims), outcomes, rng)
    raise ValueError(f"unknown sample kind {kind!r}")
