"""Bipartite root entanglement measures: entropy of entanglement, the
two-qubit concurrence closed form, the geometric-mean concurrence family for
pure states, and the per-outcome contraction factor of dimension-preserving
instruments.

The geometric-mean concurrence for a d x d pure state is
d * (lambda_0 ... lambda_{d-1})^(1/d) with lambda the squared Schmidt
coefficients zero-padded to d = max(d_left, d_right); for unequal local
dimensions the padding forces the value to zero. Evaluated on an
unnormalized vector it is homogeneous of degree one in the density operator
(degree two in the vector), which the convex-roof optimizer relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import (
    DensityOperator,
    DimSpec,
    DimensionError,
    PureState,
    schmidt_decompose,
)

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_PURITY_TOL = 1e-8


def _role_cut(dims: DimSpec):
    dims.require_bipartite_roles()
    if dims.z_labels:
        raise DimensionError(
            "state has Z parties; pass an explicit cut or reduce to Y first"
        )
    left = dims.a_labels
    right = tuple(lab for lab in dims.labels if lab not in left)
    return left, right


def _cut_or_default(dims: DimSpec, cut):
    if cut is None:
        return _role_cut(dims)
    return tuple(cut[0]), tuple(cut[1])


def _schmidt_numbers_homogeneous(psi: PureState, cut) -> tuple[np.ndarray, int]:
    """Squared singular values of the coefficient matrix, padded to max(dl, dr).

    Works on unnormalized vectors (no normalization applied), so downstream
    measures inherit exact homogeneity.
    """
    left, right = _cut_or_default(psi.dims, cut)
    sd = schmidt_decompose(
        PureState(psi.amplitudes, psi.dims, normalized=False), left, right
    )
    return sd.schmidt_numbers, sd.schmidt_numbers.size


def entropy_of_entanglement(psi: PureState, cut=None) -> float:
    """Von Neumann entropy (base-2) of the reduced state across the cut, in ebits."""
    if abs(np.linalg.norm(psi.amplitudes) - 1.0) > 1e-8 and psi.normalized:
        raise ValueError("entropy of entanglement needs a normalized state")
    lam, _ = _schmidt_numbers_homogeneous(psi, cut)
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log2(lam)))


def gconcurrence_pure(psi: PureState, cut=None) -> float:
    """Geometric-mean concurrence of a pure state across the cut.

    d * (prod lambda_i)^(1/d) with d = max of the two cut dimensions; exactly
    zero when the cut dimensions differ (zero padding annihilates the product).
    """
    lam, d = _schmidt_numbers_homogeneous(psi, cut)
    prod = float(np.prod(lam))
    if prod <= 0.0:
        return 0.0
    return d * prod ** (1.0 / d)


def wootters_concurrence(rho: DensityOperator, cut=None) -> float:
    """Two-qubit concurrence closed form.

    max(0, mu_1 - mu_2 - mu_3 - mu_4) with mu_i the decreasing square roots of
    the eigenvalues of rho (sy ⊗ sy) rho* (sy ⊗ sy).
    """
    left, right = _cut_or_default(rho.dims, cut)
    if rho.dims.dim_of_labels(left) != 2 or rho.dims.dim_of_labels(right) != 2:
        raise DimensionError("concurrence closed form requires a 2 x 2 qubit pair")
    yy = np.kron(_SIGMA_Y, _SIGMA_Y)
    m = rho.matrix @ yy @ rho.matrix.conj() @ yy
    evals = np.linalg.eigvals(m).real
    mu = np.sqrt(np.clip(np.sort(evals)[::-1], 0.0, None))
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def f_factor(kraus_ops, d: int | None = None) -> float:
    """Contraction coefficient sum_k |Det M_k|^(2/d) of one instrument outcome.

    Only square (dimension-preserving) Kraus operators are supported; the
    determinant is undefined otherwise.
    """
    total = 0.0
    for m in kraus_ops:
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"Kraus operator shape {m.shape} is not square")
        if d is None:
            d = m.shape[0]
        elif m.shape[0] != d:
            raise DimensionError(f"Kraus operator of size {m.shape[0]}, expected {d}")
        total += abs(np.linalg.det(m)) ** (2.0 / d)
    return total


@dataclass(frozen=True)
class Instrument:
    """Outcome-indexed Kraus description of a local operation on one party.

    ``outcomes[j]`` is the Kraus list of outcome j; the summed map must be
    trace preserving.
    """

    party: str
    outcomes: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        outs = tuple(
            tuple(np.asarray(m, dtype=np.complex128) for m in ms) for ms in self.outcomes
        )
        object.__setattr__(self, "outcomes", outs)
        if not outs or any(not ms for ms in outs):
            raise ValueError("instrument needs at least one Kraus operator per outcome")
        d = outs[0][0].shape[0]
        for ms in outs:
            for m in ms:
                if m.shape != (d, d):
                    raise DimensionError("all Kraus operators must be square of equal size")
        total = sum(m.conj().T @ m for ms in outs for m in ms)
        if np.max(np.abs(total - np.eye(d))) > 1e-8:
            raise ValueError("instrument is not trace preserving")

    @property
    def dim(self) -> int:
        return self.outcomes[0][0].shape[0]

    @staticmethod
    def unitary(party: str, u: np.ndarray) -> "Instrument":
        return Instrument(party, ((u,),))

    @staticmethod
    def projective(party: str, projectors) -> "Instrument":
        return Instrument(party, tuple((np.asarray(p),) for p in projectors))

    def f_factors(self) -> list[float]:
        return [f_factor(ms, self.dim) for ms in self.outcomes]


@dataclass(frozen=True)
class RootMeasure:
    """Tagged bipartite measure scoring the final A-B state.

    ``kind`` is one of "entropy", "concurrence", "gconcurrence". Mixed-state
    evaluation: concurrence uses the closed form; gconcurrence uses the closed
    form on a qubit pair (where the two coincide) and the convex roof
    elsewhere; entropy accepts only (numerically) pure inputs.
    """

    kind: str
    roof_config: object = None  # RoofConfig; resolved lazily to avoid an import cycle

    def __post_init__(self):
        if self.kind not in ("entropy", "concurrence", "gconcurrence"):
            raise ValueError(f"unknown measure kind {self.kind!r}")

    def pure(self, psi: PureState, cut=None) -> float:
        if self.kind == "entropy":
            return entropy_of_entanglement(psi, cut)
        return gconcurrence_pure(psi, cut)

    def density(self, rho: DensityOperator, cut=None) -> float:
        left, right = _cut_or_default(rho.dims, cut)
        if self.kind == "entropy":
            try:
                psi = rho.as_pure(tol=_PURITY_TOL)
            except ValueError as exc:
                raise ValueError(
                    "entropy root is defined on pure states only; got a mixed branch"
                ) from exc
            return entropy_of_entanglement(psi, (left, right))
        dl = rho.dims.dim_of_labels(left)
        dr = rho.dims.dim_of_labels(right)
        if self.kind == "concurrence" or (dl, dr) == (2, 2):
            if (dl, dr) != (2, 2):
                raise DimensionError("concurrence closed form requires a qubit pair")
            return wootters_concurrence(rho, (left, right))
        if rho.rank() == 1:
            return gconcurrence_pure(rho.as_pure(), (left, right))
        from .roof import gconcurrence_mixed

        value, _ = gconcurrence_mixed(rho, (left, right), self.roof_config)
        return value

    def __call__(self, state, cut=None) -> float:
        if isinstance(state, PureState):
            return self.pure(state, cut)
        return self.density(state, cut)


def entropy_measure() -> RootMeasure:
    return RootMeasure("entropy")


def concurrence_measure() -> RootMeasure:
    return RootMeasure("concurrence")


def gconcurrence_measure(roof_config=None) -> RootMeasure:
    return RootMeasure("gconcurrence", roof_config)
