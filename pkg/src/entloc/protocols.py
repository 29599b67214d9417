"""Finite LOCC protocols as explicit outcome-branching trees, their
evaluation on a shared state, and one-step monotonicity gap checks.

A tree node names the acting party and its instrument; every outcome is
broadcast (children are indexed by outcome), so classical communication is
implicit in the branching. Leaves score the remaining A-B state with a root
measure. The collaboration value of a given tree is an achievable average,
hence a lower bound on the collaboration optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import LockedStateSpec
from .localize import LEConfig, ProductPOVM, average_root_entanglement, optimize_le
from .measures import Instrument, RootMeasure
from .states import (
    DensityOperator,
    DimensionError,
    embed_operator,
    partial_trace,
)

_PRUNE_TOL = 1e-14


@dataclass(frozen=True)
class ProtocolNode:
    """One round: ``party`` applies ``instrument``; ``children[j]`` continues
    after outcome j (None = stop and score)."""

    party: str
    instrument: Instrument
    children: tuple["ProtocolNode | None", ...]

    def __post_init__(self):
        if len(self.children) != len(self.instrument.outcomes):
            raise ValueError("need exactly one child slot per instrument outcome")
        if self.instrument.party != self.party:
            raise ValueError("node party and instrument party disagree")


@dataclass(frozen=True)
class ProtocolResult:
    """Weighted leaves of a protocol run: (probability, leaf value, outcome path)."""

    average: float
    leaves: tuple[tuple[float, float, tuple[int, ...]], ...]
    leaf_states: tuple[DensityOperator, ...]

    def to_dict(self, measure_name: str = "") -> dict:
        return {
            "average": self.average,
            "measure": measure_name,
            "bound": "lower",
            "leaves": [
                {"p": p, "value": v, "path": list(path)} for p, v, path in self.leaves
            ],
        }


def _apply_outcome(mat: np.ndarray, kraus, party: str, dims) -> np.ndarray:
    out = np.zeros_like(mat)
    for m in kraus:
        big = embed_operator(np.asarray(m, dtype=np.complex128), (party,), dims)
        out += big @ mat @ big.conj().T
    return out


def evaluate_protocol(rho: DensityOperator, root: ProtocolNode | None,
                      measure: RootMeasure) -> ProtocolResult:
    """Depth-first branch evolution of the protocol tree on the shared state.

    Branch weight is carried in the unnormalized matrix trace; leaves trace
    out the helper parties and score the Y state across the A|B cut.
    """
    dims = rho.dims
    dims.require_bipartite_roles()
    cut = (dims.a_labels, dims.b_labels)
    y_labels = dims.y_labels
    leaves = []
    leaf_states = []

    def recurse(mat: np.ndarray, node, path):
        p = float(np.trace(mat).real)
        if p < _PRUNE_TOL:
            return
        if node is None:
            branch = DensityOperator(0.5 * (mat + mat.conj().T) / p, dims)
            sigma = partial_trace(branch, y_labels)
            leaves.append((p, measure.density(sigma, cut), tuple(path)))
            leaf_states.append(sigma)
            return
        if node.party not in dims.labels:
            raise DimensionError(f"protocol party {node.party!r} not in the state layout")
        if node.instrument.dim != dims.dim_of(node.party):
            raise DimensionError(
                f"instrument dimension {node.instrument.dim} != party "
                f"{node.party!r} dimension {dims.dim_of(node.party)}"
            )
        for j, kraus in enumerate(node.instrument.outcomes):
            recurse(_apply_outcome(mat, kraus, node.party, dims), node.children[j],
                    path + [j])

    recurse(rho.matrix.copy(), root, [])
    average = float(sum(p * v for p, v, _ in leaves))
    return ProtocolResult(average, tuple(leaves), tuple(leaf_states))


def apply_instrument(rho: DensityOperator, instrument: Instrument):
    """Outcome list [(q_j, normalized post state)] of one local instrument."""
    out = []
    for kraus in instrument.outcomes:
        mat = _apply_outcome(rho.matrix, kraus, instrument.party, rho.dims)
        q = float(np.trace(mat).real)
        if q < _PRUNE_TOL:
            out.append((0.0, None))
            continue
        out.append((q, DensityOperator(0.5 * (mat + mat.conj().T) / q, rho.dims)))
    return out


def monotonicity_gap(rho: DensityOperator, instrument: Instrument,
                     measure: RootMeasure, povm: ProductPOVM | None = None,
                     config: LEConfig | None = None) -> float:
    """One-step gap  sum_j q_j LE(state after outcome j) - LE(state).

    With ``povm`` given, both sides are averaged at that fixed POVM; otherwise
    each side runs its own seeded ascent at a matched budget. A positive gap
    means the local instrument on A or B increased the localizable value.
    """
    if rho.dims.roles.get(instrument.party) not in ("A", "B"):
        raise DimensionError("monotonicity instrument must act on an A- or B-role party")

    def le(state: DensityOperator) -> float:
        if povm is not None:
            return average_root_entanglement(state, povm, measure).value
        return optimize_le(state, measure, config).value

    lhs = 0.0
    for q, post in apply_instrument(rho, instrument):
        if post is not None and q > 0.0:
            lhs += q * le(post)
    return lhs - le(rho)


def locked_state_protocol(spec: LockedStateSpec | None = None) -> ProtocolNode:
    """Two-round collaboration protocol that fully unlocks the locked state.

    Round 1: the key holder measures the ancilla qubit a in the computational
    basis and broadcasts x. Round 2: the helper undoes the scrambling with
    V_x^dag and measures the computational basis, leaving the A-B pair in a
    maximally entangled state on every branch.
    """
    if spec is None:
        spec = LockedStateSpec()
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    p1 = np.diag([0.0, 1.0]).astype(np.complex128)
    charlie_measure = ProtocolNode(
        "C", Instrument.projective("C", (p0, p1)), (None, None)
    )

    def charlie_branch(x: int) -> ProtocolNode:
        v = np.asarray(spec.v[x], dtype=np.complex128)
        return ProtocolNode(
            "C", Instrument.unitary("C", v.conj().T), (charlie_measure,)
        )

    return ProtocolNode(
        "a",
        Instrument.projective("a", (p0, p1)),
        (charlie_branch(0), charlie_branch(1)),
    )
