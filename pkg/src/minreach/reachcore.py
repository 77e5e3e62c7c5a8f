"""Reachability core: system and actuator types, reachable subspaces,
feasibility tests, and the exact one-step relaxation threshold.

The system is dx/dt = A x + B u with B = diag(delta) for a zero-one
vector delta; an actuator set is the set of indices where delta is one.
A transfer from x0 at t0 to x1 at t1 is feasible exactly when the
transfer vector x1 - exp(A (t1 - t0)) x0 lies in the reachable subspace
span[B | AB | ... | A^(n-1) B]. With an output weight W the same test is
applied to the W-image of that subspace.

All public actuator indices are 1-based.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    DimensionError,
    InputError,
    UnsupportedOperationError,
)
from .numkit import OrthoBasis, _SpanBuilder, as_matrix, as_square, as_vector, mat_exp

#: Relative exact-feasibility tolerance: a transfer vector v counts as
#: inside a subspace when the squared residual is at most EXACT_TOL * ||v||^2.
EXACT_TOL = 1e-8

#: Hard cap on the state dimension accepted by exhaustive routines.
N_BRUTE = 16


@dataclass(frozen=True, eq=False)
class LtiSystem:
    """Linear time-invariant system, optionally with an output weight.

    Parameters
    ----------
    a : array_like
        Square state matrix, shape ``(n, n)``.
    w : array_like, optional
        Output weight applied to reachable directions, shape ``(q, n)``.
        When omitted the output space is the state space itself.
    """

    a: np.ndarray
    w: np.ndarray | None = None

    def __post_init__(self):
        a = as_square(self.a, "a")
        if a.shape[0] == 0:
            raise InputError("a: state dimension must be at least 1")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        if self.w is not None:
            w = as_matrix(self.w, "w")
            if w.shape[1] != a.shape[0]:
                raise DimensionError(
                    f"w: expected {a.shape[0]} columns, got {w.shape[1]}"
                )
            if w.shape[0] == 0:
                raise InputError("w: output dimension must be at least 1")
            w.setflags(write=False)
            object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        """State dimension."""
        return self.a.shape[0]

    @property
    def output_dim(self) -> int:
        """Dimension of the space feasibility is tested in."""
        return self.n if self.w is None else self.w.shape[0]


@dataclass(frozen=True)
class ActuatorSet:
    """A set of actuated state indices, stored 1-based and sorted.

    Parameters
    ----------
    n : int
        State dimension the indices refer to.
    indices : iterable of int
        Distinct indices in ``1..n``; any order is accepted and sorted.
    """

    n: int
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise InputError("n: must be at least 1")
        object.__setattr__(self, "n", n)
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise InputError(f"indices: duplicates in {idx}")
        for i in idx:
            if not 1 <= i <= n:
                raise InputError(f"indices: {i} outside 1..{n}")
        object.__setattr__(self, "indices", tuple(sorted(idx)))

    @classmethod
    def empty(cls, n: int) -> "ActuatorSet":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "ActuatorSet":
        return cls(n, range(1, int(n) + 1))

    @property
    def cardinality(self) -> int:
        return len(self.indices)

    def to_delta(self) -> np.ndarray:
        """Zero-one indicator vector of length n."""
        delta = np.zeros(self.n)
        for i in self.indices:
            delta[i - 1] = 1.0
        return delta

    def to_b(self) -> np.ndarray:
        """The diagonal input matrix diag(delta)."""
        return np.diag(self.to_delta())

    def with_index(self, i: int) -> "ActuatorSet":
        """A new set with index `i` added."""
        if i in self.indices:
            return self
        return ActuatorSet(self.n, self.indices + (int(i),))

    def __contains__(self, i) -> bool:
        return i in self.indices


@dataclass(frozen=True, eq=False)
class TransferSpec:
    """Endpoint data for a state transfer: reach x1 at t1 from x0 at t0."""

    x0: np.ndarray
    x1: np.ndarray
    t0: float = 0.0
    t1: float = 1.0

    def __post_init__(self):
        x0 = as_vector(self.x0, "x0")
        x1 = as_vector(self.x1, "x1")
        if x0.shape[0] != x1.shape[0]:
            raise DimensionError(
                f"x0 and x1 lengths differ: {x0.shape[0]} vs {x1.shape[0]}"
            )
        t0 = float(self.t0)
        t1 = float(self.t1)
        if not (np.isfinite(t0) and np.isfinite(t1)):
            raise InputError("t0, t1: must be finite")
        if not t1 > t0:
            raise InputError(f"time window must satisfy t1 > t0, got [{t0}, {t1}]")
        x0.setflags(write=False)
        x1.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "t1", t1)

    @property
    def n(self) -> int:
        return self.x0.shape[0]


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of a feasibility test."""

    residual_sq: float
    feasible: bool
    basis_rank: int


def _check_system_vector(sys: LtiSystem, v, name: str = "v") -> np.ndarray:
    v = as_vector(v, name)
    if v.shape[0] != sys.output_dim:
        raise DimensionError(
            f"{name}: expected length {sys.output_dim}, got {v.shape[0]}"
        )
    return v


def _check_actuators(sys: LtiSystem, delta: ActuatorSet) -> None:
    if delta.n != sys.n:
        raise DimensionError(
            f"actuator set is over dimension {delta.n}, system has n={sys.n}"
        )


def krylov_columns(sys: LtiSystem, i: int) -> list[np.ndarray]:
    """Power-chain columns for actuator index `i` (1-based).

    Returns the n columns whose k-th entry is the unit-normalized image of
    the i-th unit vector under the k-th power of A (and under the output
    weight when present). Columns that vanish are preserved as exact zero
    vectors; a zero column marks the end of the informative chain.

    The span of these columns is the contribution of index `i` to the
    reachable subspace. For spectrally lopsided systems the chain loses
    the subdominant directions to floating point, so subspace accumulation
    elsewhere in the package uses an invariant-closure sweep that resolves
    the same span exactly.
    """
    n = sys.n
    i = int(i)
    if not 1 <= i <= n:
        raise InputError(f"i: expected 1..{n}, got {i}")
    state = np.zeros((n, n))
    cur = np.zeros(n)
    cur[i - 1] = 1.0
    for k in range(n):
        norm = float(np.linalg.norm(cur))
        if norm == 0.0:
            break
        cur = cur / norm
        state[:, k] = cur
        cur = sys.a @ cur
    out = state if sys.w is None else sys.w @ state
    columns = []
    for k in range(n):
        col = out[:, k].copy()
        norm = float(np.linalg.norm(col))
        if norm > 0.0:
            col /= norm
        columns.append(col)
    return columns


class _ClosureCache:
    """Lazily computed per-index state-space closures for one system.

    The closure of index i is the smallest A-invariant subspace containing
    the i-th unit vector: exactly the span of the Krylov columns of i,
    accumulated by repeatedly applying A to each newly accepted orthonormal
    direction until the span stops growing.
    """

    __slots__ = ("sys", "_bases")

    def __init__(self, sys: LtiSystem):
        self.sys = sys
        self._bases: list[_SpanBuilder | None] = [None] * sys.n

    def state_closure(self, i0: int) -> _SpanBuilder:
        """Closure builder for 0-based index `i0`. Treat as read-only."""
        basis = self._bases[i0]
        if basis is None:
            basis = _index_closure(self.sys.a, i0)
            self._bases[i0] = basis
        return basis


def _index_closure(a: np.ndarray, i0: int) -> _SpanBuilder:
    n = a.shape[0]
    builder = _SpanBuilder(n)
    seed = np.zeros(n)
    seed[i0] = 1.0
    frontier: deque[np.ndarray] = deque()
    accepted = builder.add(seed)
    if accepted is not None:
        frontier.append(accepted)
    while frontier and builder.rank < n:
        direction = frontier.popleft()
        accepted = builder.add(a @ direction)
        if accepted is not None:
            frontier.append(accepted)
    return builder


class _ReachAccumulator:
    """Incremental reachable subspace for a growing actuator set.

    Maintains a state-space span (where invariance lives) and, when the
    system carries an output weight, a parallel output-space span that
    projections and gains are measured in. Copies are cheap enough to
    support copy-on-extend candidate evaluation.
    """

    __slots__ = ("sys", "state", "out")

    def __init__(self, sys: LtiSystem):
        self.sys = sys
        self.state = _SpanBuilder(sys.n)
        self.out = _SpanBuilder(sys.output_dim) if sys.w is not None else None

    def copy(self) -> "_ReachAccumulator":
        other = _ReachAccumulator.__new__(_ReachAccumulator)
        other.sys = self.sys
        other.state = self.state.copy()
        other.out = None if self.out is None else self.out.copy()
        return other

    def include(self, i0: int, cache: _ClosureCache) -> list[np.ndarray]:
        """Fold in the closure of 0-based index `i0`.

        Returns the output-space directions that were newly accepted, in
        acceptance order.
        """
        src = cache.state_closure(i0)
        w = self.sys.w
        added: list[np.ndarray] = []
        for k in range(src.rank):
            direction = self.state.add(src.column(k))
            if direction is None:
                continue
            if w is None:
                added.append(direction)
            else:
                out_dir = self.out.add(w @ direction)
                if out_dir is not None:
                    added.append(out_dir)
        return added

    @property
    def output_builder(self) -> _SpanBuilder:
        return self.state if self.out is None else self.out

    @property
    def state_rank(self) -> int:
        return self.state.rank

    def project_norm_sq(self, v: np.ndarray) -> float:
        nv2 = float(v @ v)
        return min(max(self.output_builder.project_norm_sq(v), 0.0), nv2)

    def residual_sq(self, v: np.ndarray) -> float:
        return float(v @ v) - self.project_norm_sq(v)

    def to_basis(self) -> OrthoBasis:
        return self.output_builder.freeze()


def _accumulate(sys: LtiSystem, delta: ActuatorSet) -> _ReachAccumulator:
    cache = _ClosureCache(sys)
    acc = _ReachAccumulator(sys)
    for i in delta.indices:
        acc.include(i - 1, cache)
    return acc


def reachable_subspace(sys: LtiSystem, delta: ActuatorSet) -> OrthoBasis:
    """Orthonormal basis of the reachable subspace for actuator set `delta`.

    With an output weight the basis spans the W-image of the state-space
    reachable subspace and lives in the output space. The basis is
    deterministic for fixed inputs: indices are folded in ascending order
    and each index's closure directions in their generation order.
    """
    _check_actuators(sys, delta)
    return _accumulate(sys, delta).to_basis()


def residual(sys: LtiSystem, delta: ActuatorSet, v) -> float:
    """Squared distance from `v` to the reachable subspace of `delta`.

    Always non-negative; zero (up to tolerance) exactly when the transfer
    from the origin to `v` is feasible.
    """
    _check_actuators(sys, delta)
    v = _check_system_vector(sys, v)
    return _accumulate(sys, delta).residual_sq(v)


def is_feasible(sys: LtiSystem, delta: ActuatorSet, v) -> FeasibilityReport:
    """Exact-feasibility test of the transfer vector `v` under `delta`.

    Feasible means the squared residual is at most ``EXACT_TOL * ||v||^2``.
    The zero vector is feasible under any actuator set.
    """
    _check_actuators(sys, delta)
    v = _check_system_vector(sys, v)
    acc = _accumulate(sys, delta)
    res = acc.residual_sq(v)
    nv2 = float(v @ v)
    return FeasibilityReport(
        residual_sq=res,
        feasible=res <= EXACT_TOL * nv2,
        basis_rank=acc.output_builder.rank,
    )


def is_controllable(sys: LtiSystem, delta: ActuatorSet) -> bool:
    """Whether `delta` renders the pair (A, diag(delta)) controllable.

    Defined for the unweighted variant only; a system with a non-identity
    output weight raises UnsupportedOperationError.
    """
    _check_actuators(sys, delta)
    if sys.w is not None and not (
        sys.w.shape[0] == sys.n and np.array_equal(sys.w, np.eye(sys.n))
    ):
        raise UnsupportedOperationError(
            "controllability is defined for the unweighted variant only"
        )
    state_sys = sys if sys.w is None else LtiSystem(sys.a)
    return _accumulate(state_sys, delta).state_rank == sys.n


def transfer_vector(sys: LtiSystem, spec: TransferSpec) -> np.ndarray:
    """The vector v = x1 - exp(A (t1 - t0)) x0 whose reachability decides
    the transfer. Returned in state space; apply the output weight
    separately when working with the weighted variant."""
    if spec.n != sys.n:
        raise DimensionError(
            f"transfer endpoints have length {spec.n}, system has n={sys.n}"
        )
    return spec.x1 - mat_exp(sys.a, spec.t1 - spec.t0) @ spec.x0


@dataclass(frozen=True)
class _SubsetTable:
    """Projected squared norms of one vector over all actuator subsets,
    keyed by 0-based index bitmask."""

    n: int
    nv2: float
    proj: dict = field(repr=False)


def _all_subset_projections(sys: LtiSystem, v: np.ndarray) -> _SubsetTable:
    n = sys.n
    cache = _ClosureCache(sys)
    proj: dict[int, float] = {}

    def descend(i0: int, acc: _ReachAccumulator, mask: int) -> None:
        if i0 == n:
            proj[mask] = acc.project_norm_sq(v)
            return
        descend(i0 + 1, acc, mask)
        extended = acc.copy()
        extended.include(i0, cache)
        descend(i0 + 1, extended, mask | (1 << i0))

    descend(0, _ReachAccumulator(sys), 0)
    return _SubsetTable(n=n, nv2=float(v @ v), proj=proj)


def epsilon_a(sys: LtiSystem, v) -> float:
    """Exact one-step relaxation threshold of the pair (A, v).

    Over all actuator subsets S that are infeasible for `v` but become
    feasible after adding some single index, takes the minimum squared
    residual of `v` against the reachable subspace of S. Returns
    ``math.inf`` when no subset has that one-step property.

    Exhaustive over all 2^n subsets; requires ``n <= N_BRUTE``.
    """
    if sys.n > N_BRUTE:
        raise CapacityError(
            f"epsilon_a is exhaustive and capped at n={N_BRUTE}, got n={sys.n}"
        )
    v = _check_system_vector(sys, v)
    nv2 = float(v @ v)
    if nv2 == 0.0:
        raise InputError("v: must be non-zero")
    table = _all_subset_projections(sys, v)
    tol = EXACT_TOL * nv2

    def feasible(mask: int) -> bool:
        return nv2 - table.proj[mask] <= tol

    best = math.inf
    n = sys.n
    for mask in range(1 << n):
        if feasible(mask):
            continue
        if any(
            not mask & (1 << i0) and feasible(mask | (1 << i0)) for i0 in range(n)
        ):
            best = min(best, nv2 - table.proj[mask])
    return best
