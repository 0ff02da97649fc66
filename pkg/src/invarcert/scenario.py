"""Scenario feasibility programs for affine vertex policies.

Given a candidate invariant polytope ``S`` (vertices ``x_i``), an input
polytope ``U`` and ``K`` sampled parameter vectors, the central object is
the feasibility program

    find (C_i, d_i), i = 1..N   such that for every sample delta and
    every vertex:  H (C_i delta + d_i) <= 1   and
                   F A(delta) x_i + F B(delta) (C_i delta + d_i) <= 1.

The program decouples across vertices, so each block is solved as a small
LP over ``z_i = (vec C_i, d_i)`` with a 1-norm tie-break objective and
deterministic constraint generation: the map from the ordered sample list
to the returned policy is single-valued, which is what the downstream
certificate requires.

The module also provides the conservative common-input baseline (one
fixed input per vertex for all samples), admissibility checks, and the
greedy support-subsample reduction whose cardinality drives the
certificate.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from . import lp_core
from .errors import DimensionMismatch, InvarcertError, NumericalBreakdown
from .geometry import Polytope

SOLUTION_TOL = 1e-6
_CG_BATCH = 8  # violated rows added per constraint-generation round
_ACTIVE_TOL = 1e-7  # slack below this marks a sample as potentially supporting


class Infeasible(InvarcertError):
    """The scenario program admits no policy.

    Carries the first violated ``(sample, vertex, row)`` triple when the
    failure could be localized.
    """

    def __init__(self, message, sample=None, vertex=None, row=None):
        self.sample, self.vertex, self.row = sample, vertex, row
        super().__init__(message)


class InfeasibleOnSubsample(InvarcertError):
    """A subsample re-solve reported infeasibility.

    A subset of a feasible constraint system is always feasible, so this
    flags a determinism or numerical fault and must not occur.
    """


class MismatchedFingerprints(InvarcertError):
    pass


class DistributionUnavailable(InvarcertError):
    pass


def _digest(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(a, dtype=float)
        h.update(str(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class UniformBox:
    """Uniform product distribution on the box [lower, upper]."""

    lower: np.ndarray
    upper: np.ndarray

    def __init__(self, lower, upper):
        lo = np.array(lower, dtype=float).ravel()
        hi = np.array(upper, dtype=float).ravel()
        if lo.size != hi.size:
            raise DimensionMismatch("lower and upper lengths differ")
        if np.any(lo > hi):
            raise ValueError("lower must be <= upper componentwise")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.size

    def draw(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(count, self.dim))


@dataclass(frozen=True)
class DiscreteUniform:
    """Uniform distribution over table indices 0..count-1 (dimension 1)."""

    count: int

    @property
    def dim(self) -> int:
        return 1

    def draw(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.count, size=(count, 1)).astype(float)


@dataclass(frozen=True)
class ScenarioSet:
    """Ordered K-multisample of parameter vectors.

    The order matters: policy synthesis is a deterministic function of the
    ordered list, and support-subsample indices refer to it.
    """

    samples: np.ndarray  # (K, ell)
    distribution: object = None
    seed: int | None = None

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim == 1:
            s = s[:, None]
        if s.ndim != 2 or s.shape[0] < 1:
            raise ValueError("samples must be a nonempty (K, ell) array")
        if isinstance(self.distribution, UniformBox):
            if self.distribution.dim != s.shape[1]:
                raise DimensionMismatch("distribution dimension != sample dimension")
            if np.any(s < self.distribution.lower - 1e-12) or np.any(
                s > self.distribution.upper + 1e-12
            ):
                raise ValueError("samples fall outside the declared uniform box")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_uniform_box(cls, lower, upper, count: int, seed: int) -> "ScenarioSet":
        dist = UniformBox(lower, upper)
        rng = np.random.default_rng(seed)
        return cls(samples=dist.draw(count, rng), distribution=dist, seed=seed)

    @classmethod
    def from_csv(cls, path) -> "ScenarioSet":
        with open(path) as fh:
            first = fh.readline()
        skip = 0
        try:
            [float(tok) for tok in first.replace(",", " ").split()]
        except ValueError:
            skip = 1  # header line
        samples = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
        return cls(samples=samples)

    @property
    def K(self) -> int:
        return self.samples.shape[0]

    @property
    def ell(self) -> int:
        return self.samples.shape[1]

    @property
    def fingerprint(self) -> str:
        return _digest(self.samples)


@dataclass(frozen=True)
class AffinePolicy:
    """Per-vertex affine maps ``u_i(delta) = gains[i] @ delta + offsets[i]``."""

    gains: np.ndarray  # (N, m, ell)
    offsets: np.ndarray  # (N, m)
    scenario_fingerprint: str | None = None

    def __post_init__(self):
        g = np.array(self.gains, dtype=float)
        d = np.array(self.offsets, dtype=float)
        if g.ndim != 3 or d.ndim != 2 or g.shape[:2] != d.shape:
            raise DimensionMismatch("gains must be (N, m, ell) and offsets (N, m)")
        g.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "gains", g)
        object.__setattr__(self, "offsets", d)

    @property
    def vertex_count(self) -> int:
        return self.gains.shape[0]

    @property
    def fingerprint(self) -> str:
        return _digest(self.gains, self.offsets)

    def vertex_inputs(self, delta) -> np.ndarray:
        """Inputs at every vertex for one parameter draw; shape (N, m)."""
        d = np.asarray(delta, dtype=float).ravel()
        if d.size != self.gains.shape[2]:
            raise DimensionMismatch(
                f"expected parameter of dimension {self.gains.shape[2]}, got {d.size}"
            )
        return self.gains @ d + self.offsets


def evaluate_policy(policy: AffinePolicy, delta) -> np.ndarray:
    """Stacked per-vertex inputs (N, m); row i is ``C_i delta + d_i``."""
    return policy.vertex_inputs(delta)


@dataclass(frozen=True)
class VertexConstraintBlock:
    """Constraints on the input at one vertex for one sample.

    Encodes ``{u : H u <= 1, FB u <= 1 - FA x_i}``: membership of the
    one-step image of the vertex in the candidate set, with an admissible
    input.
    """

    input_matrix: np.ndarray  # H, (q, m)
    input_rhs: np.ndarray  # (q,)
    image_matrix: np.ndarray  # F B, (p, m)
    image_rhs: np.ndarray  # 1 - F A x_i, (p,)

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([self.input_matrix, self.image_matrix])

    @property
    def rhs(self) -> np.ndarray:
        return np.concatenate([self.input_rhs, self.image_rhs])


def assemble_vertex_constraints(family, S: Polytope, U: Polytope, delta):
    """One :class:`VertexConstraintBlock` per vertex of ``S``."""
    A, B = family.instantiate(delta)
    if A.shape[0] != S.dim:
        raise DimensionMismatch("state dimension of the family != dim of S")
    if B.shape[1] != U.dim:
        raise DimensionMismatch("input dimension of the family != dim of U")
    H = U.facets
    FB = S.facets @ B
    FAX = S.facets @ A @ S.vertices.T  # (p, N)
    blocks = []
    for i in range(S.vertex_count):
        blocks.append(
            VertexConstraintBlock(
                input_matrix=H,
                input_rhs=np.ones(U.facet_count),
                image_matrix=FB,
                image_rhs=1.0 - FAX[:, i],
            )
        )
    return blocks


def is_admissible(family, S: Polytope, U: Polytope, delta, u, tol: float = 1e-8) -> bool:
    """True iff every vertex input lies in ``U`` and maps its vertex into ``S``."""
    A, B = family.instantiate(delta)
    N, m = S.vertex_count, U.dim
    u = np.asarray(u, dtype=float).reshape(N, m)
    if np.any(U.facets @ u.T > 1.0 + tol):
        return False
    images = S.vertices @ A.T + u @ B.T  # (N, n)
    return bool(np.all(S.facets @ images.T <= 1.0 + tol))


class _BlockProgram:
    """Stacked per-sample constraint rows over the per-vertex unknowns.

    For the affine policy the unknown is ``z_i = (vec C_i, d_i)``; for the
    constant-input baseline it is ``d_i`` alone.  The row matrix is shared
    by all vertices; only the image right-hand side depends on the vertex.
    """

    def __init__(self, family, S, U, samples, affine=True, feas_tol=1e-9):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[:, None]
        self.S, self.U = S, U
        self.K, ell = samples.shape
        self.N = S.vertex_count
        self.m = U.dim
        self.q = U.facet_count
        self.p = S.facet_count
        self.feas_tol = feas_tol
        self.dvar = self.m * (ell + 1) if affine else self.m
        self.block_rows = self.q + self.p

        rows = np.empty((self.K * self.block_rows, self.dvar))
        rhs = np.empty((self.N, self.K * self.block_rows))
        eye_m = np.eye(self.m)
        for j in range(self.K):
            A, B = family.instantiate(samples[j])
            if A.shape != (S.dim, S.dim) or B.shape != (S.dim, self.m):
                raise DimensionMismatch("family output does not match S and U")
            M = (
                np.hstack([np.kron(eye_m, samples[j]), eye_m]) if affine else eye_m
            )
            lo = j * self.block_rows
            rows[lo : lo + self.q] = U.facets @ M
            rows[lo + self.q : lo + self.block_rows] = (S.facets @ B) @ M
            rhs[:, lo : lo + self.q] = 1.0
            rhs[:, lo + self.q : lo + self.block_rows] = (
                1.0 - (S.facets @ A @ S.vertices.T).T
            )
        self.rows = rows
        self.rhs = rhs

    def row_indices(self, sample_indices) -> np.ndarray:
        base = np.asarray(sample_indices, dtype=int) * self.block_rows
        return (base[:, None] + np.arange(self.block_rows)).ravel()

    def violations(self, vertex: int, z: np.ndarray, idx: np.ndarray) -> np.ndarray:
        return self.rows[idx] @ z - self.rhs[vertex, idx]

    def solve_vertex(self, vertex: int, sample_indices) -> np.ndarray | None:
        """1-norm-minimal feasible point of the vertex block, or None.

        Deterministic constraint generation: starting from the empty
        working set (solution 0), repeatedly add the most violated rows
        (ties broken by position in the ordered sample list) and re-solve
        with the deterministic simplex core.
        """
        idx = self.row_indices(sample_indices)
        z = np.zeros(self.dvar)
        if idx.size == 0:
            return z
        working: list[int] = []
        in_working = np.zeros(idx.size, dtype=bool)
        for _ in range(idx.size + 1):
            viol = self.violations(vertex, z, idx)
            viol[in_working] = -np.inf  # already enforced exactly
            order = np.argsort(-viol, kind="stable")[:_CG_BATCH]
            batch = [int(k) for k in order if viol[k] > self.feas_tol]
            if not batch:
                return z
            working.extend(batch)
            in_working[batch] = True
            z = self._solve_working(vertex, idx[working])
            if z is None:
                return None
        raise NumericalBreakdown("constraint generation failed to converge")

    def _solve_working(self, vertex: int, row_idx: np.ndarray) -> np.ndarray | None:
        A_w = self.rows[row_idx]
        b_w = self.rhs[vertex, row_idx]
        d = self.dvar
        eye = np.eye(d)
        A_in = np.vstack(
            [
                np.hstack([A_w, np.zeros((A_w.shape[0], d))]),
                np.hstack([eye, -eye]),
                np.hstack([-eye, -eye]),
            ]
        )
        b_in = np.concatenate([b_w, np.zeros(2 * d)])
        lp = lp_core.LinearProgram(
            c=np.concatenate([np.zeros(d), np.ones(d)]),
            A_in=A_in,
            b_in=b_in,
            bounds=[(None, None)] * d + [(0.0, None)] * d,
        )
        outcome = lp_core.solve(lp, feas_tol=self.feas_tol)
        if outcome.status is lp_core.LpStatus.INFEASIBLE:
            return None
        if not outcome.is_optimal:  # pragma: no cover - objective bounded below
            raise NumericalBreakdown(f"unexpected LP status {outcome.status}")
        return outcome.z[:d]

    def solve_all(self, sample_indices):
        """Solutions for every vertex, or (None, vertex) at first failure."""
        out = np.empty((self.N, self.dvar))
        for i in range(self.N):
            z = self.solve_vertex(i, sample_indices)
            if z is None:
                return None, i
            out[i] = z
        return out, None

    def diagnose(self) -> tuple[int, int, int]:
        """First (sample, vertex, row) triple at which the program fails.

        Prefix feasibility is monotone in the ordered sample list, so the
        first breaking sample is found by bisection; the reported row is
        the most violated one of that sample's block at the solution of
        the prefix without it.
        """

        def prefix_feasible(length: int) -> bool:
            return all(
                self.solve_vertex(i, range(length)) is not None
                for i in range(self.N)
            )

        lo, hi = 0, self.K  # prefix [:lo] feasible, [:hi] infeasible
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if prefix_feasible(mid):
                lo = mid
            else:
                hi = mid
        culprit = hi - 1
        vertex = next(
            i for i in range(self.N) if self.solve_vertex(i, range(hi)) is None
        )
        z = self.solve_vertex(vertex, range(culprit))
        if z is None:  # pragma: no cover - prefix was verified feasible
            raise NumericalBreakdown("diagnosis lost feasibility")
        block = self.violations(vertex, z, self.row_indices([culprit]))
        return culprit, vertex, int(np.argmax(block))


def _policy_from_matrix(Z: np.ndarray, m: int, ell: int, fingerprint) -> AffinePolicy:
    N = Z.shape[0]
    gains = Z[:, : m * ell].reshape(N, m, ell)
    offsets = Z[:, m * ell :]
    return AffinePolicy(
        gains=gains, offsets=offsets, scenario_fingerprint=fingerprint
    )


def solve_affine_policy(
    family, S: Polytope, U: Polytope, scenarios: ScenarioSet, *, feas_tol: float = 1e-9
) -> AffinePolicy:
    """Affine vertex policy feasible for every scenario (the map Theta_K).

    Deterministic in the ordered sample list.  Raises :class:`Infeasible`
    with the first violated (sample, vertex, row) triple otherwise.
    """
    prog = _BlockProgram(family, S, U, scenarios.samples, affine=True, feas_tol=feas_tol)
    Z, _ = prog.solve_all(range(prog.K))
    if Z is None:
        sample, vertex, row = prog.diagnose()
        raise Infeasible(
            f"no affine policy: sample {sample}, vertex {vertex}, row {row}",
            sample=sample,
            vertex=vertex,
            row=row,
        )
    return _policy_from_matrix(Z, prog.m, scenarios.ell, scenarios.fingerprint)


def solve_constant_input(
    family, S: Polytope, U: Polytope, scenarios: ScenarioSet, *, feas_tol: float = 1e-9
) -> np.ndarray:
    """One fixed input per vertex, valid for all samples simultaneously.

    The conservative baseline: equivalent to restricting the affine policy
    to zero gains.  Returns a (N, m) array or raises :class:`Infeasible`.
    """
    prog = _BlockProgram(family, S, U, scenarios.samples, affine=False, feas_tol=feas_tol)
    Z, _ = prog.solve_all(range(prog.K))
    if Z is None:
        sample, vertex, row = prog.diagnose()
        raise Infeasible(
            f"no common input: sample {sample}, vertex {vertex}, row {row}",
            sample=sample,
            vertex=vertex,
            row=row,
        )
    return Z


def greedy_support_subsample(
    family,
    S: Polytope,
    U: Polytope,
    scenarios: ScenarioSet,
    solution_tol: float = SOLUTION_TOL,
    *,
    feas_tol: float = 1e-9,
) -> list[int]:
    """Single-pass greedy support subsample of the scenario program.

    Scans samples in ascending order; a sample is discarded when
    re-solving without it reproduces the full-sample policy within
    ``solution_tol`` (max-norm over all policy entries).  Returns the
    retained indices (increasing); re-solving on exactly that subsample
    reproduces the full solution, which is verified before returning.

    Samples whose constraint rows are all strictly slack at the full
    solution cannot move the 1-norm optimum of any vertex block; they are
    discarded without a re-solve, and the final verification guards the
    shortcut.  Re-solves touching only the affected vertices cover the
    rest.  If verification fails the literal one-removal-at-a-time pass
    is rerun without shortcuts.
    """
    prog = _BlockProgram(family, S, U, scenarios.samples, affine=True, feas_tol=feas_tol)
    full, failed_vertex = prog.solve_all(range(prog.K))
    if full is None:
        raise Infeasible(
            f"full scenario program infeasible at vertex {failed_vertex}; "
            "greedy reduction requires a feasible program"
        )

    # per (vertex, sample) minimum slack at the full solution
    slack = np.empty((prog.N, prog.K))
    all_idx = prog.row_indices(range(prog.K))
    for i in range(prog.N):
        s = prog.rhs[i, all_idx] - prog.rows[all_idx] @ full[i]
        slack[i] = s.reshape(prog.K, prog.block_rows).min(axis=1)
    touches = slack < _ACTIVE_TOL  # (N, K)

    matches = _match_checker(prog, full, solution_tol)
    retained = list(range(prog.K))
    for j in range(prog.K):
        candidate = [r for r in retained if r != j]
        affected = np.flatnonzero(touches[:, j])
        if affected.size == 0 or matches(candidate, affected):
            retained = candidate

    if matches(retained, range(prog.N)):
        return retained
    # shortcut assumptions failed (ties between optima); literal pass
    return _greedy_literal(prog, full, solution_tol)


def _match_checker(prog, full, solution_tol):
    def matches(subset, vertices) -> bool:
        for i in vertices:
            z = prog.solve_vertex(i, subset)
            if z is None:
                raise InfeasibleOnSubsample(
                    f"vertex {i} infeasible on a subsample; determinism fault"
                )
            if np.max(np.abs(z - full[i])) > solution_tol:
                return False
        return True

    return matches


def _greedy_literal(prog, full, solution_tol):
    """The one-removal-at-a-time pass with a full re-solve per removal."""
    matches = _match_checker(prog, full, solution_tol)
    retained = list(range(prog.K))
    for j in range(prog.K):
        candidate = [r for r in retained if r != j]
        if matches(candidate, range(prog.N)):
            retained = candidate
    return retained
