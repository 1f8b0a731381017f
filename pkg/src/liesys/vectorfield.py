"""Autonomous vector fields on R^n: Lie brackets, prolongations, rank tests."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, UndeterminedRankError

# Central-difference step for the Jacobian fallback.
_FD_BASE = float(np.cbrt(np.finfo(float).eps))


class VectorField:
    """An autonomous vector field on R^n.

    ``func`` maps a point (array of shape (n,)) to a tangent vector of the
    same shape.  ``jac`` maps a point to the n x n matrix of partials
    d func_i / d x_j; when omitted a central-difference fallback is used and
    ``analytic_jacobian`` is False.
    """

    def __init__(self, dimension, func, jac=None, name=""):
        if dimension < 1:
            raise ValueError("dimension must be a positive integer")
        self.dimension = int(dimension)
        self._func = func
        self._jac = jac
        self.name = name

    @property
    def analytic_jacobian(self):
        return self._jac is not None

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dimension,):
            raise DimensionMismatchError(
                f"point of shape {p.shape} on a field of dimension {self.dimension}"
            )
        return np.asarray(self._func(p), dtype=float)

    def jacobian(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dimension,):
            raise DimensionMismatchError(
                f"point of shape {p.shape} on a field of dimension {self.dimension}"
            )
        if self._jac is not None:
            return np.asarray(self._jac(p), dtype=float)
        return self._fd_jacobian(p)

    def _fd_jacobian(self, p):
        n = self.dimension
        h = _FD_BASE * max(1.0, float(np.linalg.norm(p)))
        J = np.empty((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            J[:, j] = (self(p + e) - self(p - e)) / (2.0 * h)
        return J

    def __repr__(self):
        tag = self.name or "field"
        return f"VectorField({tag}, dim={self.dimension})"


@dataclass(frozen=True)
class StructureConstants:
    """Table c[alpha, beta, gamma] of structure constants, indices 0-based."""

    r: int
    c: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.r, self.r, self.r):
            raise ValueError(f"expected shape {(self.r,) * 3}, got {c.shape}")
        object.__setattr__(self, "c", c)
        if not np.array_equal(c, -np.swapaxes(c, 0, 1)):
            raise ValueError("structure constants are not antisymmetric")
        # Jacobi identity: sum over cyclic permutations of the lower indices.
        jac = (
            np.einsum("abe,ecd->abcd", c, c)
            + np.einsum("bce,ead->abcd", c, c)
            + np.einsum("cae,ebd->abcd", c, c)
        )
        if np.max(np.abs(jac)) > 1e-14:
            raise ValueError("structure constants violate the Jacobi identity")


def sl2_constants():
    """Structure constants of sl(2,R) in the convention shared by every
    realization here: [E1,E2] = 2 E3, [E1,E3] = -E1, [E2,E3] = E2."""
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 2.0, -2.0
    c[0, 2, 0], c[2, 0, 0] = -1.0, 1.0
    c[1, 2, 1], c[2, 1, 1] = 1.0, -1.0
    return StructureConstants(3, c)


def bracket(X, Y, p):
    """Lie bracket [X, Y] evaluated at p: (DY . X - DX . Y)(p)."""
    if X.dimension != Y.dimension:
        raise DimensionMismatchError(
            f"bracket of fields with dimensions {X.dimension} and {Y.dimension}"
        )
    p = np.asarray(p, dtype=float)
    return Y.jacobian(p) @ X(p) - X.jacobian(p) @ Y(p)


@dataclass(frozen=True)
class AlgebraReport:
    """Outcome of a closure check against a table of structure constants."""

    ok: bool
    tol: float
    worst_residual: float
    worst_pair: tuple
    worst_point: np.ndarray

    def __str__(self):
        verdict = "pass" if self.ok else "FAIL"
        return (
            f"algebra check {verdict}: worst residual {self.worst_residual:.3e} "
            f"(tol {self.tol:.1e}) at pair {self.worst_pair}, "
            f"point {np.array2string(self.worst_point, precision=4)}"
        )


def verify_algebra(fields, constants, probes, tol):
    """Check [X_a, X_b](p) = sum_g c_{ab}^g X_g(p) at every probe point."""
    if not probes:
        raise ValueError("probes must be nonempty")
    r = len(fields)
    if constants.r != r:
        raise DimensionMismatchError(
            f"{r} fields against constants of dimension {constants.r}"
        )
    dims = {X.dimension for X in fields}
    if len(dims) != 1:
        raise DimensionMismatchError("fields do not share a dimension")

    worst = -1.0
    worst_pair = None
    worst_point = None
    for p in probes:
        p = np.asarray(p, dtype=float)
        vals = [X(p) for X in fields]
        for a in range(r):
            for b in range(a + 1, r):
                expected = sum(constants.c[a, b, g] * vals[g] for g in range(r))
                res = float(np.linalg.norm(bracket(fields[a], fields[b], p) - expected))
                if res > worst:
                    worst, worst_pair, worst_point = res, (a, b), p
    return AlgebraReport(
        ok=worst <= tol,
        tol=tol,
        worst_residual=worst,
        worst_pair=worst_pair,
        worst_point=worst_point,
    )


def diagonal_prolongation(X, copies):
    """The field on R^(n * copies) acting as X on each n-block."""
    if copies < 1:
        raise ValueError("copies must be a positive integer")
    if copies == 1:
        return X
    n = X.dimension

    def func(p):
        blocks = p.reshape(copies, n)
        return np.concatenate([X(b) for b in blocks])

    def jac(p):
        blocks = p.reshape(copies, n)
        J = np.zeros((copies * n, copies * n))
        for i, b in enumerate(blocks):
            J[i * n:(i + 1) * n, i * n:(i + 1) * n] = X.jacobian(b)
        return J

    return VectorField(n * copies, func, jac, name=f"{X.name}^({copies})" if X.name else "")


def default_probe_sampler(rng, dimension):
    """Uniform sample in [-2, 2]^n with every coordinate kept away from 0.

    The guard band |x_i| >= 0.1 avoids the singular hyperplanes of the
    Pinney-type fields while remaining generic for the others.
    """
    while True:
        p = rng.uniform(-2.0, 2.0, size=dimension)
        if np.all(np.abs(p) >= 0.1):
            return p


def _numerical_rank(rows, rank_tol):
    sv = np.linalg.svd(rows, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rank_tol * sv[0]))


def prolonged_rank(fields, copies, probe, rank_tol=1e-8):
    """Rank of the diagonally prolonged fields stacked as rows at one probe."""
    prolonged = [diagonal_prolongation(X, copies) for X in fields]
    rows = np.array([Xp(probe) for Xp in prolonged])
    return _numerical_rank(rows, rank_tol)


def minimal_m(fields, max_copies, probes_per_level=11, rank_tol=1e-8,
              rng=None, sampler=default_probe_sampler):
    """Smallest number of copies at which the prolonged fields reach full rank.

    The rank at each level is decided by majority vote over random probes,
    guarding against accidentally non-generic points.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    r = len(fields)
    n = fields[0].dimension
    ranks_found = {}
    for copies in range(1, max_copies + 1):
        votes = [
            prolonged_rank(fields, copies, sampler(rng, n * copies), rank_tol)
            for _ in range(probes_per_level)
        ]
        majority = int(np.bincount(votes).argmax())
        ranks_found[copies] = majority
        if majority == r:
            return copies
    raise UndeterminedRankError(
        f"no copy count up to {max_copies} reaches rank {r}", ranks=ranks_found
    )
