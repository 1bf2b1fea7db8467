"""Nonnegative compressed-sensing instances and the hard-threshold baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from ssal.model import (
    Box,
    ConvexSetX,
    InstanceDocument,
    LeastSquares,
    ProblemSpec,
    SemicontinuousSet,
    Vector,
)

from .errors import GeneratorError
from .rng import make_generator, standard_normal

__all__ = ["CsInstance", "baseline_hard_threshold", "gen_cs"]

_ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True, slots=True, eq=False)
class CsInstance:
    spec: ProblemSpec
    f_true: Vector
    noise_sigma2: float
    seed: int

    @property
    def instance_id(self) -> str:
        objective = self.spec.objective
        assert isinstance(objective, LeastSquares)
        p = objective.A.shape[0]
        return f"cs-p{p}-n{self.spec.n}-K{self.spec.y_set.K}-s{self.seed}"

    def to_document(self) -> InstanceDocument:
        metadata: dict[str, Any] = {
            "family": "cs",
            "seed": self.seed,
            "noise_sigma2": self.noise_sigma2,
        }
        return InstanceDocument(
            spec=self.spec,
            instance_id=self.instance_id,
            f_true=self.f_true,
            metadata=metadata,
        )


def _orthonormal_sensing_matrix(gen: np.random.Generator, p: int, n: int) -> Vector:
    """p×n Gaussian draw orthonormalized by QR: rows when p ≤ n, columns otherwise.

    Columns of Q are sign-normalized against diag(R) so the result does not depend on the
    LAPACK sign convention.
    """

    draw = standard_normal(gen, (p, n))
    if p <= n:
        q, r = np.linalg.qr(draw.T)
        signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
        return np.asarray((q * signs).T)
    q, r = np.linalg.qr(draw)
    signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    return np.asarray(q * signs)


def gen_cs(
    p: int,
    n: int,
    K: int,
    sigma2: float = 0.01,
    seed: int = 0,
    a: float = 1e-5,
    u: float | None = 10.0,
) -> CsInstance:
    """Draw A, a K-sparse nonnegative signal f and observations b = Af + r, r ~ N(0, σ²).

    X is the box [0, u] (no upper bound when u is None) and Y uses levels [a, u].
    """

    if not 1 <= K < n:
        raise ValueError(f"K must satisfy 1 <= K < n (got K={K}, n={n})")
    if p < 1:
        raise ValueError(f"p must be positive (got {p})")
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be nonnegative (got {sigma2})")
    upper = math.inf if u is None else float(u)
    if not 0 < a <= upper:
        raise ValueError(f"levels must satisfy 0 < a <= u (got a={a}, u={u})")

    gen = make_generator(seed)
    A = _orthonormal_sensing_matrix(gen, p, n)
    positions = gen.permutation(n)[:K]
    magnitudes = np.abs(standard_normal(gen, K))
    while np.any(magnitudes == 0.0):
        zeros = magnitudes == 0.0
        magnitudes[zeros] = np.abs(standard_normal(gen, int(zeros.sum())))
    f_true = np.zeros(n)
    f_true[positions] = magnitudes
    noise = math.sqrt(sigma2) * standard_normal(gen, p)
    observations = A @ f_true + noise

    gram = A @ A.T if p <= n else A.T @ A
    if not np.allclose(gram, np.eye(gram.shape[0]), rtol=0.0, atol=_ORTHONORMAL_TOL):
        raise GeneratorError(f"sensing matrix failed orthonormality for p={p}, n={n}")
    if int(np.count_nonzero(f_true)) != K:
        raise GeneratorError(f"signal support has {np.count_nonzero(f_true)} entries, wanted {K}")

    spec = ProblemSpec(
        objective=LeastSquares(A, observations),
        x_set=ConvexSetX(box=Box.uniform(n, 0.0, upper)),
        y_set=SemicontinuousSet(np.full(n, a), np.full(n, upper), K),
        n=n,
    )
    return CsInstance(spec=spec, f_true=f_true, noise_sigma2=float(sigma2), seed=seed)


def baseline_hard_threshold(inst: CsInstance) -> Vector:
    """Keep the K largest |Aᵀb| entries clamped into [a, min(b, u)]; zero the rest."""

    spec = inst.spec
    objective = spec.objective
    assert isinstance(objective, LeastSquares)
    estimate = objective.A.T @ objective.bobs
    kept = np.argsort(-np.abs(estimate), kind="stable")[: spec.y_set.K]
    upper = spec.y_set.b
    if spec.x_set.box is not None:
        upper = np.minimum(upper, spec.x_set.box.upper)
    result = np.zeros(spec.n)
    result[kept] = np.clip(estimate[kept], spec.y_set.a[kept], upper[kept])
    return result
