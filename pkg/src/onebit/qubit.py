"""Two-dimensional states over a complete set of three mutually
complementary binary measurements.

States are probability 6-vectors (p_x, 1-p_x, p_y, 1-p_y, p_z, 1-p_z);
the equivalent mean-value vector (2p_x-1, 2p_y-1, 2p_z-1) lives in the
unit ball, with pure states on the unit sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import QUADRATIC, EntropyMeasure, pair_entropy

#: Tolerance on sector sums and entry ranges.
SECTOR_TOL = 1e-9
#: Tolerance on the mean-value norm for physicality.
PHYSICAL_TOL = 1e-9

_SECTOR_NAMES = ("x", "y", "z")


@dataclass(frozen=True)
class ComplementaryFrame:
    """Three pairwise orthonormal measurement axes in mean-value space.

    Orthonormality is exactly mutual complementarity: certainty along one
    axis forces even odds along the other two.  Improper frames
    (determinant -1) are accepted; ``determinant`` reports which kind a
    frame is.
    """

    axes: np.ndarray

    def __post_init__(self):
        a = np.array(self.axes, dtype=float)
        if a.shape != (3, 3):
            raise ValueError(f"frame needs three 3-vectors, got shape {a.shape}")
        gram = a @ a.T
        gap = float(np.max(np.abs(gram - np.eye(3))))
        if gap > SECTOR_TOL:
            raise ValueError(f"frame axes are not orthonormal (gap {gap:.3g})")
        a.setflags(write=False)
        object.__setattr__(self, "axes", a)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.axes))


CANONICAL_FRAME = ComplementaryFrame(np.eye(3))


@dataclass(frozen=True)
class QubitState:
    """Probability 6-vector over the three complementary measurements.

    Construction checks the sector structure (each (p, 1-p) pair sums
    to 1); it does not enforce entry ranges or physicality, because
    post-selection diagnostics must be able to represent the unphysical
    6-vectors whose detection is the point of the positivity criterion.
    Use :meth:`from_probabilities` or :meth:`validate` for the full check.
    """

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(v) for v in self.probs)
        if len(probs) != 6:
            raise ValueError(f"state needs 6 probabilities, got {len(probs)}")
        object.__setattr__(self, "probs", probs)
        for u in range(3):
            gap = abs(probs[2 * u] + probs[2 * u + 1] - 1.0)
            if gap > SECTOR_TOL:
                raise ValueError(
                    f"sector {_SECTOR_NAMES[u]} sums to "
                    f"{probs[2 * u] + probs[2 * u + 1]!r}, not 1"
                )

    @classmethod
    def from_probabilities(cls, probs, tol: float = PHYSICAL_TOL) -> "QubitState":
        """Fully validated construction: sector sums, entry ranges and
        physicality of the mean-value vector are all enforced."""
        state = cls(tuple(probs))
        state.validate(tol)
        return state

    @property
    def as_array(self) -> np.ndarray:
        return np.array(self.probs)

    @property
    def mean_values(self) -> np.ndarray:
        """The mean-value vector (2p_x - 1, 2p_y - 1, 2p_z - 1)."""
        p = self.probs
        return np.array([2.0 * p[0] - 1.0, 2.0 * p[2] - 1.0, 2.0 * p[4] - 1.0])

    def validate(self, tol: float = PHYSICAL_TOL) -> None:
        """Raise ValueError unless entries are in [0, 1] and |m| <= 1,
        each within ``tol``.  States outside tolerance are rejected, not
        clipped; silent clipping would mask positivity violations."""
        p = self.as_array
        if np.any(p < -tol) or np.any(p > 1.0 + tol):
            raise ValueError(f"probabilities outside [0, 1]: {self.probs}")
        norm = float(np.linalg.norm(self.mean_values))
        if norm > 1.0 + tol:
            raise ValueError(
                f"mean-value vector has norm {norm!r} > 1: not a physical state"
            )


def probabilities_from_mean(
    m, frame: ComplementaryFrame = CANONICAL_FRAME, tol: float = PHYSICAL_TOL
) -> QubitState:
    """State whose outcome probabilities along the frame axes are
    p_u = (1 + m . u) / 2.

    Rejects mean-value vectors with |m| > 1 + tol.  Round-trips with
    :func:`mean_from_probabilities` on the canonical frame.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3,):
        raise ValueError(f"mean-value vector must have 3 components, got {m.shape}")
    norm = float(np.linalg.norm(m))
    if norm > 1.0 + tol:
        raise ValueError(
            f"mean-value vector has norm {norm!r} > 1: not a physical state"
        )
    p = np.clip((1.0 + frame.axes @ m) / 2.0, 0.0, 1.0)
    return QubitState((p[0], 1.0 - p[0], p[1], 1.0 - p[1], p[2], 1.0 - p[2]))


def mean_from_probabilities(state: QubitState) -> np.ndarray:
    """Mean-value vector (2p_x - 1, 2p_y - 1, 2p_z - 1) of a state."""
    return state.mean_values


def total_uncertainty_state(
    state: QubitState, measure: EntropyMeasure = QUADRATIC
) -> float:
    """Total uncertainty of a state: the sum of pair entropies over its
    three sectors.

    Agrees with :func:`onebit.measures.total_uncertainty` on valid states
    and extends it to diagnostic states whose entries fall outside [0, 1].
    """
    p = state.probs
    return sum(pair_entropy(p[2 * u], measure) for u in range(3))


def is_pure(state: QubitState, tol: float = PHYSICAL_TOL) -> bool:
    """True when the mean-value vector sits on the unit sphere within tol."""
    return abs(float(np.linalg.norm(state.mean_values)) - 1.0) <= tol


def malus_probability(theta: float) -> float:
    """cos^2(theta / 2): probability of the + outcome when a pure state is
    measured along an axis at angle theta from its mean-value direction."""
    return math.cos(theta / 2.0) ** 2


def random_mean_vector(rng: np.random.Generator, kind: str = "pure") -> np.ndarray:
    """Uniform mean-value vector on the unit sphere (pure) or in the unit
    ball (mixed)."""
    if kind not in ("pure", "mixed"):
        raise ValueError(f"kind must be 'pure' or 'mixed', got {kind!r}")
    v = rng.normal(size=3)
    norm = float(np.linalg.norm(v))
    while norm < 1e-12:
        v = rng.normal(size=3)
        norm = float(np.linalg.norm(v))
    v = v / norm
    if kind == "mixed":
        v = v * rng.uniform() ** (1.0 / 3.0)
    return v


def random_state(rng: np.random.Generator, kind: str = "pure") -> QubitState:
    """Random state in the canonical frame; deterministic for a given
    generator.  kind='pure' samples the sphere, 'mixed' the ball."""
    return probabilities_from_mean(random_mean_vector(rng, kind))
