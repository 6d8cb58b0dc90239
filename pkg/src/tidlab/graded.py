"""The ternary bracket on the direct sum of (1,2)- and (2,1)-type tensors.

An element is a pair X = X_low + X_high with X_low of type (1,2) and X_high
of type (2,1).  No binary contraction preserves this space (gradings add to
-2, 0 or +2, never ±1), but the weighted ternary bracket does: each of its
twelve alternating words is evaluated as the sum of the two end-to-end chain
contractions over the word, so the bracket has 24 contraction terms.

Which upper leg of one operand meets which lower leg of the next in the
doubled chain edge is not determined by the chain's diagram class; that
choice is the ChainConvention.  `convention_search` measures every pairing
choice against the cyclic identity and the twenty-term identity and reports
the survivors; the canonical convention pairs slots in parallel everywhere.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .diagrams import LOWER, UPPER, ContractionDiagram, SlotRef
from .tensors import DenseTensor, TensorShape, apply_diagram
from .words import (
    BRACKET_WORD_ORDER,
    HIGH,
    IDENTITY18_TERMS,
    LOW,
    GradedWord,
)

__all__ = [
    "GradedPair",
    "TernaryWeights",
    "ChainConvention",
    "CANONICAL_CONVENTION",
    "PARALLEL",
    "CROSSED",
    "three_commutator",
    "cyclic_residual",
    "identity18_residual",
    "word_generators",
    "random_graded_pair",
    "graded_relative_residual",
    "convention_search",
    "ConventionTrial",
]

_LOW_SHAPE = TensorShape(1, 2)
_HIGH_SHAPE = TensorShape(2, 1)

PARALLEL = "parallel"
CROSSED = "crossed"


@dataclass(frozen=True)
class GradedPair:
    """X = X_low + X_high with X_low of type (1,2) and X_high of type (2,1)."""

    low: DenseTensor
    high: DenseTensor

    def __post_init__(self) -> None:
        if self.low.shape != _LOW_SHAPE:
            raise ValueError(f"low component must be (1,2), got {self.low.shape}")
        if self.high.shape != _HIGH_SHAPE:
            raise ValueError(f"high component must be (2,1), got {self.high.shape}")
        if self.low.dim != self.high.dim:
            raise ValueError(
                f"components disagree on dimension: {self.low.dim} vs {self.high.dim}"
            )

    @property
    def dim(self) -> int:
        return self.low.dim

    @classmethod
    def zeros(cls, dim: int) -> "GradedPair":
        return cls(DenseTensor.zeros(_LOW_SHAPE, dim), DenseTensor.zeros(_HIGH_SHAPE, dim))

    def __add__(self, other: "GradedPair") -> "GradedPair":
        return GradedPair(self.low + other.low, self.high + other.high)

    def __sub__(self, other: "GradedPair") -> "GradedPair":
        return GradedPair(self.low - other.low, self.high - other.high)

    def __mul__(self, scalar: complex) -> "GradedPair":
        return GradedPair(self.low * scalar, self.high * scalar)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.hypot(self.low.norm(), self.high.norm())

    def to_json(self) -> dict:
        return {"low": self.low.to_json(), "high": self.high.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "GradedPair":
        return cls(DenseTensor.from_json(obj["low"]), DenseTensor.from_json(obj["high"]))


def random_graded_pair(dim: int, seed: int) -> GradedPair:
    """Deterministic random element; component entries uniform in [-1,1]^2."""
    rng = np.random.default_rng(seed)

    def draw(shape: TensorShape) -> DenseTensor:
        size = (dim,) * shape.order
        return DenseTensor(shape, dim, rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size))

    return GradedPair(draw(_LOW_SHAPE), draw(_HIGH_SHAPE))


_OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)


@dataclass(frozen=True)
class TernaryWeights:
    """Bracket weights (alpha, beta, gamma); the identities need alpha+beta+gamma = 0."""

    alpha: complex
    beta: complex
    gamma: complex

    @classmethod
    def canonical(cls) -> "TernaryWeights":
        """The cube roots of unity (1, w, w^2)."""
        return cls(1.0 + 0j, _OMEGA, _OMEGA * _OMEGA)

    @classmethod
    def random_zero_sum(cls, seed: int) -> "TernaryWeights":
        """Random complex weights with alpha + beta + gamma = 0 only."""
        rng = np.random.default_rng(seed)
        a = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        b = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        return cls(a, b, -a - b)

    def sum(self) -> complex:
        return self.alpha + self.beta + self.gamma

    def pair_sum(self) -> complex:
        """Second elementary symmetric function of the weights."""
        return self.alpha * self.beta + self.beta * self.gamma + self.gamma * self.alpha

    def as_dict(self) -> dict[str, complex]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}

    def by_name(self, name: str) -> complex:
        return getattr(self, name)


def _chain_diagram(kind: str, direction: str, pairing: str) -> ContractionDiagram:
    """The end-to-end chain over one alternating word, with explicit slot pairing.

    kind HIGH: operands ((2,1),(1,2),(2,1)); LOW: ((1,2),(2,1),(1,2)).
    direction 'l2r' contracts operand 0 into 1 into 2; 'r2l' the reverse.
    pairing fixes how the doubled edge matches its two slots.
    """
    flip = pairing == CROSSED
    perm = (1, 0) if flip else (0, 1)
    if kind == HIGH:
        shapes = (_HIGH_SHAPE, _LOW_SHAPE, _HIGH_SHAPE)
        if direction == "l2r":
            pairs = {
                (SlotRef(0, UPPER, 0), SlotRef(1, LOWER, perm[0])),
                (SlotRef(0, UPPER, 1), SlotRef(1, LOWER, perm[1])),
                (SlotRef(1, UPPER, 0), SlotRef(2, LOWER, 0)),
            }
        else:
            pairs = {
                (SlotRef(2, UPPER, 0), SlotRef(1, LOWER, perm[0])),
                (SlotRef(2, UPPER, 1), SlotRef(1, LOWER, perm[1])),
                (SlotRef(1, UPPER, 0), SlotRef(0, LOWER, 0)),
            }
    elif kind == LOW:
        shapes = (_LOW_SHAPE, _HIGH_SHAPE, _LOW_SHAPE)
        if direction == "l2r":
            pairs = {
                (SlotRef(0, UPPER, 0), SlotRef(1, LOWER, 0)),
                (SlotRef(1, UPPER, 0), SlotRef(2, LOWER, perm[0])),
                (SlotRef(1, UPPER, 1), SlotRef(2, LOWER, perm[1])),
            }
        else:
            pairs = {
                (SlotRef(2, UPPER, 0), SlotRef(1, LOWER, 0)),
                (SlotRef(1, UPPER, 0), SlotRef(0, LOWER, perm[0])),
                (SlotRef(1, UPPER, 1), SlotRef(0, LOWER, perm[1])),
            }
    else:
        raise ValueError(f"unknown word kind {kind!r}")
    return ContractionDiagram(shapes, frozenset(pairs))


@dataclass(frozen=True)
class ChainConvention:
    """Slot pairings for the four chain diagrams (word kind x direction)."""

    high_l2r: str = PARALLEL
    high_r2l: str = PARALLEL
    low_l2r: str = PARALLEL
    low_r2l: str = PARALLEL

    def __post_init__(self) -> None:
        for name in ("high_l2r", "high_r2l", "low_l2r", "low_r2l"):
            v = getattr(self, name)
            if v not in (PARALLEL, CROSSED):
                raise ValueError(f"{name} must be {PARALLEL!r} or {CROSSED!r}, got {v!r}")

    def diagrams(self, kind: str) -> tuple[ContractionDiagram, ContractionDiagram]:
        """The two linear-type schemes used for every word of the given kind."""
        if kind == HIGH:
            return (
                _chain_diagram(HIGH, "l2r", self.high_l2r),
                _chain_diagram(HIGH, "r2l", self.high_r2l),
            )
        return (
            _chain_diagram(LOW, "l2r", self.low_l2r),
            _chain_diagram(LOW, "r2l", self.low_r2l),
        )

    def to_json(self) -> dict:
        return {
            "high_l2r": self.high_l2r,
            "high_r2l": self.high_r2l,
            "low_l2r": self.low_l2r,
            "low_r2l": self.low_r2l,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChainConvention":
        return cls(
            high_l2r=obj["high_l2r"],
            high_r2l=obj["high_r2l"],
            low_l2r=obj["low_l2r"],
            low_r2l=obj["low_r2l"],
        )

    @classmethod
    def all_conventions(cls) -> list["ChainConvention"]:
        out = []
        for bits in itertools.product((PARALLEL, CROSSED), repeat=4):
            out.append(cls(*bits))
        return out

    def label(self) -> str:
        short = {PARALLEL: "p", CROSSED: "x"}
        return "".join(
            short[v] for v in (self.high_l2r, self.high_r2l, self.low_l2r, self.low_r2l)
        )


CANONICAL_CONVENTION = ChainConvention()


def _check_dims(args: tuple[GradedPair, ...]) -> int:
    dims = {x.dim for x in args}
    if len(dims) != 1:
        raise ValueError(f"arguments have mixed dimensions: {sorted(dims)}")
    return dims.pop()


def three_commutator(
    x: GradedPair,
    y: GradedPair,
    z: GradedPair,
    weights: TernaryWeights,
    convention: ChainConvention = CANONICAL_CONVENTION,
) -> GradedPair:
    """The weighted ternary bracket (x, y, z).

    Each of the six high words and six low words is the sum of the two chain
    evaluations, weighted by which argument occupies the middle position.
    """
    dim = _check_dims((x, y, z))
    args = (x, y, z)
    out = {HIGH: DenseTensor.zeros(_HIGH_SHAPE, dim), LOW: DenseTensor.zeros(_LOW_SHAPE, dim)}
    for kind in (HIGH, LOW):
        d_l2r, d_r2l = convention.diagrams(kind)
        for order, weight_name in BRACKET_WORD_ORDER:
            w = weights.by_name(weight_name)
            if kind == HIGH:
                ops = [args[order[0]].high, args[order[1]].low, args[order[2]].high]
            else:
                ops = [args[order[0]].low, args[order[1]].high, args[order[2]].low]
            value = apply_diagram(d_l2r, ops) + apply_diagram(d_r2l, ops)
            out[kind] = out[kind] + value * w
    return GradedPair(low=out[LOW], high=out[HIGH])


def cyclic_residual(
    x: GradedPair,
    y: GradedPair,
    z: GradedPair,
    weights: TernaryWeights,
    convention: ChainConvention = CANONICAL_CONVENTION,
) -> GradedPair:
    """(x,y,z) + (z,x,y) + (y,z,x); zero whenever alpha+beta+gamma = 0."""
    return (
        three_commutator(x, y, z, weights, convention)
        + three_commutator(z, x, y, weights, convention)
        + three_commutator(y, z, x, weights, convention)
    )


def identity18_residual(
    a: GradedPair,
    b: GradedPair,
    c: GradedPair,
    d: GradedPair,
    e: GradedPair,
    weights: TernaryWeights,
    convention: ChainConvention = CANONICAL_CONVENTION,
) -> GradedPair:
    """The literal twenty-term sum of nested brackets ((p,q,r) s, t).

    Terms are accumulated sequentially in printed order so runs are
    bit-reproducible.
    """
    vals = {"A": a, "B": b, "C": c, "D": d, "E": e}
    dim = _check_dims((a, b, c, d, e))
    total = GradedPair.zeros(dim)
    for term in IDENTITY18_TERMS:
        p, q, r, s, t = (vals[ch] for ch in term)
        inner = three_commutator(p, q, r, weights, convention)
        total = total + three_commutator(inner, s, t, weights, convention)
    return total


def word_generators(word: GradedWord) -> list[tuple[str, ...]]:
    """Contiguous three-symbol windows whose bracket can produce the word.

    A five-symbol word has three windows; the degenerate three-symbol word is
    its own single window.
    """
    symbols = word.symbols
    if len(set(symbols)) != len(symbols):
        raise ValueError(f"word symbols must be distinct, got {''.join(symbols)}")
    return [tuple(symbols[i : i + 3]) for i in range(len(symbols) - 2)]


def graded_relative_residual(residual: GradedPair, operands: list[GradedPair]) -> float:
    """Residual norm over the product of operand norms."""
    scale = 1.0
    for x in operands:
        scale *= max(x.norm(), np.finfo(float).tiny)
    return residual.norm() / scale


@dataclass(frozen=True)
class ConventionTrial:
    """Residuals of one pairing convention over the search grid."""

    convention: ChainConvention
    cyclic_max: float
    identity18_max: float

    def passes(self, tolerance: float) -> bool:
        return self.cyclic_max <= tolerance and self.identity18_max <= tolerance


def convention_search(
    dim: int = 2,
    seeds: tuple[int, ...] = (1, 2),
    weights: TernaryWeights | None = None,
    tolerance: float = 1e-10,
) -> tuple[list[ConventionTrial], list[ChainConvention]]:
    """Measure every chain pairing convention against both graded identities.

    Returns all trials (deterministic order) and the surviving conventions.
    The cyclic identity is insensitive to the pairing choice (every word is
    evaluated the same way wherever it appears), so the twenty-term identity
    is the discriminating test; mismatched pairings fail it by O(1).
    """
    if weights is None:
        weights = TernaryWeights.canonical()
    trials = []
    survivors = []
    for conv in ChainConvention.all_conventions():
        c_max = 0.0
        i_max = 0.0
        for seed in seeds:
            vals = {c: random_graded_pair(dim, seed * 100 + i) for i, c in enumerate("ABCDE")}
            x, y, z = vals["A"], vals["B"], vals["C"]
            c_res = cyclic_residual(x, y, z, weights, conv)
            c_max = max(c_max, graded_relative_residual(c_res, [x, y, z]))
            i_res = identity18_residual(*(vals[ch] for ch in "ABCDE"), weights, conv)
            i_max = max(
                i_max, graded_relative_residual(i_res, [vals[ch] for ch in "ABCDE"])
            )
        trial = ConventionTrial(conv, c_max, i_max)
        trials.append(trial)
        if trial.passes(tolerance):
            survivors.append(conv)
    return trials, survivors
