"""Candidate-solution representations: bounded real vectors and Gray-coded bitstrings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, EncodingError, ShapeError

DEFAULT_BITS_PER_GENE = 16


def make_rng(seed: int | None) -> np.random.Generator:
    """The single random stream an engine run owns."""
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Bounds:
    """Per-gene box constraints. Scalars broadcast to ``dim``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != upper.shape:
            raise BoundsError(f"lower {lower.shape} and upper {upper.shape} differ in shape")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise BoundsError("bounds must be finite")
        if np.any(lower >= upper):
            raise BoundsError("every gene needs lower < upper")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, lower: float, upper: float, dim: int) -> "Bounds":
        return cls(np.full(dim, float(lower)), np.full(dim, float(upper)))

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, genes: np.ndarray) -> bool:
        genes = np.asarray(genes)
        return bool(np.all(genes >= self.lower) and np.all(genes <= self.upper))


@dataclass(frozen=True)
class GrayGenome:
    bits: np.ndarray
    bits_per_gene: int

    @property
    def dim(self) -> int:
        return self.bits.shape[0] // self.bits_per_gene


def _check_dim(genes: np.ndarray, bounds: Bounds) -> None:
    if genes.ndim != 1 or genes.shape[0] != bounds.dim:
        raise ShapeError(f"genome has shape {genes.shape}, bounds expect ({bounds.dim},)")


def random_genome(bounds: Bounds, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw every gene independently and uniformly on ``[lower, upper]``."""
    if dim < 1:
        raise ShapeError("dim must be >= 1")
    if bounds.dim != dim:
        raise ShapeError(f"bounds cover {bounds.dim} genes, asked for {dim}")
    return rng.uniform(bounds.lower, bounds.upper)


def clamp(genes: np.ndarray, bounds: Bounds) -> np.ndarray:
    genes = np.asarray(genes, dtype=float)
    _check_dim(genes, bounds)
    return np.minimum(bounds.upper, np.maximum(bounds.lower, genes))


def gray_encode(genes: np.ndarray, bounds: Bounds, bits_per_gene: int = DEFAULT_BITS_PER_GENE) -> GrayGenome:
    """Quantize each gene to ``2**B`` levels and write the level as reflected Gray code.

    Bits are laid out gene by gene, most significant bit first.
    """
    if not 8 <= bits_per_gene <= 32:
        raise EncodingError("bits_per_gene must lie in [8, 32]")
    genes = np.asarray(genes, dtype=float)
    _check_dim(genes, bounds)
    if not bounds.contains(genes):
        raise EncodingError("gene outside bounds cannot be encoded")
    levels = (1 << bits_per_gene) - 1
    index = np.rint((genes - bounds.lower) / bounds.span * levels).astype(np.uint64)
    gray = index ^ (index >> np.uint64(1))
    shifts = np.arange(bits_per_gene - 1, -1, -1, dtype=np.uint64)
    bits = ((gray[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
    return GrayGenome(bits.reshape(-1), bits_per_gene)


def gray_decode(genome: GrayGenome, bounds: Bounds) -> np.ndarray:
    B = genome.bits_per_gene
    if genome.bits.shape[0] != bounds.dim * B:
        raise ShapeError(f"{genome.bits.shape[0]} bits do not cover {bounds.dim} genes of {B} bits")
    gray = genome.bits.reshape(bounds.dim, B)
    # binary bit i is the XOR of Gray bits 0..i (MSB first)
    binary = np.bitwise_xor.accumulate(gray, axis=1).astype(np.uint64)
    weights = np.uint64(1) << np.arange(B - 1, -1, -1, dtype=np.uint64)
    index = (binary * weights[None, :]).sum(axis=1, dtype=np.uint64)
    levels = (1 << B) - 1
    return bounds.lower + index.astype(float) / levels * bounds.span


def quantize(genes: np.ndarray, bounds: Bounds, bits_per_gene: int = DEFAULT_BITS_PER_GENE) -> np.ndarray:
    """Snap a real genome onto the Gray-code grid (clamping first)."""
    return gray_decode(gray_encode(clamp(genes, bounds), bounds, bits_per_gene), bounds)


@dataclass(frozen=True)
class Individual:
    """A genome with its cached evaluation.

    ``objectives``, ``rank`` and ``crowding`` are filled in by the
    multi-objective engine only.
    """

    genes: np.ndarray
    fitness: float
    loss: float = float("nan")
    accuracy: float = float("nan")
    objectives: np.ndarray | None = None
    rank: int = -1
    crowding: float = 0.0
