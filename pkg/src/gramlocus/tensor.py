"""Real binary (2 x 2 x ... x 2) tensors and the per-slot orthogonal action.

Layout convention used everywhere in this package: slot 1 is the most
significant bit of the linear offset and slot n varies fastest, i.e.

    offset(i_1, ..., i_n) = sum_k i_k * 2^(n - k)

so the slot-1 flattening of the flat entry vector is a contiguous
2 x 2^(n-1) reshape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_BINARY_ORDER = 12
MAX_GENERAL_SIZE = 4096


def offset_from_index(index: Sequence[int]) -> int:
    """Linear offset of a multi-index, slot 1 most significant."""
    off = 0
    for bit in index:
        if bit not in (0, 1):
            raise ValueError(f"multi-index entries must be 0 or 1, got {bit}")
        off = (off << 1) | bit
    return off


def index_from_offset(offset: int, n: int) -> tuple[int, ...]:
    """Inverse of offset_from_index for an order-n tensor."""
    if not 0 <= offset < (1 << n):
        raise ValueError(f"offset {offset} out of range for order {n}")
    return tuple((offset >> (n - 1 - k)) & 1 for k in range(n))


@dataclass(frozen=True, eq=False)
class BinaryTensor:
    """Dense order-n tensor with every dimension equal to 2."""

    order: int
    entries: np.ndarray  # flat, read-only, length 2**order

    @property
    def array(self) -> np.ndarray:
        """Entries reshaped to (2,) * order."""
        return self.entries.reshape((2,) * self.order)

    def __getitem__(self, index: Sequence[int]) -> float:
        return float(self.entries[offset_from_index(index)])


@dataclass(frozen=True, eq=False)
class GeneralTensor:
    """Dense tensor with arbitrary (small) mode sizes."""

    dims: tuple[int, ...]
    entries: np.ndarray  # flat, read-only, length prod(dims)

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def array(self) -> np.ndarray:
        return self.entries.reshape(self.dims)


def _freeze(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=float).ravel()
    out.setflags(write=False)
    return out


def make_binary(n: int, entries: Iterable[float]) -> BinaryTensor:
    """Build an order-n binary tensor from 2**n entries in layout order."""
    if not 2 <= n <= MAX_BINARY_ORDER:
        raise ValueError(f"order must be in 2..{MAX_BINARY_ORDER}, got {n}")
    flat = np.asarray(list(entries) if not isinstance(entries, np.ndarray) else entries,
                      dtype=float).ravel()
    if flat.size != 1 << n:
        raise ValueError(f"expected {1 << n} entries for order {n}, got {flat.size}")
    if not np.all(np.isfinite(flat)):
        raise ValueError("entries must be finite")
    return BinaryTensor(order=n, entries=_freeze(flat))


def make_general(dims: Sequence[int], entries: Iterable[float]) -> GeneralTensor:
    """Build a general tensor from its dims and flat entries in layout order."""
    dims = tuple(int(m) for m in dims)
    if len(dims) < 2 or any(m < 2 for m in dims):
        raise ValueError(f"need at least two modes, each of size >= 2, got {dims}")
    size = math.prod(dims)
    if size > MAX_GENERAL_SIZE:
        raise ValueError(f"total size {size} exceeds limit {MAX_GENERAL_SIZE}")
    flat = np.asarray(list(entries) if not isinstance(entries, np.ndarray) else entries,
                      dtype=float).ravel()
    if flat.size != size:
        raise ValueError(f"expected {size} entries for dims {dims}, got {flat.size}")
    if not np.all(np.isfinite(flat)):
        raise ValueError("entries must be finite")
    return GeneralTensor(dims=dims, entries=_freeze(flat))


def frobenius_norm(t: BinaryTensor | GeneralTensor) -> float:
    return float(np.linalg.norm(t.entries))


def _rng(seed: int, stream: int) -> np.random.Generator:
    """Generator owned by the (seed, stream) pair; streams are independent."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(stream,)))


def sample_unit(n: int, seed: int, stream: int = 0) -> BinaryTensor:
    """Uniform sample from the unit sphere of order-n binary tensors."""
    g = _rng(seed, stream).standard_normal(1 << n)
    return make_binary(n, g / np.linalg.norm(g))


def sample_unit_batch(n: int, seed: int, stream: int, count: int) -> np.ndarray:
    """(count, 2**n) matrix of unit-sphere samples; row 0 equals sample_unit."""
    g = _rng(seed, stream).standard_normal((count, 1 << n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_ball(n: int, seed: int, stream: int = 0) -> BinaryTensor:
    """Uniform sample from the unit ball, via the u^(1/2^n) radius factor."""
    rng = _rng(seed, stream)
    g = rng.standard_normal(1 << n)
    radius = rng.uniform() ** (1.0 / (1 << n))
    return make_binary(n, radius * g / np.linalg.norm(g))


_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def factor_matrix(angle: float, reflect: bool) -> np.ndarray:
    """2x2 rotation by angle, pre-composed with the swap matrix when reflect."""
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return rot @ _SWAP if reflect else rot


@dataclass(frozen=True)
class OrthoTuple:
    """Tuple of 2x2 orthogonal matrices, one per slot, encoded (angle, reflect)."""

    factors: tuple[tuple[float, bool], ...]

    @property
    def order(self) -> int:
        return len(self.factors)

    def matrices(self) -> list[np.ndarray]:
        return [factor_matrix(a, r) for a, r in self.factors]

    @staticmethod
    def identity(n: int) -> "OrthoTuple":
        return OrthoTuple(tuple((0.0, False) for _ in range(n)))

    @staticmethod
    def random(n: int, rng: np.random.Generator) -> "OrthoTuple":
        return OrthoTuple(tuple(
            (float(rng.uniform(0.0, 2.0 * math.pi)), bool(rng.integers(2)))
            for _ in range(n)))

    def compose(self, other: "OrthoTuple") -> "OrthoTuple":
        """Slot-wise product self . other (apply other first)."""
        if self.order != other.order:
            raise ValueError("order mismatch in composition")
        out = []
        for (a1, r1), (a2, r2) in zip(self.factors, other.factors):
            # R(a)S^r . R(b)S^q = R(a + (-1)^r b) S^(r xor q)
            angle = a1 + (a2 if not r1 else -a2)
            out.append((angle % (2.0 * math.pi), r1 != r2))
        return OrthoTuple(tuple(out))


def ortho_act(t: BinaryTensor, q: OrthoTuple) -> BinaryTensor:
    """Apply one 2x2 orthogonal matrix per slot (multilinear multiplication)."""
    if q.order != t.order:
        raise ValueError(f"transform order {q.order} != tensor order {t.order}")
    arr = t.array
    for slot, mat in enumerate(q.matrices()):
        arr = np.moveaxis(np.tensordot(mat, arr, axes=(1, slot)), 0, slot)
    return make_binary(t.order, arr.ravel())


def vertex_tensor(n: int, k: int) -> BinaryTensor:
    """Unit tensor with entries 1/sqrt2 at 0...0 and at 1...1 (k ones) 0...0.

    Its Gram tuple is the polytope vertex with k quarter coordinates.
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    flat = np.zeros(1 << n)
    flat[0] = 1.0 / math.sqrt(2.0)
    flat[offset_from_index([1] * k + [0] * (n - k))] = 1.0 / math.sqrt(2.0)
    return make_binary(n, flat)


def edge_tensor(n: int, m: np.ndarray, vectors: Sequence[Sequence[float]],
                j: int) -> BinaryTensor:
    """Tensor a_{i1..in} = M[i1, i_j] * prod of v^(l)[i_l] over slots l not in {1, j}.

    These tensors have equal slot-1 and slot-j Gram determinants and zero in
    every other slot, so their Gram tuples sweep the polytope edge between the
    origin and the (1, j) two-quarter vertex, where the slot-1 facet is tight.
    """
    if not 2 <= j <= n:
        raise ValueError(f"slot j must be in 2..{n}, got {j}")
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2):
        raise ValueError(f"M must be 2x2, got shape {m.shape}")
    slots = [l for l in range(2, n + 1) if l != j]
    if len(vectors) != n - 2:
        raise ValueError(f"expected {n - 2} vectors, got {len(vectors)}")
    vecs = {}
    for slot, v in zip(slots, vectors):
        v = np.asarray(v, dtype=float)
        if v.shape != (2,):
            raise ValueError(f"vectors must have length 2, got shape {v.shape}")
        vecs[slot] = v
    flat = np.zeros(1 << n)
    for off in range(1 << n):
        idx = index_from_offset(off, n)
        val = m[idx[0], idx[j - 1]]
        for slot in slots:
            val *= vecs[slot][idx[slot - 1]]
        flat[off] = val
    return make_binary(n, flat)


def example_counter() -> BinaryTensor:
    """Unit order-3 tensor on the curved boundary sheet of the Gram locus.

    Its Gram tuple is (1/8, 1/8, (sqrt2 - 1)/2) and its singular values are
    distinct in every flattening, so it is not orthogonally equivalent to a
    diagonal tensor even though it sits on the boundary.
    """
    big = 2.0 ** -0.25
    small = math.sqrt(0.5 - 1.0 / (2.0 * math.sqrt(2.0)))
    flat = np.zeros(8)
    flat[offset_from_index((0, 0, 0))] = big
    flat[offset_from_index((1, 0, 1))] = small
    flat[offset_from_index((0, 1, 1))] = small
    return make_binary(3, flat)


def example_223() -> GeneralTensor:
    """Unit 2x2x3 tensor whose Gram tuple (1/4, 0, 0) violates d1 <= d2 + d3.

    Shows the binary facet inequalities do not survive larger mode sizes.
    """
    flat = np.zeros(12)
    arr = flat.reshape(2, 2, 3)
    arr[0, 0, 0] = 1.0 / math.sqrt(2.0)
    arr[1, 0, 2] = 1.0 / math.sqrt(2.0)
    return make_general((2, 2, 3), flat)
