"""Permutations and permutation groups backed by deterministic stabilizer
chains.

Conventions used everywhere in this package:

* points are 1-based in text (cycle notation) and 0-based in arrays;
* products read left to right: (a * b) means "apply a, then b";
* chains are built deterministically, so orders, element enumeration and
  search output are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as _k

DEFAULT_ENUM_CAP = 100_000

_CHAIN_CAP = 64


class CycleParseError(ValueError):
    """Raised when cycle-notation text does not match the grammar."""


class DegreeMismatchError(ValueError):
    """Raised when permutations of different degrees are combined."""


class EnumerationCapError(RuntimeError):
    """Raised when a group is too large for an enumeration-backed operation."""


class Permutation:
    """A bijection of {1..degree}, stored as a 0-based image table."""

    __slots__ = ("_images",)

    def __init__(self, images):
        arr = np.asarray(images, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("images must be a non-empty 1-d table")
        check = np.sort(arr)
        if not np.array_equal(check, np.arange(arr.size)):
            raise ValueError("images is not a bijection on the points")
        arr = arr.copy()
        arr.setflags(write=False)
        self._images = arr

    @property
    def degree(self) -> int:
        return self._images.size

    @property
    def images(self) -> np.ndarray:
        """Read-only 0-based image table."""
        return self._images

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        if not 1 <= point <= self.degree:
            raise ValueError(f"point {point} out of range 1..{self.degree}")
        return int(self._images[point - 1]) + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Apply self first, then other."""
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise DegreeMismatchError(
                f"degree {self.degree} != degree {other.degree}")
        return Permutation(other._images[self._images])

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = identity(self.degree)
        p = self
        while n:
            if n & 1:
                result = result * p
            p = p * p
            n >>= 1
        return result

    def inverse(self) -> "Permutation":
        out = np.empty(self.degree, np.int64)
        out[self._images] = np.arange(self.degree)
        return Permutation(out)

    def conjugate(self, by: "Permutation") -> "Permutation":
        """by^-1 * self * by."""
        return by.inverse() * self * by

    def order(self) -> int:
        return int(_k.perm_order(self._images))

    def is_identity(self) -> bool:
        return bool(_k.is_identity(self._images))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles, 1-based, in canonical form: each cycle starts at
        its least point and cycles are sorted by least moved point."""
        img = self._images
        seen = np.zeros(self.degree, bool)
        out = []
        for s in range(self.degree):
            if seen[s] or img[s] == s:
                continue
            cyc = [s + 1]
            x = int(img[s])
            seen[s] = True
            while x != s:
                seen[x] = True
                cyc.append(x + 1)
                x = int(img[x])
            out.append(tuple(cyc))
        return tuple(out)

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(str(p) for p in c) + ")" for c in cycs)

    def __str__(self) -> str:
        return self.cycle_string()

    def __repr__(self) -> str:
        return f"Permutation[{self.cycle_string()}, degree={self.degree}]"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Permutation)
                and np.array_equal(self._images, other._images))

    def __hash__(self) -> int:
        return hash(self._images.tobytes())


def identity(degree: int) -> Permutation:
    return Permutation(np.arange(degree))


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse whitespace-free cycle notation over 1..degree.

    Grammar: perm := "()" | cycle+ ; cycle := "(" int ("," int)+ ")".
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    images = np.arange(degree, dtype=np.int64)
    if text == "()":
        return Permutation(images)
    if not text:
        raise CycleParseError("empty permutation text")
    pos = 0
    seen = set()
    while pos < len(text):
        if text[pos] != "(":
            raise CycleParseError(
                f"expected '(' at position {pos}, found {text[pos]!r}")
        end = text.find(")", pos)
        if end < 0:
            raise CycleParseError(f"unclosed '(' at position {pos}")
        body = text[pos + 1:end]
        parts = body.split(",")
        if len(parts) < 2:
            raise CycleParseError(
                f"cycle '({body})' must list at least two points")
        points = []
        for tok in parts:
            if not tok.isdigit():
                raise CycleParseError(f"bad point token {tok!r}")
            v = int(tok)
            if v < 1 or v > degree:
                raise CycleParseError(
                    f"point {tok} out of range 1..{degree}")
            if v in seen:
                raise CycleParseError(f"repeated point {tok}")
            seen.add(v)
            points.append(v - 1)
        for a, b in zip(points, points[1:]):
            images[a] = b
        images[points[-1]] = points[0]
        pos = end + 1
    return Permutation(images)


def format_cycles(p: Permutation) -> str:
    """Canonical cycle notation; inverse of parse_cycles on canonical text."""
    return p.cycle_string()


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Apply a first, then b."""
    return a * b


def element_order(p: Permutation) -> int:
    return p.order()


class StabilizerChain:
    """Base, transversals and strong generators of a permutation group.

    Thin wrapper over the kernel arrays; immutable once built.
    """

    def __init__(self, arrays, degree: int):
        self._arrays = arrays
        self._degree = degree

    @property
    def arrays(self):
        return self._arrays

    @property
    def levels(self) -> int:
        return int(self._arrays[0][0])

    @property
    def base(self) -> tuple[int, ...]:
        """Base points, 1-based."""
        b = self._arrays[1]
        return tuple(int(b[l]) + 1 for l in range(self.levels))

    @property
    def strong_generators(self) -> tuple[Permutation, ...]:
        meta, _, sgen = self._arrays[0], self._arrays[1], self._arrays[2]
        return tuple(Permutation(sgen[i]) for i in range(int(meta[1])))

    def orbit_sizes(self) -> tuple[int, ...]:
        osize = self._arrays[7]
        return tuple(int(osize[l]) for l in range(self.levels))

    def transversal(self, level: int) -> dict[int, Permutation]:
        """Orbit point (1-based) -> coset representative at the given level."""
        meta, base, sgen, sginv, glev, trans, tinv, osize = self._arrays
        n = self._degree
        out = {}
        for p in range(n):
            if trans[level, p, 0] != -1:
                out[p + 1] = Permutation(trans[level, p])
        return out

    def order(self) -> int:
        o = 1
        for s in self.orbit_sizes():
            o *= s
        return o

    def sift(self, p: Permutation) -> tuple[bool, Permutation]:
        res = np.empty(self._degree, np.int64)
        ok = _k.ch_sift(self._arrays, p.images, res)
        return bool(ok), Permutation(res)


def _build_arrays(gen_matrix: np.ndarray, degree: int, prefix=()):
    cap = max(_CHAIN_CAP, gen_matrix.shape[0] + 8)
    pref = np.asarray(list(prefix), dtype=np.int64)
    while True:
        ch, ok = _k.ch_build(gen_matrix, cap, pref)
        if ok:
            return ch
        cap *= 2
        if cap > 1 << 16:
            raise RuntimeError("strong generator table exceeded capacity")


class PermGroup:
    """Permutation group with a lazily built stabilizer chain.

    Immutable after construction; the chain is built on first use and cached.
    """

    def __init__(self, generators, degree: int | None = None,
                 name: str | None = None):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group with no generators")
            degree = gens[0].degree
        for i, g in enumerate(gens):
            if g.degree != degree:
                raise DegreeMismatchError(
                    f"generator {i} has degree {g.degree}, expected {degree}")
        self._degree = int(degree)
        self._generators = gens
        self._name = name
        self._chain: StabilizerChain | None = None
        self._elem_matrix: np.ndarray | None = None
        self._classes: tuple[ConjugacyClass, ...] | None = None
        self._sorted_elems: np.ndarray | None = None

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self._generators

    @property
    def name(self) -> str | None:
        return self._name

    def _gen_matrix(self) -> np.ndarray:
        if not self._generators:
            return np.empty((0, self._degree), np.int64)
        return np.stack([g.images for g in self._generators]).astype(np.int64)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(
                _build_arrays(self._gen_matrix(), self._degree), self._degree)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def is_trivial(self) -> bool:
        return self.order() == 1

    def contains(self, p: Permutation) -> bool:
        if p.degree != self._degree:
            raise DegreeMismatchError(
                f"element degree {p.degree} != group degree {self._degree}")
        member, _ = self.chain.sift(p)
        return member

    def __contains__(self, p: Permutation) -> bool:
        return self.contains(p)

    def element_matrix(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """All elements as image rows, in deterministic depth-first order."""
        order = self.order()
        if order > cap:
            raise EnumerationCapError(
                f"group order {order:,} exceeds enumeration cap {cap:,}")
        if self._elem_matrix is None:
            out = np.empty((order, self._degree), np.int64)
            cnt = _k.ch_enumerate(self.chain.arrays, out)
            if cnt != order:
                raise RuntimeError("enumeration disagrees with chain order")
            self._elem_matrix = out
        return self._elem_matrix

    def elements(self, cap: int = DEFAULT_ENUM_CAP) -> tuple[Permutation, ...]:
        mat = self.element_matrix(cap)
        return tuple(Permutation(mat[i]) for i in range(mat.shape[0]))

    def sorted_element_matrix(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        if self._sorted_elems is None:
            mat = self.element_matrix(cap)
            order = np.lexsort(mat.T[::-1])
            self._sorted_elems = np.ascontiguousarray(mat[order])
        return self._sorted_elems

    def conjugacy_classes(self, cap: int = DEFAULT_ENUM_CAP) -> tuple["ConjugacyClass", ...]:
        """Classes labelled in ATLAS style: ascending element order, then
        ascending class size, ties broken by least representative."""
        if self._classes is not None:
            return self._classes
        elems = self.sorted_element_matrix(cap)
        if self._generators:
            gens = self._gen_matrix()
            ginvs = np.empty_like(gens)
            for i in range(gens.shape[0]):
                _k.inv_into(gens[i], ginvs[i])
            labels, ncls = _k.class_partition(elems, gens, ginvs)
        else:
            labels = np.zeros(1, np.int64)
            ncls = 1
        reps = {}
        sizes = np.zeros(ncls, np.int64)
        for i in range(elems.shape[0]):
            c = int(labels[i])
            sizes[c] += 1
            if c not in reps:
                reps[c] = i
        infos = []
        for c in range(ncls):
            rep_row = elems[reps[c]]
            infos.append((int(_k.perm_order(rep_row)), int(sizes[c]),
                          tuple(int(v) for v in rep_row), c))
        infos.sort()
        classes = []
        letters = {}
        for elt_order, size, _, c in infos:
            k = letters.get(elt_order, 0)
            letters[elt_order] = k + 1
            label = f"{elt_order}{_letter(k)}"
            member_idx = np.nonzero(labels == c)[0]
            classes.append(ConjugacyClass(
                representative=Permutation(elems[reps[c]]),
                size=size,
                element_order=elt_order,
                label=label,
                _group=self,
                _member_indices=member_idx,
            ))
        self._classes = tuple(classes)
        return self._classes

    def class_of(self, p: Permutation, cap: int = DEFAULT_ENUM_CAP) -> "ConjugacyClass":
        for cls in self.conjugacy_classes(cap):
            if p in cls:
                return cls
        raise ValueError(f"{p} is not an element of the group")

    def stabilizer(self, point: int) -> "PermGroup":
        """Stabilizer of a 1-based point, from a chain based at that point."""
        if not 1 <= point <= self._degree:
            raise ValueError(f"point {point} out of range 1..{self._degree}")
        arrays = _build_arrays(self._gen_matrix(), self._degree,
                               prefix=(point - 1,))
        meta, _, sgen, _, glev = arrays[0], arrays[1], arrays[2], arrays[3], arrays[4]
        gens = [Permutation(sgen[i]) for i in range(int(meta[1]))
                if int(glev[i]) >= 1]
        return PermGroup(gens, degree=self._degree)

    def __repr__(self) -> str:
        label = self._name or f"{len(self._generators)} generators"
        return f"PermGroup[{label}, degree={self._degree}]"


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    size: int
    element_order: int
    label: str
    _group: PermGroup = field(repr=False)
    _member_indices: np.ndarray = field(repr=False)

    def element_matrix(self) -> np.ndarray:
        return self._group.sorted_element_matrix()[self._member_indices]

    def elements(self) -> tuple[Permutation, ...]:
        mat = self.element_matrix()
        return tuple(Permutation(mat[i]) for i in range(mat.shape[0]))

    def __contains__(self, p: Permutation) -> bool:
        mat = self._group.sorted_element_matrix()
        idx = _k.row_find(mat, np.asarray(p.images, np.int64))
        if idx < 0:
            return False
        pos = int(np.searchsorted(self._member_indices, idx))
        return (pos < self._member_indices.size
                and int(self._member_indices[pos]) == idx)


def _letter(k: int) -> str:
    # A, B, ..., Z, AA, AB, ... (ATLAS-style letters)
    out = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        out = chr(ord("A") + r) + out
    return out


def build_chain(g: PermGroup) -> StabilizerChain:
    return g.chain


def contains(g: PermGroup, p: Permutation) -> bool:
    return g.contains(p)


def enumerate_elements(g: PermGroup, cap: int = DEFAULT_ENUM_CAP):
    """Yield each element exactly once, in deterministic depth-first order."""
    for p in g.elements(cap):
        yield p


def conjugacy_classes(g: PermGroup, cap: int = DEFAULT_ENUM_CAP):
    return g.conjugacy_classes(cap)
