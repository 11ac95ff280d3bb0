"""The Galois machinery of equations and points over a free algebra B.

A point of the affine space over H is a rank-tuple in H's carrier,
identified with the homomorphism B -> H extending it.  An equation set
is a set of element pairs of B.  Solving and kernel-intersection form a
Galois connection; its closed congruences make a bounded lattice with
meet = intersection and join = closure of union.  The intersection over
the empty point family is the full relation, so the full congruence is
always closed; the least closed congruence is the intersection of all
point kernels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebras import Congruence, FiniteAlgebra, eval_term
from .errors import AlgebraError, CapExceeded, VarietyError
from .free import FreeAlgebra, extend_hom
from .terms import format_term

__all__ = [
    "ClosedCongruence",
    "ClosedLattice",
    "normalize_equations",
    "all_points",
    "solutions",
    "point_congruence",
    "closure",
    "is_closed",
    "closed_lattice",
    "id_congruence",
    "partition_encoding",
    "lattice_json",
    "lattice_dot",
]

DEFAULT_POINT_CAP = 20000


def normalize_equations(pairs):
    """Unordered-normalize equation pairs: least element first, sorted."""
    return tuple(sorted({(a, b) if a <= b else (b, a) for a, b in pairs}))


@dataclass(frozen=True)
class ClosedCongruence:
    """A closed congruence, stored canonically as its closed point set
    together with the induced partition.  Identity (equality, hashing) is
    the closed point set."""

    points: tuple
    partition: Congruence
    generator_equations: tuple = field(default=None, compare=False, hash=False)

    def __eq__(self, other):
        return isinstance(other, ClosedCongruence) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"ClosedCongruence({self.partition!r}, {len(self.points)} points)"


def _membership_gate(free: FreeAlgebra, target: FiniteAlgebra):
    """Cheap precondition check that the target can lie in the variety."""
    witness = free.variety.refute_membership(target)
    if witness is not None:
        lhs, rhs = witness
        raise VarietyError(
            f"{target.name} lies outside the variety: identity "
            f"{format_term(lhs)} = {format_term(rhs)} fails"
        )


def all_points(free: FreeAlgebra, target: FiniteAlgebra):
    """All rank-tuples over the target carrier, in lexicographic order."""
    return list(itertools.product(range(target.size), repeat=free.nvars))


def _point_mappings(free: FreeAlgebra, target: FiniteAlgebra, cap=None):
    """Element maps of all points (each verified to be a homomorphism).

    Cached per target content on the free algebra: equal tables give equal
    maps, and every point of one target is verified exactly once.
    """
    key = (target.size, tuple(sorted(target.tables.items())))
    cached = free._point_cache.get(key)
    if cached is None:
        _membership_gate(free, target)
        points = all_points(free, target)
        cached = (points, [extend_hom(free, target, p).mapping for p in points])
        free._point_cache[key] = cached
    points, mappings = cached
    if cap is not None and len(points) > cap:
        raise CapExceeded(
            f"{len(points)} points exceed the cap of {cap}", partial_size=len(points)
        )
    return points, mappings


def solutions(equations, free: FreeAlgebra, target: FiniteAlgebra):
    """All points whose extension homomorphism equates every pair."""
    pairs = normalize_equations(equations)
    points, mappings = _point_mappings(free, target)
    return tuple(
        p
        for p, m in zip(points, mappings)
        if all(m[a] == m[b] for a, b in pairs)
    )


def point_congruence(points, free: FreeAlgebra, target: FiniteAlgebra) -> Congruence:
    """Intersection of the kernels of the given points; the empty family
    yields the full congruence."""
    points = [tuple(p) for p in points]
    if not points:
        return Congruence.full(free.size)
    all_points_, all_maps = _point_mappings(free, target)
    by_point = dict(zip(all_points_, all_maps))
    try:
        mappings = [by_point[p] for p in points]
    except KeyError as exc:
        raise AlgebraError(f"point {exc.args[0]} outside the affine space") from None
    labels = [tuple(m[b] for m in mappings) for b in range(free.size)]
    return Congruence.from_labels(labels)


def closure(equations, free: FreeAlgebra, target: FiniteAlgebra) -> ClosedCongruence:
    """The double-prime closure: kernel intersection of the solution set."""
    pairs = normalize_equations(equations)
    points = solutions(pairs, free, target)
    partition = point_congruence(points, free, target)
    return ClosedCongruence(points, partition, pairs)


def _points_of_partition(partition, points, mappings):
    return tuple(
        p
        for p, m in zip(points, mappings)
        if all(len({m[x] for x in block}) == 1 for block in partition.blocks)
    )


def is_closed(obj, free: FreeAlgebra, target: FiniteAlgebra) -> bool:
    """True iff the equation set (or congruence) equals its own closure."""
    if isinstance(obj, ClosedCongruence):
        obj = obj.partition
    if isinstance(obj, Congruence):
        pairs = obj.pair_set()
    else:
        pairs = frozenset(normalize_equations(obj))
    closed = closure(pairs, free, target)
    return pairs == closed.partition.pair_set()


def closed_lattice(
    free: FreeAlgebra, target: FiniteAlgebra, cap: int = DEFAULT_POINT_CAP
) -> "ClosedLattice":
    """All intersections of point kernels (plus the empty intersection),
    computed by iterating pairwise meets to a fixed point; identical to
    enumerating every point subset but polynomial in the output size."""
    points, mappings = _point_mappings(free, target, cap=cap)
    partitions = [Congruence.full(free.size)]
    seen = set(partitions)
    for m in mappings:
        c = Congruence.from_labels(m)
        if c not in seen:
            seen.add(c)
            partitions.append(c)
    frontier = list(partitions)
    while frontier:
        fresh = []
        for a in frontier:
            for b in partitions:
                c = a.meet(b)
                if c not in seen:
                    seen.add(c)
                    fresh.append(c)
        partitions.extend(fresh)
        frontier = fresh
    congs = [
        ClosedCongruence(_points_of_partition(p, points, mappings), p)
        for p in partitions
    ]
    congs.sort(key=lambda c: (-c.partition.num_blocks(), c.partition.blocks))
    return ClosedLattice(free, target, tuple(congs))


def id_congruence(free: FreeAlgebra, target: FiniteAlgebra) -> ClosedCongruence:
    """The least closed congruence: intersection of all point kernels."""
    points, mappings = _point_mappings(free, target)
    labels = [tuple(m[b] for m in mappings) for b in range(free.size)]
    partition = Congruence.from_labels(labels)
    return ClosedCongruence(
        _points_of_partition(partition, points, mappings), partition
    )


class ClosedLattice:
    """The lattice of closed congruences on one free algebra, ordered by
    refinement (finer first in the element list)."""

    def __init__(self, free, target, congruences):
        self.free = free
        self.target = target
        self.congruences = congruences
        self._by_partition = {c.partition: i for i, c in enumerate(congruences)}

    def __len__(self):
        return len(self.congruences)

    def __iter__(self):
        return iter(self.congruences)

    def __getitem__(self, i):
        return self.congruences[i]

    def index_of(self, partition) -> int:
        if isinstance(partition, ClosedCongruence):
            partition = partition.partition
        try:
            return self._by_partition[partition]
        except KeyError:
            raise AlgebraError("partition is not a closed congruence here") from None

    def leq(self, i: int, j: int) -> bool:
        """i <= j iff congruence i refines (is contained in) congruence j."""
        return self.congruences[i].partition.refines(self.congruences[j].partition)

    def bottom_index(self) -> int:
        return next(
            i for i in range(len(self.congruences))
            if all(self.leq(i, j) for j in range(len(self.congruences)))
        )

    def top_index(self) -> int:
        return self.index_of(Congruence.full(self.free.size))

    def meet_index(self, i: int, j: int) -> int:
        return self.index_of(
            self.congruences[i].partition.meet(self.congruences[j].partition)
        )

    def join_index(self, i: int, j: int) -> int:
        pairs = self.congruences[i].partition.pair_set() | self.congruences[
            j
        ].partition.pair_set()
        return self.index_of(closure(pairs, self.free, self.target).partition)

    def hasse_edges(self):
        """Covering pairs (i, j): i strictly below j with nothing between."""
        n = len(self.congruences)
        edges = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.leq(i, j) or self.leq(j, i):
                    continue
                if any(
                    k not in (i, j)
                    and self.leq(i, k)
                    and self.leq(k, j)
                    and not self.leq(k, i)
                    and not self.leq(j, k)
                    for k in range(n)
                ):
                    continue
                edges.append((i, j))
        return edges


# ---------------------------------------------------------------------------
# emission


def partition_encoding(partition: Congruence) -> str:
    """Canonical string encoding of a partition by element indices."""
    return "|".join(" ".join(str(x) for x in block) for block in partition.blocks)


def _block_witnesses(free: FreeAlgebra, partition: Congruence):
    return [
        [format_term(free.witnesses[x]) for x in block] for block in partition.blocks
    ]


def lattice_json(lat: ClosedLattice) -> dict:
    return {
        "rank": lat.free.nvars,
        "free_size": lat.free.size,
        "algebra": lat.target.name,
        "variety": lat.free.variety.fingerprint(),
        "congruences": [
            {
                "blocks": _block_witnesses(lat.free, c.partition),
                "encoding": partition_encoding(c.partition),
                "points": [list(p) for p in c.points],
            }
            for c in lat.congruences
        ],
        "hasse": [list(e) for e in lat.hasse_edges()],
    }


def lattice_dot(lat: ClosedLattice) -> str:
    """Hasse diagram in DOT, finer congruences at the bottom."""
    lines = ["digraph closed_congruences {", "  rankdir=BT;", "  node [shape=box];"]
    for i, c in enumerate(lat.congruences):
        label = " | ".join(
            " ".join(format_term(lat.free.witnesses[x]) for x in block)
            for block in c.partition.blocks
        )
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in lat.hasse_edges():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
