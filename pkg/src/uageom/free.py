"""Finitely generated free algebras of a variety var(A1..Am).

The variety is always presented by finitely many finite generator
algebras, so every finitely generated free algebra is finite and can be
materialized: W(x1..xk) is the subalgebra of the product of all A_i^(k)
assignment powers generated by the coordinate-projection tuples.  An
element is identified with its full value-vector over the (generator,
assignment) pairs; two terms name the same element exactly when they
agree under every assignment into every generator, which realizes the
identity congruence of the variety without ever materializing it.

Every element carries a minimal-depth witness term (ties broken by
enumeration order), so certificates print stable words.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass

from .algebras import (
    FiniteAlgebra,
    Homomorphism,
    closure_from_seeds,
    eval_term,
    is_homomorphism,
)
from .errors import AlgebraError, TermError, VarietyError
from .terms import App, Term, Var, enumerate_terms, format_term, term_vars

__all__ = [
    "DEFAULT_CAP",
    "VarietySpec",
    "FreeAlgebra",
    "build_free",
    "term_image",
    "extend_hom",
    "free_rank_sizes",
    "RankSizes",
    "variety_membership",
]

DEFAULT_CAP = 20000


class VarietySpec:
    """Generators of a locally finite variety, plus optional declared
    identities (verification-only: generators are checked against them on
    load, and the identities play no role in any construction)."""

    def __init__(self, generators, identities=()):
        generators = tuple(generators)
        if not generators:
            raise AlgebraError("a variety needs at least one generator algebra")
        sig = generators[0].signature
        for g in generators[1:]:
            if g.signature != sig:
                raise AlgebraError("generator signatures differ")
        self.generators = generators
        self.signature = sig
        self.identities = tuple(identities)
        from .algebras import satisfies_identity

        for lhs, rhs in self.identities:
            for g in generators:
                if not satisfies_identity(g, lhs, rhs):
                    raise AlgebraError(
                        f"declared identity {format_term(lhs)} = {format_term(rhs)} "
                        f"fails in generator {g.name}"
                    )
        self._free_cache = {}
        self._idgroups_cache = {}

    # -- free algebras ------------------------------------------------

    def free(self, rank: int, cap: int = DEFAULT_CAP) -> "FreeAlgebra":
        """The free algebra W(x1..x_rank), cached per rank."""
        if rank not in self._free_cache:
            self._free_cache[rank] = build_free(self, rank, cap)
        return self._free_cache[rank]

    # -- identities of the generators ----------------------------------

    def identity_groups(self, nvars: int = 2, depth: int = 2):
        """Terms at the given bounds, grouped by their value-vector over
        all (generator, assignment) pairs.  Two terms in one group form an
        identity of the variety; only groups of size >= 2 are returned.

        The bounds are engine parameters for the fast refutation pass, not
        a complete axiomatization.
        """
        key = (nvars, depth)
        if key not in self._idgroups_cache:
            groups = {}
            for t in enumerate_terms(self.signature, nvars, depth):
                vec = tuple(
                    eval_term(g, t, asg)
                    for g in self.generators
                    for asg in itertools.product(range(g.size), repeat=nvars)
                )
                groups.setdefault(vec, []).append(t)
            self._idgroups_cache[key] = [grp for grp in groups.values() if len(grp) > 1]
        return self._idgroups_cache[key]

    def refute_membership(self, algebra: FiniteAlgebra, nvars: int = 2, depth: int = 2):
        """Fast negative membership test: the first identity of the
        generators (within bounds) failing in the algebra, or None."""
        if algebra.signature != self.signature:
            raise AlgebraError("signature mismatch")
        for group in self.identity_groups(nvars, depth):
            base = group[0]
            for other in group[1:]:
                for asg in itertools.product(range(algebra.size), repeat=nvars):
                    if eval_term(algebra, base, asg) != eval_term(algebra, other, asg):
                        return (base, other)
        return None

    def fingerprint(self) -> str:
        """Stable short digest of the signature and generator tables."""
        blob = json.dumps(
            {
                "signature": list(self.signature.symbols),
                "generators": [[g.size, g.tables] for g in self.generators],
            },
            sort_keys=True,
            default=list,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def __repr__(self):
        names = ",".join(g.name for g in self.generators)
        return f"VarietySpec(var({names}))"


class FreeAlgebra:
    """The free algebra W(x1..xk) of a variety, as closed value-vectors.

    elements[i] is the value-vector of element i over the coordinate list
    ``coords`` (pairs (generator index, assignment tuple), generators in
    order, assignments in lexicographic order); witnesses[i] is its
    canonical witness term; generator_indices[j] is the element
    representing x_{j+1}.
    """

    def __init__(self, variety, nvars, elements, witnesses, index, coords):
        self.variety = variety
        self.nvars = nvars
        self.elements = elements
        self.witnesses = witnesses
        self.index = index
        self.coords = coords
        gen_vectors = [
            tuple(asg[j] for (_, asg) in coords) for j in range(nvars)
        ]
        self.generator_indices = tuple(index[v] for v in gen_vectors)
        self._coord_tables = {
            name: tuple(variety.generators[g].tables[name] for (g, _) in coords)
            for name, _ in variety.signature.symbols
        }
        self._algebra = None
        self._point_cache = {}

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def signature(self):
        return self.variety.signature

    def vector_apply(self, symbol, vectors):
        """Apply one operation componentwise to value-vectors."""
        tabs = self._coord_tables[symbol]
        if not vectors:
            return tabs
        out = []
        for c, t in enumerate(tabs):
            for v in vectors:
                t = t[v[c]]
            out.append(t)
        return tuple(out)

    def term_vector(self, t: Term):
        if isinstance(t, Var):
            if t.index > self.nvars:
                raise TermError(f"variable x{t.index} outside rank {self.nvars}")
            return self.elements[self.generator_indices[t.index - 1]]
        return self.vector_apply(t.symbol, [self.term_vector(a) for a in t.args])

    def term_index(self, t: Term) -> int:
        """Element named by a term (closure guarantees membership)."""
        return self.index[self.term_vector(t)]

    @property
    def algebra(self) -> FiniteAlgebra:
        """The same algebra with carrier {0..size-1}; built lazily."""
        if self._algebra is None:
            from .algebras import _nested

            n = self.size
            tables = {}
            for name, arity in self.signature.symbols:
                tables[name] = _nested(
                    n,
                    arity,
                    lambda args, name=name: self.index[
                        self.vector_apply(name, [self.elements[a] for a in args])
                    ],
                )
            self._algebra = FiniteAlgebra(
                f"W{self.nvars}", self.signature, n, tables
            )
        return self._algebra

    def __repr__(self):
        return f"FreeAlgebra(rank={self.nvars}, size={self.size})"


def build_free(variety: VarietySpec, rank: int, cap: int = DEFAULT_CAP) -> FreeAlgebra:
    """Construct W(x1..x_rank) by closing the coordinate-projection
    vectors under all componentwise operations."""
    if rank < 0:
        raise AlgebraError("rank must be >= 0")
    from .errors import CapExceeded

    width = sum(g.size**rank for g in variety.generators)
    if width > cap:
        raise CapExceeded(
            f"free algebra on {rank} generators projects onto {width} "
            f"coordinates, exceeding the cap of {cap}",
            partial_size=0,
        )
    coords = []
    for g_index, g in enumerate(variety.generators):
        for asg in itertools.product(range(g.size), repeat=rank):
            coords.append((g_index, asg))
    coord_tables = {
        name: [variety.generators[g].tables[name] for (g, _) in coords]
        for name, _ in variety.signature.symbols
    }

    def apply_op(name, vectors):
        tabs = coord_tables[name]
        if not vectors:
            return tuple(tabs)
        out = []
        for c, t in enumerate(tabs):
            for v in vectors:
                t = t[v[c]]
            out.append(t)
        return tuple(out)

    seeds = [tuple(asg[j] for (_, asg) in coords) for j in range(rank)]
    elements, witnesses, index = closure_from_seeds(
        variety.signature, apply_op, seeds, cap=cap
    )
    return FreeAlgebra(variety, rank, elements, witnesses, index, coords)


def term_image(free: FreeAlgebra, t: Term) -> int:
    """The element of the free algebra named by a term: the quotient map
    from raw syntax, realized by componentwise evaluation."""
    return free.term_index(t)


def extend_hom(
    free: FreeAlgebra, target: FiniteAlgebra, images, check: bool = True
) -> Homomorphism:
    """The unique homomorphism sending x_{j+1} to images[j], computed by
    evaluating each element's witness term.

    When the target lies outside the variety the computed map need not be
    a homomorphism, so by default the result is verified exhaustively.
    """
    if len(images) != free.nvars:
        raise AlgebraError(f"expected {free.nvars} generator images")
    mapping = tuple(eval_term(target, w, tuple(images)) for w in free.witnesses)
    if check and not is_homomorphism(free.algebra, target, mapping):
        raise VarietyError(
            f"extension of {tuple(images)} is not a homomorphism: "
            f"target {target.name} lies outside the variety"
        )
    return Homomorphism(free.algebra, target, mapping)


@dataclass
class RankSizes:
    """Sizes |W(1)|..|W(up_to)| plus the ranks k with |W(k)| = |W(k+1)|,
    at which distinct-rank freeness is not witnessed by cardinality."""

    sizes: list
    equal_adjacent: list


def free_rank_sizes(variety: VarietySpec, up_to: int, cap: int = DEFAULT_CAP) -> RankSizes:
    sizes = [variety.free(k, cap).size for k in range(1, up_to + 1)]
    equal_adjacent = [
        k for k in range(1, up_to) if sizes[k - 1] == sizes[k]
    ]
    return RankSizes(sizes, equal_adjacent)


def variety_membership(
    algebra: FiniteAlgebra, variety, cap: int = DEFAULT_CAP
) -> bool:
    """Birkhoff-style decision: the algebra lies in var(generators) iff it
    is a homomorphic image of the free algebra on |algebra| generators.

    A fast refutation pass (identities of the generators at small bounds)
    runs first; the positive answer builds that free algebra and checks
    that the evaluation map sending the generators onto the whole carrier
    is a homomorphism.  May raise CapExceeded when the free algebra is
    larger than the cap.
    """
    if not isinstance(variety, VarietySpec):
        variety = VarietySpec(variety)
    if algebra.signature != variety.signature:
        raise AlgebraError("signature mismatch")
    if variety.refute_membership(algebra) is not None:
        return False
    free = variety.free(algebra.size, cap)
    images = tuple(range(algebra.size))
    mapping = tuple(eval_term(algebra, w, images) for w in free.witnesses)
    return is_homomorphism(free.algebra, algebra, mapping)
