"""Finite algebras as total operation tables over carrier {0..n-1}.

Evaluation of terms (verbal operations), homomorphism checking and
enumeration, products, subalgebra generation, congruences with a
canonical block form, quotients, and identity satisfaction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import AlgebraError, TermError
from .terms import App, Signature, Term, Var, term_vars

__all__ = [
    "FiniteAlgebra",
    "Homomorphism",
    "Congruence",
    "eval_term",
    "is_homomorphism",
    "hom_set",
    "product_algebra",
    "product_projections",
    "generate_subalgebra",
    "quotient_algebra",
    "kernel",
    "satisfies_identity",
]


def _check_table(name, table, arity, size):
    if arity == 0:
        if not isinstance(table, int):
            raise AlgebraError(f"constant {name!r} must be a single element")
        if not 0 <= table < size:
            raise AlgebraError(f"constant {name!r} out of carrier range")
        return table
    if not isinstance(table, (list, tuple)) or len(table) != size:
        raise AlgebraError(f"table for {name!r} must have {size} rows per dimension")
    return tuple(_check_table(name, row, arity - 1, size) for row in table)


class FiniteAlgebra:
    """Carrier {0..size-1} with one total operation table per symbol.

    Tables are nested tuples, index order = argument order; constants are
    plain integers.  Equality compares signature, size, and tables; the
    name is cosmetic.
    """

    def __init__(self, name: str, signature: Signature, size: int, tables: dict):
        if size <= 0:
            raise AlgebraError("carrier must be nonempty")
        missing = [n for n, _ in signature.symbols if n not in tables]
        if missing:
            raise AlgebraError(f"missing tables for {missing}")
        extra = [n for n in tables if n not in signature]
        if extra:
            raise AlgebraError(f"tables for symbols not in signature: {extra}")
        self.name = name
        self.signature = signature
        self.size = size
        self.tables = {
            n: _check_table(n, tables[n], a, size) for n, a in signature.symbols
        }

    def apply(self, symbol: str, args) -> int:
        t = self.tables[symbol]
        for a in args:
            t = t[a]
        return t

    def table(self, symbol: str):
        return self.tables[symbol]

    def carrier(self):
        return range(self.size)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteAlgebra)
            and self.signature == other.signature
            and self.size == other.size
            and self.tables == other.tables
        )

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, size={self.size})"


@dataclass(frozen=True)
class Homomorphism:
    """A map between the carriers of two algebras of the same signature."""

    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def __repr__(self):
        return f"Homomorphism({self.source.name}->{self.target.name}, {list(self.mapping)})"


class Congruence:
    """Partition of a carrier, canonical form: each block sorted, blocks
    sorted by least element.  Equality is syntactic equality of blocks."""

    def __init__(self, size: int, blocks):
        blocks = tuple(sorted((tuple(sorted(set(b))) for b in blocks), key=lambda b: b[0]))
        covered = [x for b in blocks for x in b]
        if sorted(covered) != list(range(size)) or len(covered) != size:
            raise AlgebraError("blocks do not partition the carrier")
        self.size = size
        self.blocks = blocks
        class_of = [0] * size
        for i, b in enumerate(blocks):
            for x in b:
                class_of[x] = i
        self.class_of = tuple(class_of)

    @classmethod
    def from_labels(cls, labels):
        groups = {}
        for x, lab in enumerate(labels):
            groups.setdefault(lab, []).append(x)
        return cls(len(labels), groups.values())

    @classmethod
    def diagonal(cls, size):
        return cls(size, [[x] for x in range(size)])

    @classmethod
    def full(cls, size):
        return cls(size, [range(size)])

    def related(self, a: int, b: int) -> bool:
        return self.class_of[a] == self.class_of[b]

    def num_blocks(self) -> int:
        return len(self.blocks)

    def meet(self, other: "Congruence") -> "Congruence":
        if self.size != other.size:
            raise AlgebraError("size mismatch")
        labels = list(zip(self.class_of, other.class_of))
        return Congruence.from_labels(labels)

    def refines(self, other: "Congruence") -> bool:
        """True iff self is finer or equal: a ~self b implies a ~other b."""
        return all(
            len({other.class_of[x] for x in block}) == 1 for block in self.blocks
        )

    def pair_set(self) -> frozenset:
        """All related pairs, normalized least-first (diagonal included)."""
        out = set()
        for block in self.blocks:
            for a in block:
                for b in block:
                    if a <= b:
                        out.add((a, b))
        return frozenset(out)

    def is_congruence_of(self, algebra: FiniteAlgebra) -> bool:
        """Compatibility with every operation table.

        It suffices to perturb one argument position at a time: the general
        case follows by a chain of single-coordinate replacements and
        transitivity.
        """
        if algebra.size != self.size:
            raise AlgebraError("size mismatch")
        n = self.size
        for name, arity in algebra.signature.symbols:
            if arity == 0:
                continue
            for args in itertools.product(range(n), repeat=arity):
                base = algebra.apply(name, args)
                for pos in range(arity):
                    for alt in self.blocks[self.class_of[args[pos]]]:
                        if alt == args[pos]:
                            continue
                        changed = args[:pos] + (alt,) + args[pos + 1 :]
                        if not self.related(base, algebra.apply(name, changed)):
                            return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, Congruence)
            and self.size == other.size
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.size, self.blocks))

    def __repr__(self):
        return "Congruence(" + "|".join(" ".join(map(str, b)) for b in self.blocks) + ")"


# ---------------------------------------------------------------------------
# term evaluation and homomorphisms


def eval_term(algebra: FiniteAlgebra, t: Term, asg) -> int:
    """Value of the term function at the assignment (asg[i-1] is the value
    of xi); equals the image of t under the extension homomorphism."""
    if isinstance(t, Var):
        if t.index > len(asg):
            raise TermError(f"unmapped variable x{t.index}")
        return asg[t.index - 1]
    return algebra.apply(t.symbol, tuple(eval_term(algebra, a, asg) for a in t.args))


def is_homomorphism(source: FiniteAlgebra, target: FiniteAlgebra, mapping) -> bool:
    """Exhaustive compatibility check of a total map."""
    if source.signature != target.signature:
        raise AlgebraError("signature mismatch")
    if len(mapping) != source.size:
        raise AlgebraError("map length does not match source carrier")
    for name, arity in source.signature.symbols:
        if arity == 0:
            if mapping[source.apply(name, ())] != target.apply(name, ()):
                return False
            continue
        for args in itertools.product(range(source.size), repeat=arity):
            image = tuple(mapping[a] for a in args)
            if mapping[source.apply(name, args)] != target.apply(name, image):
                return False
    return True


def hom_set(source: FiniteAlgebra, target: FiniteAlgebra):
    """All homomorphisms source -> target, in lexicographic map order.

    Backtracking over map positions with early pruning: an operation
    instance is checked as soon as every element it involves is assigned.
    """
    if source.signature != target.signature:
        raise AlgebraError("signature mismatch")
    n, m = source.size, target.size
    by_last = [[] for _ in range(n)]
    for name, arity in source.signature.symbols:
        for args in itertools.product(range(n), repeat=arity):
            res = source.apply(name, args)
            last = max(args + (res,)) if args else res
            by_last[last].append((name, args, res))

    out = []
    mapping = [0] * n

    def consistent(i):
        for name, args, res in by_last[i]:
            image = tuple(mapping[a] for a in args)
            if mapping[res] != target.apply(name, image):
                return False
        return True

    def rec(i):
        if i == n:
            out.append(Homomorphism(source, target, tuple(mapping)))
            return
        for v in range(m):
            mapping[i] = v
            if consistent(i):
                rec(i + 1)

    rec(0)
    return out


def kernel(h: Homomorphism) -> Congruence:
    """Partition of the source by equal image."""
    return Congruence.from_labels(h.mapping)


# ---------------------------------------------------------------------------
# constructions


def _nested(size, arity, fn, prefix=()):
    if arity == 0:
        return fn(prefix)
    return tuple(_nested(size, arity - 1, fn, prefix + (a,)) for a in range(size))


def product_algebra(factors) -> FiniteAlgebra:
    """Componentwise product; carrier indexed by mixed-radix tuples in
    itertools.product order (first factor most significant)."""
    factors = list(factors)
    if not factors:
        raise AlgebraError("empty product")
    sig = factors[0].signature
    for f in factors[1:]:
        if f.signature != sig:
            raise AlgebraError("signature mismatch in product")
    sizes = [f.size for f in factors]
    tuples = list(itertools.product(*[range(s) for s in sizes]))
    index = {t: i for i, t in enumerate(tuples)}

    def component_apply(name, argtuples):
        return index[
            tuple(
                f.apply(name, tuple(arg[c] for arg in argtuples))
                for c, f in enumerate(factors)
            )
        ]

    size = len(tuples)
    tables = {}
    for name, arity in sig.symbols:
        tables[name] = _nested(
            size, arity, lambda args, name=name: component_apply(name, [tuples[a] for a in args])
        )
    name = "x".join(f.name for f in factors)
    return FiniteAlgebra(name, sig, size, tables)


def product_projections(factors):
    """The coordinate projections of product_algebra(factors)."""
    factors = list(factors)
    prod = product_algebra(factors)
    sizes = [f.size for f in factors]
    tuples = list(itertools.product(*[range(s) for s in sizes]))
    return [
        Homomorphism(prod, f, tuple(t[i] for t in tuples))
        for i, f in enumerate(factors)
    ]


def closure_from_seeds(signature: Signature, apply_op, seeds, cap=None):
    """Deterministic closure under all operations, with witness terms.

    Breadth-first by witness depth; inside one round, symbols are taken in
    signature order and argument tuples lexicographically by element
    discovery index, so the first production of each element is its
    minimal-depth, enumeration-least witness.  Seeds stand for variables
    x1..xk (first occurrence wins on duplicates); constants join round 0
    after the seeds.  Returns (elements, witnesses, index).
    """
    from .errors import CapExceeded

    elements, witnesses, index = [], [], {}
    for j, s in enumerate(seeds):
        if s not in index:
            index[s] = len(elements)
            elements.append(s)
            witnesses.append(Var(j + 1))
    for name, arity in signature.symbols:
        if arity == 0:
            v = apply_op(name, ())
            if v not in index:
                index[v] = len(elements)
                elements.append(v)
                witnesses.append(App(name, ()))
    if not elements:
        raise AlgebraError("empty seed set with a constant-free signature")

    frontier_start = 0
    while True:
        known = len(elements)
        if frontier_start == known:
            break
        for name, arity in signature.symbols:
            if arity == 0:
                continue
            for combo in _tuples_with_fresh(known, frontier_start, arity):
                v = apply_op(name, tuple(elements[i] for i in combo))
                if v not in index:
                    if cap is not None and len(elements) >= cap:
                        raise CapExceeded(
                            f"closure exceeded cap of {cap} elements",
                            partial_size=len(elements),
                        )
                    index[v] = len(elements)
                    elements.append(v)
                    witnesses.append(App(name, tuple(witnesses[i] for i in combo)))
        frontier_start = known
    return elements, witnesses, index


def _tuples_with_fresh(n, fresh_start, arity):
    """Lexicographic tuples over range(n) containing at least one index
    >= fresh_start (all-stale tuples were handled in an earlier round)."""
    if arity == 1:
        for i in range(fresh_start, n):
            yield (i,)
        return
    if arity == 2:
        for i in range(n):
            start = 0 if i >= fresh_start else fresh_start
            for j in range(start, n):
                yield (i, j)
        return
    combo = [0] * arity

    def rec(pos, has_fresh):
        if pos == arity - 1:
            start = 0 if has_fresh else fresh_start
            for i in range(start, n):
                combo[pos] = i
                yield tuple(combo)
            return
        for i in range(n):
            combo[pos] = i
            yield from rec(pos + 1, has_fresh or i >= fresh_start)

    yield from rec(0, False)


def generate_subalgebra(algebra: FiniteAlgebra, seeds, cap=None):
    """Least subuniverse containing the seeds, with a minimal-depth witness
    term over seed variables x1..xk for every element.

    Returns (elements, witnesses) in discovery order.
    """
    for s in seeds:
        if not 0 <= s < algebra.size:
            raise AlgebraError(f"seed {s} outside carrier")
    elements, witnesses, _ = closure_from_seeds(
        algebra.signature, algebra.apply, list(seeds), cap=cap
    )
    return elements, witnesses


def quotient_algebra(algebra: FiniteAlgebra, cong: Congruence):
    """Quotient by a congruence: carrier = blocks in canonical order.

    Returns (quotient, projection).  Raises if the partition is not
    compatible with the tables.
    """
    if not cong.is_congruence_of(algebra):
        raise AlgebraError("partition is not compatible with the operation tables")
    reps = [b[0] for b in cong.blocks]
    size = len(reps)

    def block_apply(name, args):
        return cong.class_of[algebra.apply(name, tuple(reps[a] for a in args))]

    tables = {
        name: _nested(size, arity, lambda args, name=name: block_apply(name, args))
        for name, arity in algebra.signature.symbols
    }
    quot = FiniteAlgebra(f"{algebra.name}/~", algebra.signature, size, tables)
    proj = Homomorphism(algebra, quot, cong.class_of)
    return quot, proj


def satisfies_identity(algebra: FiniteAlgebra, lhs: Term, rhs: Term, nvars=None) -> bool:
    """True iff both sides evaluate equally under every assignment."""
    if nvars is None:
        nvars = max(term_vars(lhs) | term_vars(rhs) | {0})
    for asg in itertools.product(range(algebra.size), repeat=nvars):
        if eval_term(algebra, lhs, asg) != eval_term(algebra, rhs, asg):
            return False
    return True
