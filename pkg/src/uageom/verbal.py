"""Word systems, bijection systems, and star algebras.

A word system assigns to every operation symbol of arity k a word over
x1..xk; it induces on every algebra H of the variety a star algebra H*
with the same carrier whose operations are the corresponding verbal
operations.  A word system is admissible when every free algebra W(X) is
isomorphic to its own star algebra by a generator-fixing isomorphism
sigma; the dual notion is a system of generator-fixing bijections of the
free algebras that conjugates homomorphisms to homomorphisms.  The two
notions translate into each other and the round trips are checked
mechanically here.

Admissibility is verified up to a finite rank bound and every verdict is
labeled with it: free-algebra ranks beyond the bound are not examined.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebras import (
    FiniteAlgebra,
    Homomorphism,
    _nested,
    eval_term,
    is_homomorphism,
)
from .errors import AlgebraError, WordSystemError
from .free import DEFAULT_CAP, VarietySpec
from .terms import (
    App,
    Signature,
    Term,
    Var,
    enumerate_terms,
    format_term,
    replace_symbols,
    term_vars,
)

__all__ = [
    "WordSystem",
    "BijectionSystem",
    "Op2Result",
    "identity_system",
    "check_op1",
    "star_algebra",
    "derived_operation",
    "check_op2",
    "bijections_from_words",
    "words_from_bijections",
    "check_b1_b2",
    "strongly_stable_action",
    "verify_zhito",
    "inverse_word_system",
    "word_class_vector",
    "systems_semantically_equal",
    "enumerate_word_systems",
    "scope_ranks",
]


class WordSystem:
    """One term per operation symbol.  Structural equality; use
    :func:`systems_semantically_equal` for equality as variety elements."""

    def __init__(self, signature: Signature, words):
        words = dict(words)
        missing = [n for n, _ in signature.symbols if n not in words]
        if missing:
            raise WordSystemError(f"missing words for {missing}")
        extra = [n for n in words if n not in signature]
        if extra:
            raise WordSystemError(f"words for symbols not in signature: {extra}")
        self.signature = signature
        self.words = {n: words[n] for n, _ in signature.symbols}

    def word(self, name: str) -> Term:
        return self.words[name]

    def items(self):
        return self.words.items()

    def __eq__(self, other):
        return (
            isinstance(other, WordSystem)
            and self.signature == other.signature
            and self.words == other.words
        )

    def __hash__(self):
        return hash((self.signature, tuple(self.words.items())))

    def __repr__(self):
        inner = ", ".join(f"{n}: {format_term(w)}" for n, w in self.words.items())
        return f"WordSystem({inner})"


def identity_system(signature: Signature) -> WordSystem:
    """w_omega = omega(x1..xk) for every symbol."""
    return WordSystem(
        signature,
        {
            name: App(name, tuple(Var(i + 1) for i in range(arity)))
            for name, arity in signature.symbols
        },
    )


def check_op1(ws: WordSystem) -> bool:
    """Each word may only use the variables matching its symbol's arity."""
    return not op1_violations(ws)


def op1_violations(ws: WordSystem):
    out = []
    for name, arity in ws.signature.symbols:
        if any(i > arity for i in term_vars(ws.word(name))):
            out.append(name)
    return out


def star_algebra(algebra: FiniteAlgebra, ws: WordSystem) -> FiniteAlgebra:
    """Same carrier, operations replaced by the system's verbal operations
    (tables computed by exhaustive evaluation)."""
    bad = op1_violations(ws)
    if bad:
        raise WordSystemError(f"word system violates the arity condition at {bad}")
    n = algebra.size
    tables = {}
    for name, arity in algebra.signature.symbols:
        w = ws.word(name)
        tables[name] = _nested(n, arity, lambda args, w=w: eval_term(algebra, w, args))
    return FiniteAlgebra(f"{algebra.name}*", algebra.signature, n, tables)


def derived_operation(algebra: FiniteAlgebra, bijection, symbol: str):
    """Table of the operation conjugated by a carrier bijection:
    the image of the operation under s, i.e. s(op(s^-1(args)))."""
    n = algebra.size
    bijection = tuple(bijection)
    if sorted(bijection) != list(range(n)):
        raise AlgebraError("conjugating map is not a bijection of the carrier")
    inverse = [0] * n
    for x, y in enumerate(bijection):
        inverse[y] = x
    arity = algebra.signature.arity(symbol)
    return _nested(
        n,
        arity,
        lambda args: bijection[algebra.apply(symbol, tuple(inverse[a] for a in args))],
    )


# ---------------------------------------------------------------------------
# admissibility: Op2 and the generator-fixing isomorphisms


def scope_ranks(variety: VarietySpec, n_max: int):
    """Free-algebra ranks covered by a bound: 0..n_max when the signature
    has constants (rank 0 is constructible), else 1..n_max."""
    lo = 0 if variety.signature.constants() else 1
    return list(range(lo, n_max + 1))


def default_n_max(signature: Signature) -> int:
    return max(2, signature.max_arity())


@dataclass
class Op2Result:
    """Outcome of the bounded admissibility check.

    On success, sigmas[k] is the generator-fixing isomorphism from W(k) to
    its star algebra, as an element permutation.  On failure the smallest
    failing rank and the stage are reported: "membership" when the star of
    the free algebra falls outside the variety, else the bijectivity
    stage.
    """

    ok: bool
    n_max: int
    ranks: tuple
    sigmas: dict = field(default_factory=dict)
    failed_rank: int = None
    stage: str = None
    witness: str = None


def check_op2(
    ws: WordSystem, variety: VarietySpec, n_max: int = None, cap: int = DEFAULT_CAP
) -> Op2Result:
    """For every rank within the bound: star the free algebra, test variety
    membership, and extend the identity on generators to the star algebra.

    Membership failures are detected two ways: the fast identity-refutation
    pass, and the extension map failing to be a homomorphism (by freeness
    the extension of a generator-fixing map into a variety member is always
    a homomorphism, so a violation certifies the star algebra lies outside
    the variety).  Conversely a bijective homomorphic extension makes the
    star algebra isomorphic to the free algebra itself, which settles
    membership positively without any further search.
    """
    if not check_op1(ws):
        raise WordSystemError(
            f"word system violates the arity condition at {op1_violations(ws)}"
        )
    if n_max is None:
        n_max = default_n_max(ws.signature)
    ranks = tuple(scope_ranks(variety, n_max))
    result = Op2Result(ok=True, n_max=n_max, ranks=ranks)
    for k in ranks:
        free = variety.free(k, cap)
        star = star_algebra(free.algebra, ws)
        # fast-fail shortcut; on large carriers the quadratic assignment
        # sweep costs more than the decisive extension check below
        if star.size <= 64:
            refuted = variety.refute_membership(star)
            if refuted is not None:
                lhs, rhs = refuted
                result.ok = False
                result.failed_rank = k
                result.stage = "membership"
                result.witness = (
                    f"star of W({k}) fails the identity "
                    f"{format_term(lhs)} = {format_term(rhs)}"
                )
                return result
        gens = tuple(free.generator_indices)
        sigma = tuple(eval_term(star, w, gens) for w in free.witnesses)
        if not is_homomorphism(free.algebra, star, sigma):
            result.ok = False
            result.failed_rank = k
            result.stage = "membership"
            result.witness = (
                f"the generator-fixing extension into the star of W({k}) is not a "
                "homomorphism, so the star algebra lies outside the variety"
            )
            return result
        if len(set(sigma)) != free.size:
            result.ok = False
            result.failed_rank = k
            result.stage = "not-injective"
            result.witness = f"extension into the star of W({k}) identifies elements"
            return result
        if set(sigma) != set(range(free.size)):
            result.ok = False
            result.failed_rank = k
            result.stage = "not-surjective"
            result.witness = f"extension into the star of W({k}) misses elements"
            return result
        result.sigmas[k] = sigma
    return result


@dataclass
class BijectionSystem:
    """Generator-fixing bijections of the free algebras up to a rank bound,
    stored as element permutations."""

    variety: VarietySpec
    n_max: int
    maps: dict

    @classmethod
    def identity(cls, variety: VarietySpec, n_max: int) -> "BijectionSystem":
        maps = {
            k: tuple(range(variety.free(k).size))
            for k in scope_ranks(variety, n_max)
        }
        return cls(variety, n_max, maps)

    def ranks(self):
        return sorted(self.maps)

    def __eq__(self, other):
        return (
            isinstance(other, BijectionSystem)
            and self.variety is other.variety
            and self.maps == other.maps
        )


def bijections_from_words(
    ws: WordSystem, variety: VarietySpec, n_max: int = None, cap: int = DEFAULT_CAP
) -> BijectionSystem:
    """The dual of a word system: the generator-fixing isomorphisms from
    each free algebra to its star algebra, one per rank within the bound."""
    res = check_op2(ws, variety, n_max, cap)
    if not res.ok:
        raise WordSystemError(
            f"word system is not admissible: rank {res.failed_rank}, "
            f"stage {res.stage}: {res.witness}"
        )
    return BijectionSystem(variety, res.n_max, dict(res.sigmas))


def words_from_bijections(system: BijectionSystem) -> WordSystem:
    """The dual of a bijection system: for each symbol, apply the bijection
    of the arity-rank free algebra to the element named by the plain
    application and read off its witness word."""
    v = system.variety
    words = {}
    for name, arity in v.signature.symbols:
        if arity not in system.maps:
            raise WordSystemError(
                f"bijection system bound {system.n_max} does not cover "
                f"arity {arity} of symbol {name!r}"
            )
        free = v.free(arity)
        elt = free.term_index(App(name, tuple(Var(i + 1) for i in range(arity))))
        words[name] = free.witnesses[system.maps[arity][elt]]
    return WordSystem(v.signature, words)


def _free_hom_maps(source_free, target_free):
    """All homomorphisms between two free algebras, via freeness: one per
    generator-image tuple, in lexicographic image order."""
    t_alg = target_free.algebra
    out = []
    for images in itertools.product(
        range(target_free.size), repeat=source_free.nvars
    ):
        out.append(
            tuple(eval_term(t_alg, w, images) for w in source_free.witnesses)
        )
    return out


def check_b1_b2(system: BijectionSystem):
    """Exhaustively verify the two bijection-system conditions within the
    bound.  Returns (ok, counterexample description or None)."""
    v = system.variety
    ranks = system.ranks()
    for k in ranks:
        free = v.free(k)
        mp = system.maps[k]
        if sorted(mp) != list(range(free.size)):
            return False, f"map at rank {k} is not a bijection"
        for g in free.generator_indices:
            if mp[g] != g:
                return False, (
                    f"generator {format_term(free.witnesses[g])} moved at rank {k}"
                )
    for ka in ranks:
        for kb in ranks:
            fa, fb = v.free(ka), v.free(kb)
            sa, sb = system.maps[ka], system.maps[kb]
            sa_inv = [0] * fa.size
            for x, y in enumerate(sa):
                sa_inv[y] = x
            sb_inv = [0] * fb.size
            for x, y in enumerate(sb):
                sb_inv[y] = x
            for alpha in _free_hom_maps(fa, fb):
                fwd = tuple(sb[alpha[sa_inv[x]]] for x in range(fa.size))
                bwd = tuple(sb_inv[alpha[sa[x]]] for x in range(fa.size))
                if not is_homomorphism(fa.algebra, fb.algebra, fwd):
                    return False, (
                        f"conjugate of a homomorphism W({ka})->W({kb}) is not a "
                        "homomorphism"
                    )
                if not is_homomorphism(fa.algebra, fb.algebra, bwd):
                    return False, (
                        f"inverse conjugate of a homomorphism W({ka})->W({kb}) is "
                        "not a homomorphism"
                    )
    return True, None


def _rank_of(system: BijectionSystem, algebra: FiniteAlgebra):
    for k in system.ranks():
        if system.variety.free(k).algebra is algebra:
            return k
    raise WordSystemError(
        f"{algebra.name} is not a free algebra within the system's bound"
    )


def strongly_stable_action(system: BijectionSystem, h: Homomorphism) -> Homomorphism:
    """Action on a homomorphism between in-scope free algebras: conjugate
    by the system's bijections (target map after, inverse source map
    before)."""
    ka = _rank_of(system, h.source)
    kb = _rank_of(system, h.target)
    sa, sb = system.maps[ka], system.maps[kb]
    sa_inv = [0] * len(sa)
    for x, y in enumerate(sa):
        sa_inv[y] = x
    mapping = tuple(sb[h.mapping[sa_inv[x]]] for x in range(len(sa)))
    return Homomorphism(h.source, h.target, mapping)


def verify_zhito(
    ws: WordSystem, variety: VarietySpec, n_max: int = None, cap: int = DEFAULT_CAP
):
    """Check that on every in-scope free algebra the verbal tables induced
    by the words coincide with the tables derived by conjugating with the
    generator-fixing isomorphisms.  Returns (ok, witness or None)."""
    res = check_op2(ws, variety, n_max, cap)
    if not res.ok:
        raise WordSystemError(f"admissibility fails: {res.witness}")
    for k in res.ranks:
        free = variety.free(k, cap)
        star = star_algebra(free.algebra, ws)
        sigma = res.sigmas[k]
        for name, _ in variety.signature.symbols:
            derived = derived_operation(free.algebra, sigma, name)
            if derived != star.tables[name]:
                return False, f"rank {k}, symbol {name!r}: verbal != derived"
    return True, None


def inverse_word_system(
    ws: WordSystem,
    variety: VarietySpec,
    n_max: int = None,
    search_depth: int = 6,
    search_budget: int = 50000,
    cap: int = DEFAULT_CAP,
) -> WordSystem:
    """The system expressing the original operations as verbal operations
    of the starred ones.

    For each symbol the defining condition is that the inverse word,
    expanded through the given system, is variety-equal to the plain
    application; expansion commutes with the generator-fixing isomorphism,
    so candidates can be tested by value-vector comparison directly and
    the smallest such word (enumeration order) is returned.  Applying the
    result to a star algebra recovers the original tables.
    """
    res = check_op2(ws, variety, n_max, cap)
    if not res.ok:
        raise WordSystemError(f"admissibility fails: {res.witness}")
    templates = dict(ws.words)
    words = {}
    for name, arity in variety.signature.symbols:
        target = word_class_vector(
            variety, App(name, tuple(Var(i + 1) for i in range(arity))), arity
        )
        found = None
        stream = enumerate_terms(variety.signature, arity, search_depth)
        for u in itertools.islice(stream, search_budget):
            expanded = replace_symbols(u, templates)
            if word_class_vector(variety, expanded, arity) == target:
                found = u
                break
        if found is None:
            raise WordSystemError(
                f"no inverse word for {name!r} within depth {search_depth} "
                f"and budget {search_budget}"
            )
        words[name] = found
    return WordSystem(variety.signature, words)


# ---------------------------------------------------------------------------
# semantic identity of words and enumeration of candidate systems


def word_class_vector(variety: VarietySpec, t: Term, nvars: int):
    """Value-vector of a term over all (generator, assignment) pairs; two
    words are equal as free-algebra elements iff their vectors agree."""
    return tuple(
        eval_term(g, t, asg)
        for g in variety.generators
        for asg in itertools.product(range(g.size), repeat=nvars)
    )


def systems_semantically_equal(
    a: WordSystem, b: WordSystem, variety: VarietySpec
) -> bool:
    """Equality as elements of the arity-rank free algebras (words are
    classes, so syntactic comparison would falsely fail)."""
    for name, arity in variety.signature.symbols:
        if word_class_vector(variety, a.word(name), arity) != word_class_vector(
            variety, b.word(name), arity
        ):
            return False
    return True


def enumerate_word_systems(variety: VarietySpec, depth_max: int):
    """All candidate word systems with words of bounded depth, one per
    semantic class (the enumeration-least representative), combined
    lexicographically over the symbols in signature order."""
    streams = []
    for name, arity in variety.signature.symbols:
        seen = set()
        stream = []
        for t in enumerate_terms(variety.signature, arity, depth_max):
            vec = word_class_vector(variety, t, arity)
            if vec not in seen:
                seen.add(vec)
                stream.append(t)
        streams.append(stream)
    names = [name for name, _ in variety.signature.symbols]
    for combo in itertools.product(*streams):
        yield WordSystem(variety.signature, dict(zip(names, combo)))
