"""Equivalence of algebras through their closed-congruence lattices.

Two algebras are geometrically equivalent (within a rank bound) when the
closed-congruence lattices on every in-scope free algebra coincide; they
are equivalent in the wider, automorphism-mediated sense exactly when the
first is geometrically equivalent to a star algebra of the second for
some admissible word system.  The search enumerates candidate systems in
a fixed deterministic order and emits machine-checkable certificates.

Every verdict carries its bounds: "equivalent" means no difference found
within them, except that a lattice-size mismatch at some rank is final
for the automorphic search (the generator-fixing isomorphisms transport
lattices bijectively, so no word system can repair a size difference).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebras import Congruence, FiniteAlgebra, is_homomorphism, quotient_algebra
from .errors import EngineError, VarietyError, WordSystemError
from .free import DEFAULT_CAP, FreeAlgebra, VarietySpec
from .geometry import (
    ClosedCongruence,
    closed_lattice,
    closure,
    id_congruence,
    is_closed,
    partition_encoding,
)
from .terms import format_term, replace_symbols
from .verbal import (
    WordSystem,
    check_op2,
    default_n_max,
    enumerate_word_systems,
    scope_ranks,
    star_algebra,
    _free_hom_maps,
)

__all__ = [
    "GeomResult",
    "ClosureBijection",
    "HHstarReport",
    "CorrespondenceReport",
    "EquivalenceCertificate",
    "FactsReport",
    "geom_equivalent",
    "transport_closed",
    "verify_H_Hstar",
    "verify_coordinate_correspondence",
    "auto_equivalent_search",
    "compose_word_systems",
    "verify_equivalence_facts",
]


def _require_in_variety(algebra, variety):
    witness = variety.refute_membership(algebra)
    if witness is not None:
        lhs, rhs = witness
        raise VarietyError(
            f"{algebra.name} lies outside the variety: identity "
            f"{format_term(lhs)} = {format_term(rhs)} fails"
        )


def lattice_fingerprints(lattice):
    """Sorted canonical partition encodings, the comparison key for
    lattice equality across different target algebras."""
    return sorted(partition_encoding(c.partition) for c in lattice)


@dataclass
class GeomResult:
    equivalent: bool
    n_max: int
    per_rank: dict
    witness: dict = None

    def verdict(self) -> str:
        return "geometric" if self.equivalent else "refuted-at-bounds"


def geom_equivalent(
    h1: FiniteAlgebra,
    h2: FiniteAlgebra,
    variety: VarietySpec,
    n_max: int = None,
    cap: int = DEFAULT_CAP,
) -> GeomResult:
    """Compare the closed-congruence lattices of the two algebras on every
    free algebra within the bound, as sets of partitions.

    On refutation the witness is the first congruence (in encoding order)
    closed for exactly one of the two algebras.
    """
    _require_in_variety(h1, variety)
    _require_in_variety(h2, variety)
    if n_max is None:
        n_max = default_n_max(variety.signature)
    per_rank = {}
    for k in scope_ranks(variety, n_max):
        free = variety.free(k, cap)
        lat1 = closed_lattice(free, h1, cap)
        lat2 = closed_lattice(free, h2, cap)
        fp1, fp2 = lattice_fingerprints(lat1), lattice_fingerprints(lat2)
        per_rank[k] = {
            "rank": k,
            "size_h1": len(fp1),
            "size_h2": len(fp2),
            "fingerprints": fp1 if fp1 == fp2 else None,
        }
        if fp1 != fp2:
            set1, set2 = set(fp1), set(fp2)
            cong, side = next(
                (c, side)
                for lat, other, side in ((lat1, set2, "H1"), (lat2, set1, "H2"))
                for c in lat
                if partition_encoding(c.partition) not in other
            )
            witness = {
                "rank": k,
                "encoding": partition_encoding(cong.partition),
                "closed_for": side,
                "blocks": [
                    [format_term(free.witnesses[x]) for x in b]
                    for b in cong.partition.blocks
                ],
            }
            return GeomResult(False, n_max, per_rank, witness)
    return GeomResult(True, n_max, per_rank)


def transport_closed(
    free: FreeAlgebra,
    sigma,
    closed: ClosedCongruence,
    h_source: FiniteAlgebra,
    h_target: FiniteAlgebra,
    direction: str = "forward",
) -> ClosedCongruence:
    """Transport a closed congruence through the generator-fixing
    isomorphism: forward pulls back along sigma (a ~ b iff sigma a ~ sigma
    b), backward along its inverse.  The result is verified closed for the
    target algebra; a verification failure is a fatal engine diagnostic,
    not a recoverable condition.
    """
    sigma = tuple(sigma)
    if direction == "forward":
        labels = [closed.partition.class_of[sigma[x]] for x in range(free.size)]
    elif direction == "backward":
        inverse = [0] * len(sigma)
        for x, y in enumerate(sigma):
            inverse[y] = x
        labels = [closed.partition.class_of[inverse[x]] for x in range(free.size)]
    else:
        raise EngineError(f"unknown direction {direction!r}")
    partition = Congruence.from_labels(labels)
    if not is_closed(partition, free, h_target):
        raise EngineError(
            "transported congruence is not closed for the target algebra; "
            "this falsifies a proved transport property and indicates an "
            "engine defect"
        )
    return closure(partition.pair_set(), free, h_target)


@dataclass
class ClosureBijection:
    """Index pairs matching the lattice of the plain algebra with the
    lattice of its star algebra at one rank."""

    rank: int
    pairs: tuple


@dataclass
class HHstarReport:
    ok: bool
    n_max: int
    bijections: list
    coordination_checked: int
    failures: list


def verify_H_Hstar(
    h: FiniteAlgebra,
    ws: WordSystem,
    variety: VarietySpec,
    n_max: int = None,
    cap: int = DEFAULT_CAP,
) -> HHstarReport:
    """Mechanical verification that an admissible word system makes an
    algebra and its star algebra equivalent.

    Per rank, the pullback along the generator-fixing isomorphism must be
    an order-preserving bijection between the two closed-congruence
    lattices; and for all pairs of homomorphisms between in-scope free
    algebras agreeing modulo a closed congruence, the conjugated pair must
    agree modulo the transported congruence.
    """
    res = check_op2(ws, variety, n_max, cap)
    if not res.ok:
        raise WordSystemError(f"admissibility fails: {res.witness}")
    hstar = star_algebra(h, ws)
    failures = []
    bijections = []
    lattices = {}
    for k in res.ranks:
        free = variety.free(k, cap)
        sigma = res.sigmas[k]
        lat = closed_lattice(free, h, cap)
        lat_star = closed_lattice(free, hstar, cap)
        lattices[k] = (free, sigma, lat, lat_star)
        pairs = []
        seen_targets = set()
        for i, cong in enumerate(lat):
            labels = [cong.partition.class_of[sigma[x]] for x in range(free.size)]
            transported = Congruence.from_labels(labels)
            try:
                j = lat_star.index_of(transported)
            except EngineError:
                failures.append(
                    f"rank {k}: transport of congruence {i} is not closed for "
                    f"{hstar.name}"
                )
                continue
            pairs.append((i, j))
            seen_targets.add(j)
        if len(seen_targets) != len(lat_star) or len(pairs) != len(lat):
            failures.append(
                f"rank {k}: transport is not a bijection "
                f"({len(lat)} vs {len(lat_star)} congruences)"
            )
        for (i1, j1) in pairs:
            for (i2, j2) in pairs:
                if lat.leq(i1, i2) != lat_star.leq(j1, j2):
                    failures.append(
                        f"rank {k}: transport does not preserve order at "
                        f"({i1},{i2})"
                    )
        bijections.append(ClosureBijection(k, tuple(pairs)))

    coordination_checked = 0
    for k1 in res.ranks:
        for k2 in res.ranks:
            f1 = variety.free(k1, cap)
            f2, sigma2, lat2, _ = lattices[k2]
            sigma1 = res.sigmas[k1]
            sigma2_inv = [0] * len(sigma2)
            for x, y in enumerate(sigma2):
                sigma2_inv[y] = x
            homs = _free_hom_maps(f1, f2)
            for cong in lat2:
                part = cong.partition
                trans = Congruence.from_labels(
                    [part.class_of[sigma2[x]] for x in range(f2.size)]
                )
                for mu1 in homs:
                    for mu2 in homs:
                        if not all(
                            part.related(mu1[x], mu2[x]) for x in range(f1.size)
                        ):
                            continue
                        coordination_checked += 1
                        conj1 = [sigma2_inv[mu1[sigma1[x]]] for x in range(f1.size)]
                        conj2 = [sigma2_inv[mu2[sigma1[x]]] for x in range(f1.size)]
                        if not all(
                            trans.related(conj1[x], conj2[x])
                            for x in range(f1.size)
                        ):
                            failures.append(
                                f"coordination fails at ranks ({k1},{k2})"
                            )
    return HHstarReport(
        ok=not failures,
        n_max=res.n_max,
        bijections=bijections,
        coordination_checked=coordination_checked,
        failures=failures,
    )


@dataclass
class CorrespondenceReport:
    ok: bool
    n_max: int
    checked: int
    failures: list


def verify_coordinate_correspondence(
    h1: FiniteAlgebra,
    h2star: FiniteAlgebra,
    ws: WordSystem,
    variety: VarietySpec,
    n_max: int = None,
    cap: int = DEFAULT_CAP,
) -> CorrespondenceReport:
    """Check the three coordinate-level conditions of the lattice
    correspondence: the least closed congruence maps to the least closed
    congruence, closed maps to closed, and the natural epimorphisms of the
    materialized quotient algebras commute with the carrier bijections
    induced by the generator-fixing isomorphism."""
    res = check_op2(ws, variety, n_max, cap)
    if not res.ok:
        raise WordSystemError(f"admissibility fails: {res.witness}")
    failures = []
    checked = 0
    for k in res.ranks:
        free = variety.free(k, cap)
        sigma = res.sigmas[k]
        id1 = id_congruence(free, h1)
        id2 = id_congruence(free, h2star)
        pull_id = Congruence.from_labels(
            [id1.partition.class_of[sigma[x]] for x in range(free.size)]
        )
        if pull_id != id2.partition:
            failures.append(f"rank {k}: least closed congruence does not correspond")
            continue
        q1, _ = quotient_algebra(free.algebra, id1.partition)
        q2, _ = quotient_algebra(free.algebra, id2.partition)
        # carrier bijection of the least-congruence quotients induced by sigma
        phi_id = [
            id1.partition.class_of[sigma[block[0]]] for block in id2.partition.blocks
        ]
        lat1 = closed_lattice(free, h1, cap)
        for cong in lat1:
            checked += 1
            labels = [cong.partition.class_of[sigma[x]] for x in range(free.size)]
            trans = Congruence.from_labels(labels)
            if not is_closed(trans, free, h2star):
                failures.append(
                    f"rank {k}: transported congruence is not closed for "
                    f"{h2star.name}"
                )
                continue
            qt1, _ = quotient_algebra(free.algebra, cong.partition)
            qt2, _ = quotient_algebra(free.algebra, trans)
            taubar1 = tuple(
                cong.partition.class_of[block[0]] for block in id1.partition.blocks
            )
            taubar2 = tuple(
                trans.class_of[block[0]] for block in id2.partition.blocks
            )
            if not is_homomorphism(q1, qt1, taubar1):
                failures.append(f"rank {k}: natural epimorphism is not a map of quotients")
            if not is_homomorphism(q2, qt2, taubar2):
                failures.append(
                    f"rank {k}: transported natural epimorphism is not a map of "
                    "quotients"
                )
            phi_t = [
                cong.partition.class_of[sigma[block[0]]] for block in trans.blocks
            ]
            for q in range(q2.size):
                if phi_t[taubar2[q]] != taubar1[phi_id[q]]:
                    failures.append(
                        f"rank {k}: epimorphism square does not commute at "
                        f"block {q}"
                    )
                    break
    return CorrespondenceReport(not failures, res.n_max, checked, failures)


@dataclass
class EquivalenceCertificate:
    """Machine-readable outcome of an equivalence decision.

    verdict: "geometric" | "automorphic" | "refuted-at-bounds" | "exhausted".
    An automorphic verdict always carries an admissible word system and the
    per-rank lattice evidence for the pair (first algebra, star of second).
    """

    verdict: str
    bounds: dict
    word_system: WordSystem = None
    evidence: dict = field(default_factory=dict)


def auto_equivalent_search(
    h1: FiniteAlgebra,
    h2: FiniteAlgebra,
    variety: VarietySpec,
    depth_max: int = 2,
    n_max: int = None,
    cap: int = DEFAULT_CAP,
    max_candidates: int = None,
) -> EquivalenceCertificate:
    """Search for a word system whose star turns the second algebra into a
    geometric equivalent of the first.

    Candidate systems are enumerated per symbol in term-enumeration order,
    deduplicated semantically, and combined lexicographically; the first
    admissible system passing the lattice comparison wins, so the result
    is deterministic.  A lattice-size mismatch between the two algebras at
    any in-scope rank refutes every candidate at once and is final at the
    checked bounds.
    """
    _require_in_variety(h1, variety)
    _require_in_variety(h2, variety)
    if n_max is None:
        n_max = default_n_max(variety.signature)
    bounds = {"n_max": n_max, "depth_max": depth_max}
    for k in scope_ranks(variety, n_max):
        free = variety.free(k, cap)
        n1 = len(closed_lattice(free, h1, cap))
        n2 = len(closed_lattice(free, h2, cap))
        if n1 != n2:
            return EquivalenceCertificate(
                verdict="refuted-at-bounds",
                bounds=bounds,
                evidence={
                    "reason": "lattice-size mismatch survives every admissible "
                    "word system (size transport)",
                    "rank": k,
                    "size_h1": n1,
                    "size_h2": n2,
                },
            )
    checked = 0
    for ws in enumerate_word_systems(variety, depth_max):
        if max_candidates is not None and checked >= max_candidates:
            return EquivalenceCertificate(
                verdict="exhausted",
                bounds=bounds,
                evidence={"candidates_checked": checked, "note": "candidate cap hit"},
            )
        checked += 1
        res = check_op2(ws, variety, n_max, cap)
        if not res.ok:
            continue
        h2star = star_algebra(h2, ws)
        geo = geom_equivalent(h1, h2star, variety, n_max, cap)
        if geo.equivalent:
            return EquivalenceCertificate(
                verdict="automorphic",
                bounds=bounds,
                word_system=ws,
                evidence={
                    "candidates_checked": checked,
                    "per_rank": geo.per_rank,
                },
            )
    return EquivalenceCertificate(
        verdict="exhausted",
        bounds=bounds,
        evidence={"candidates_checked": checked},
    )


def compose_word_systems(outer: WordSystem, inner: WordSystem) -> WordSystem:
    """Template-expand the outer system's words through the inner system:
    starring by the composite equals starring by the inner system first
    and the outer one on top."""
    templates = dict(inner.words)
    return WordSystem(
        outer.signature,
        {name: replace_symbols(w, templates) for name, w in outer.items()},
    )


@dataclass
class FactsReport:
    ok: bool
    fact1: list
    fact2: list
    fact3: list


def verify_equivalence_facts(
    corpus,
    variety: VarietySpec,
    n_max: int = None,
    depth_max: int = 1,
    cap: int = DEFAULT_CAP,
) -> FactsReport:
    """Run the reflexivity / symmetry / transitivity structure of the
    equivalence through the engine rather than trusting the algebra.

    Fact 1: every geometrically equivalent pair is certified by the
    identity word system.  Fact 2: inverting a certificate's word system
    certifies the swapped pair.  Fact 3: template-composing two
    certificates certifies the composite pair.  Every derived certificate
    is re-verified from scratch.
    """
    from .verbal import identity_system, inverse_word_system

    corpus = list(corpus)
    if n_max is None:
        n_max = default_n_max(variety.signature)
    fact1, fact2, fact3 = [], [], []
    certs = {}
    for a, b in itertools.product(range(len(corpus)), repeat=2):
        h1, h2 = corpus[a], corpus[b]
        geo = geom_equivalent(h1, h2, variety, n_max, cap)
        if geo.equivalent:
            ident = identity_system(variety.signature)
            ok = (
                check_op2(ident, variety, n_max, cap).ok
                and geom_equivalent(
                    h1, star_algebra(h2, ident), variety, n_max, cap
                ).equivalent
            )
            fact1.append((h1.name, h2.name, ok))
        cert = auto_equivalent_search(h1, h2, variety, depth_max, n_max, cap)
        if cert.verdict == "automorphic":
            certs[(a, b)] = cert
    for (a, b), cert in sorted(certs.items()):
        h1, h2 = corpus[a], corpus[b]
        inv = inverse_word_system(cert.word_system, variety, n_max, cap=cap)
        ok = (
            check_op2(inv, variety, n_max, cap).ok
            and geom_equivalent(
                h2, star_algebra(h1, inv), variety, n_max, cap
            ).equivalent
        )
        fact2.append((h1.name, h2.name, ok))
    for (a, b), cert_ab in sorted(certs.items()):
        for (b2, c), cert_bc in sorted(certs.items()):
            if b2 != b:
                continue
            h1, h3 = corpus[a], corpus[c]
            composed = compose_word_systems(cert_ab.word_system, cert_bc.word_system)
            ok = (
                check_op2(composed, variety, n_max, cap).ok
                and geom_equivalent(
                    h1, star_algebra(h3, composed), variety, n_max, cap
                ).equivalent
            )
            fact3.append((corpus[a].name, corpus[b].name, corpus[c].name, ok))
    ok = (
        all(x[-1] for x in fact1)
        and all(x[-1] for x in fact2)
        and all(x[-1] for x in fact3)
    )
    return FactsReport(ok, fact1, fact2, fact3)
