"""Aggregated verification suite behind the `verify` command.

Runs, per scenario block (a variety plus a small corpus of its algebras,
with explicit bounds): variety membership of the corpus, enumeration of
admissible word systems at bounded depth, the word/bijection round
trips, the verbal-equals-derived table check, the lattice transport and
coordination checks between each algebra and its star algebras, inverse
systems and double-star reconstruction, the reflexivity / symmetry /
transitivity facts, pairwise geometric comparisons, and recorded
equivalence searches.

Output is a flat list of PASS/FAIL/INFO lines, deterministic down to the
byte for fixed inputs and bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import corpus as corp
from .algebras import FiniteAlgebra
from .equivalence import (
    auto_equivalent_search,
    geom_equivalent,
    verify_coordinate_correspondence,
    verify_equivalence_facts,
    verify_H_Hstar,
)
from .errors import CapExceeded, EngineError
from .free import DEFAULT_CAP, VarietySpec, variety_membership
from .terms import format_term
from .verbal import (
    bijections_from_words,
    check_b1_b2,
    check_op2,
    enumerate_word_systems,
    identity_system,
    inverse_word_system,
    star_algebra,
    systems_semantically_equal,
    verify_zhito,
    words_from_bijections,
)

__all__ = ["Block", "Report", "builtin_blocks", "run_block", "run_verification"]


@dataclass
class Block:
    name: str
    variety: VarietySpec
    corpus: list
    n_max: int
    depth_max: int
    search_pairs: list = field(default_factory=list)
    cap: int = DEFAULT_CAP


@dataclass
class Report:
    ok: bool
    lines: list

    def render_text(self) -> str:
        failed = sum(1 for line in self.lines if line.startswith("FAIL"))
        checks = sum(1 for line in self.lines if not line.startswith("INFO"))
        tail = f"RESULT {'PASS' if self.ok else 'FAIL'} ({checks} checks, {failed} failed)"
        return "\n".join(self.lines + [tail]) + "\n"

    def render_json(self) -> dict:
        return {"ok": self.ok, "lines": self.lines}


def builtin_blocks():
    """The shipped desk-scale corpus: one block per variety."""
    return [
        Block(
            "semilattice",
            corp.var_s2(),
            [corp.s2(), corp.s2xs2(), corp.trivial_meet()],
            n_max=2,
            depth_max=2,
            search_pairs=[(0, 0), (0, 2)],
        ),
        Block(
            "group2",
            corp.var_z2(),
            [corp.z2(), corp.z2xz2()],
            n_max=2,
            depth_max=2,
            search_pairs=[(0, 0)],
        ),
        Block("group3", corp.var_z3(), [corp.z3()], n_max=2, depth_max=1),
        Block(
            "group6",
            corp.var_s3(),
            [corp.s3(), corp.s3_transposed()],
            n_max=1,
            depth_max=1,
            search_pairs=[(1, 0)],
        ),
    ]


def _system_label(ws):
    return ";".join(f"{n}={format_term(w)}" for n, w in ws.items())


def run_block(block: Block):
    lines = []
    v = block.variety

    def emit(status, step, detail):
        lines.append(f"{status} {block.name}.{step} {detail}")

    # 1. corpus membership
    membership_ok = True
    for h in block.corpus:
        try:
            verdict = variety_membership(h, v, block.cap)
            if verdict:
                emit("PASS", "membership", f"{h.name} in variety: True")
            else:
                refuted = v.refute_membership(h)
                why = (
                    f"fails identity {format_term(refuted[0])} = {format_term(refuted[1])}"
                    if refuted
                    else "rejected by the free-algebra extension test"
                )
                emit("FAIL", "membership", f"{h.name} not in variety: {why}")
            membership_ok &= verdict
        except CapExceeded:
            refuted = v.refute_membership(h)
            if refuted is None:
                emit(
                    "PASS",
                    "membership",
                    f"{h.name} not refuted (free-algebra cap hit; refutation-only)",
                )
            else:
                lhs, rhs = refuted
                emit(
                    "FAIL",
                    "membership",
                    f"{h.name} fails identity {format_term(lhs)} = {format_term(rhs)}",
                )
                membership_ok = False
    if not membership_ok:
        emit("INFO", "membership", "corpus outside variety; remaining checks skipped")
        return lines

    # 2. admissible word systems at the block bounds
    systems = []
    for ws in enumerate_word_systems(v, block.depth_max):
        if check_op2(ws, v, block.n_max, block.cap).ok:
            systems.append(ws)
    emit(
        "INFO",
        "systems",
        f"{len(systems)} admissible at depth {block.depth_max}, ranks <= {block.n_max}: "
        + " / ".join(_system_label(ws) for ws in systems),
    )

    covers_arities = block.n_max >= v.signature.max_arity()
    for idx, ws in enumerate(systems):
        label = f"system{idx}"
        if covers_arities:
            try:
                bij = bijections_from_words(ws, v, block.n_max, block.cap)
                back = words_from_bijections(bij)
                ok = systems_semantically_equal(back, ws, v)
                emit("PASS" if ok else "FAIL", f"{label}.roundtrip_words", _system_label(ws))
                bij2 = bijections_from_words(back, v, block.n_max, block.cap)
                ok = bij2.maps == bij.maps
                emit("PASS" if ok else "FAIL", f"{label}.roundtrip_bijections", _system_label(ws))
                ok, why = check_b1_b2(bij)
                emit("PASS" if ok else "FAIL", f"{label}.bijection_conditions", why or "ok")
            except EngineError as exc:
                emit("FAIL", f"{label}.roundtrips", str(exc))
        else:
            emit(
                "INFO",
                f"{label}.roundtrips",
                f"skipped: rank bound {block.n_max} below max arity",
            )
        try:
            ok, why = verify_zhito(ws, v, block.n_max, block.cap)
            emit("PASS" if ok else "FAIL", f"{label}.verbal_equals_derived", why or "ok")
        except EngineError as exc:
            emit("FAIL", f"{label}.verbal_equals_derived", str(exc))
        for h in block.corpus:
            try:
                rep = verify_H_Hstar(h, ws, v, block.n_max, block.cap)
                emit(
                    "PASS" if rep.ok else "FAIL",
                    f"{label}.lattice_transport",
                    f"{h.name}: {rep.coordination_checked} coordination checks"
                    + ("" if rep.ok else "; " + "; ".join(rep.failures)),
                )
                rep2 = verify_coordinate_correspondence(
                    h, star_algebra(h, ws), ws, v, block.n_max, block.cap
                )
                emit(
                    "PASS" if rep2.ok else "FAIL",
                    f"{label}.coordinate_correspondence",
                    f"{h.name}: {rep2.checked} congruences"
                    + ("" if rep2.ok else "; " + "; ".join(rep2.failures)),
                )
            except EngineError as exc:
                emit("FAIL", f"{label}.lattice_transport", f"{h.name}: {exc}")
        try:
            inv = inverse_word_system(ws, v, block.n_max, cap=block.cap)
            for h in block.corpus:
                double = star_algebra(star_algebra(h, ws), inv)
                ok = double.tables == h.tables
                emit(
                    "PASS" if ok else "FAIL",
                    f"{label}.double_star",
                    f"{h.name} via inverse {_system_label(inv)}",
                )
        except EngineError as exc:
            emit("FAIL", f"{label}.double_star", str(exc))

    # 3. identity system sanity even if not enumerated (depth too small)
    ident = identity_system(v.signature)
    if not any(systems_semantically_equal(ws, ident, v) for ws in systems):
        emit("FAIL", "systems", "identity system not found admissible")

    # 4. pairwise geometric comparisons
    for h1 in block.corpus:
        for h2 in block.corpus:
            try:
                geo = geom_equivalent(h1, h2, v, block.n_max, block.cap)
                detail = f"{h1.name} vs {h2.name}: "
                if geo.equivalent:
                    detail += f"equivalent up to rank {geo.n_max}"
                else:
                    w = geo.witness
                    detail += (
                        f"refuted at rank {w['rank']}, congruence "
                        f"[{w['encoding']}] closed only for {w['closed_for']}"
                    )
                status = "FAIL" if (h1 is h2 and not geo.equivalent) else "PASS"
                emit(status, "geometry", detail)
            except EngineError as exc:
                emit("FAIL", "geometry", f"{h1.name} vs {h2.name}: {exc}")

    # 5. equivalence facts, engine-run
    try:
        facts = verify_equivalence_facts(
            block.corpus, v, block.n_max, block.depth_max, block.cap
        )
        for h1, h2, ok in facts.fact1:
            emit("PASS" if ok else "FAIL", "fact1", f"identity certifies ({h1},{h2})")
        for h1, h2, ok in facts.fact2:
            emit("PASS" if ok else "FAIL", "fact2", f"inverse certifies ({h2},{h1})")
        for h1, h2, h3, ok in facts.fact3:
            emit(
                "PASS" if ok else "FAIL",
                "fact3",
                f"composition certifies ({h1},{h3}) through {h2}",
            )
    except EngineError as exc:
        emit("FAIL", "facts", str(exc))

    # 6. recorded searches
    for i, j in block.search_pairs:
        h1, h2 = block.corpus[i], block.corpus[j]
        try:
            cert = auto_equivalent_search(
                h1, h2, v, block.depth_max, block.n_max, block.cap
            )
            detail = f"({h1.name},{h2.name}) -> {cert.verdict}"
            if cert.word_system is not None:
                detail += f" via {_system_label(cert.word_system)}"
            if h1 is h2:
                ok = cert.verdict == "automorphic" and systems_semantically_equal(
                    cert.word_system, ident, v
                )
                emit("PASS" if ok else "FAIL", "search", detail)
            else:
                emit("INFO", "search", detail)
        except EngineError as exc:
            emit("FAIL", "search", f"({h1.name},{h2.name}): {exc}")
    return lines


def run_verification(blocks=None) -> Report:
    if blocks is None:
        blocks = builtin_blocks()
    lines = []
    for block in blocks:
        lines.extend(run_block(block))
    ok = not any(line.startswith("FAIL") for line in lines)
    return Report(ok, lines)
