"""Built-in desk-scale algebras used by the verification suite and tests.

Group elements of S3 are the permutations of {0,1,2} in lexicographic
order, so index 0 is the identity; multiplication composes right-to-left
((p*q)(x) = p(q(x))).
"""

import itertools

from .algebras import FiniteAlgebra, product_algebra
from .free import VarietySpec
from .terms import App, Var, parse_signature
from .verbal import WordSystem

MEET_SIG = parse_signature("meet/2")
GROUP_SIG = parse_signature("mul/2, inv/1, e/0")
BAND_SIG = parse_signature("f/2")


def s2():
    return FiniteAlgebra("S2", MEET_SIG, 2, {"meet": [[0, 0], [0, 1]]})


def trivial_meet():
    return FiniteAlgebra("T1", MEET_SIG, 1, {"meet": [[0]]})


def left_zero():
    return FiniteAlgebra("LZ", MEET_SIG, 2, {"meet": [[0, 0], [1, 1]]})


def s2xs2():
    prod = product_algebra([s2(), s2()])
    prod.name = "S2xS2"
    return prod


def cyclic(n, name=None):
    return FiniteAlgebra(
        name or f"Z{n}",
        GROUP_SIG,
        n,
        {
            "mul": [[(a + b) % n for b in range(n)] for a in range(n)],
            "inv": [(-a) % n for a in range(n)],
            "e": 0,
        },
    )


def z2():
    return cyclic(2)


def z3():
    return cyclic(3)


def z2xz2():
    prod = product_algebra([z2(), z2()])
    prod.name = "Z2xZ2"
    return prod


def s3():
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    mul = [
        [index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms
    ]
    inv = [index[tuple(sorted(range(3), key=lambda x, p=p: p[x]))] for p in perms]
    return FiniteAlgebra("S3", GROUP_SIG, 6, {"mul": mul, "inv": inv, "e": 0})


def s3_transposed():
    base = s3()
    mul = [[base.tables["mul"][b][a] for b in range(6)] for a in range(6)]
    return FiniteAlgebra(
        "S3t", GROUP_SIG, 6, {"mul": mul, "inv": base.tables["inv"], "e": 0}
    )


def rect_band():
    """The 2x2 rectangular band: pairs (l, r), f((l1,r1),(l2,r2)) = (l1,r2);
    a cheap non-commutative playground with tiny free algebras."""
    pairs = list(itertools.product(range(2), range(2)))
    index = {p: i for i, p in enumerate(pairs)}
    table = [
        [index[(pairs[a][0], pairs[b][1])] for b in range(4)] for a in range(4)
    ]
    return FiniteAlgebra("RB", BAND_SIG, 4, {"f": table})


def var_s2():
    return VarietySpec([s2()])


def var_z2():
    return VarietySpec([z2()])


def var_z3():
    return VarietySpec([z3()])


def var_s3():
    return VarietySpec([s3()])


def var_rect_band():
    return VarietySpec([rect_band()])


def opposite_group_system():
    return WordSystem(
        GROUP_SIG,
        {
            "mul": App("mul", (Var(2), Var(1))),
            "inv": App("inv", (Var(1),)),
            "e": App("e", ()),
        },
    )


def opposite_band_system():
    return WordSystem(BAND_SIG, {"f": App("f", (Var(2), Var(1)))})
