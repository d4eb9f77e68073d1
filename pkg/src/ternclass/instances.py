"""Test-instance generation "from N upward".

Pick a lattice N (a scaled base lattice), list every M with Lambda_p(M) = N, and keep one
representative L per genus.  Each (N, L, p) is an ascent step whose fiber can be checked
against the explicit oracle fiber.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .lattice import A3, I3, J3, K1, K2, K3, K4, Gram, content, diag, from_six, scale
from .localdata import JordanDecompOdd, genus_symbol, jordan_odd
from .oracle import watson_preimages


@dataclass(frozen=True)
class Instance:
    n_gram: Gram  # full (imprimitive) Lambda_p(L)
    l_gram: Gram
    p: int
    jordan: JordanDecompOdd

    @property
    def case_id(self) -> int:
        return self.jordan.case_id


FIXED_BASES = [
    I3, A3, J3,
    K1(1, 3), K1(1, 4), K2(1, 1), K2(1, 2), K2(1, 5), K3(1, 2), K3(1, 3), K3(1, 5), K4(1, 3), K4(1, 4),
    diag(1, 2, 3), diag(1, 2, 5), diag(1, 3, 5), diag(2, 3, 5), diag(1, 1, 2), diag(1, 5, 7), diag(1, 3, 3),
    diag(1, 1, 3),
    from_six(2, 2, 3, 1, 1, 1), from_six(1, 2, 3, 1, 0, 0), from_six(2, 3, 4, 1, 1, 1), from_six(2, 3, 5, 1, 1, 0),
    from_six(3, 3, 4, 1, 1, 1),
    # |O| = 4 and |O| = 2
    from_six(1, 3, 4, -1, 0, 0), from_six(2, 3, 3, -1, 0, -1), from_six(2, 3, 4, -1, -1, -1),
    from_six(3, 3, 4, 0, -1, -1), from_six(3, 3, 5, 1, 0, -1), from_six(3, 4, 5, 1, 1, 1),
]


def prime_bases(p: int) -> list[Gram]:
    """Bases whose discriminant carries p, so that N has a deeper p-adic shape."""
    return [diag(1, 1, p), diag(1, p, p), diag(1, 2, p), diag(1, 2, 2 * p), diag(1, p, 2 * p), diag(2, p, 3 * p),
            K3(1, p), K3(p, 1), K2(1, p), K2(p, 1), K2(1, 3 * p), K2(3, p), K1(1, 2 * p), K4(1, p + 1),
            K4(p, p + 1), diag(1, p, p * p), from_six(3, 3, 4 * p, 0, -1, -1), from_six(1, 3, 4 * p, -1, 0, 0)]


def upward_instances(p: int, bases: list[Gram] | None = None, exps=(1, 2)) -> list[Instance]:
    if bases is None:
        bases = FIXED_BASES + prime_bases(p)
    out = []
    for n0 in bases:
        for e in exps:
            n = scale(n0, p ** e)
            seen = set()
            for mem in watson_preimages(n, p):
                sym = genus_symbol(mem.gram)
                if sym in seen:
                    continue
                seen.add(sym)
                if content(mem.gram) % p == 0:
                    continue
                j = jordan_odd(mem.gram, p)
                if j.alpha + j.beta < 2:
                    continue
                out.append(Instance(n, mem.gram, p, j))
    return out


def random_instances(count: int, primes=(3, 5, 7, 11), seed: int = 0) -> list[Instance]:
    """A seeded sample that still hits all eight cases."""
    rng = random.Random(seed)
    pool: dict[int, list[Instance]] = {}
    for p in primes:
        for inst in upward_instances(p):
            pool.setdefault(inst.case_id, []).append(inst)
    picked = [rng.choice(pool[c]) for c in sorted(pool)]
    rest = [i for c in sorted(pool) for i in pool[c] if i not in picked]
    rng.shuffle(rest)
    return picked + rest[: max(0, count - len(picked))]
