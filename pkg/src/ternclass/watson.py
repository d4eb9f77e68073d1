"""Watson transformations Lambda_m / lambda_m and descent to a stable lattice."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import Gram, check_gram, content, disc, is_even, primitive, qform
from .linalg import columns, congruent, hnf, kernel_mod
from .localdata import prime_factors, valuation


def lambda_basis(g: Gram, m: int) -> tuple[tuple[int, ...], ...]:
    """Hermite basis (rows, in the coordinates of G) of Lambda_m(G).

    Lambda_m = {x : Q(x) = 0 mod m and 2B(x, L) = 0 mod m}.  On the kernel K of the linear
    condition, Q is additive mod m, so the quadratic condition is a second linear one.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    two_g = [[2 * x for x in r] for r in g]
    k = kernel_mod(two_g, m)
    qs = [[qform(g, v) for v in k]]
    c = kernel_mod(qs, m)
    vecs = [tuple(sum(ci * k[i][j] for i, ci in enumerate(cv)) for j in range(3)) for cv in c]
    return hnf(vecs)


def capital_lambda(g: Gram, m: int) -> Gram:
    g = check_gram(g)
    return congruent(g, columns(lambda_basis(g, m)))


@dataclass(frozen=True)
class ScaledLattice:
    """scale * primitive Gram."""
    gram: Gram
    scale: int

    @property
    def full(self) -> Gram:
        return tuple(tuple(x * self.scale for x in r) for r in self.gram)


def lambda_primitive(g: Gram, m: int) -> ScaledLattice:
    big = capital_lambda(g, m)
    return ScaledLattice(primitive(big), content(big))


def is_stable(g: Gram) -> bool:
    d = disc(g)
    for p in prime_factors(d):
        if valuation(d, p) >= 2:
            return False
    v2 = valuation(d, 2) if d % 2 == 0 else 0
    return (v2 == 1) == is_even(g)


@dataclass
class WatsonStep:
    m: int
    before: Gram
    after: Gram
    scale: int  # content of Lambda_m(before)


@dataclass
class DescentChain:
    start: Gram
    steps: list[WatsonStep] = field(default_factory=list)

    @property
    def terminal(self) -> Gram:
        return self.steps[-1].after if self.steps else self.start

    @property
    def odd_only(self) -> bool:
        return all(s.m % 2 for s in self.steps)

    def to_json(self) -> dict:
        from .lattice import six
        return {
            "start": list(six(self.start)),
            "steps": [{"m": s.m, "before": list(six(s.before)), "after": list(six(s.after)),
                       "scale": s.scale} for s in self.steps],
            "terminal": list(six(self.terminal)),
            "odd_only": self.odd_only,
        }


def next_modulus(g: Gram) -> int | None:
    """Modulus of the next descent step, or None when G is stable."""
    d = disc(g)
    odd = [p for p in prime_factors(d) if p != 2 and valuation(d, p) >= 2]
    if odd:
        return max(odd)
    v2 = valuation(d, 2) if d % 2 == 0 else 0
    if v2 >= 2:
        return 4 if is_even(g) else 2
    if v2 == 1 and not is_even(g):
        return 2
    return None


def descend_to_stable(g: Gram) -> DescentChain:
    g = primitive(check_gram(g))
    chain = DescentChain(g)
    cur = g
    while True:
        m = next_modulus(cur)
        if m is None:
            break
        q = 2 if m in (2, 4) else m
        sl = lambda_primitive(cur, m)
        nxt = sl.gram
        # each step lowers the local discriminant valuation
        assert valuation(disc(nxt), q) < valuation(disc(cur), q) if disc(nxt) % q == 0 else True
        chain.steps.append(WatsonStep(m, cur, nxt, sl.scale))
        cur = nxt
    assert is_stable(cur)
    return chain


def two_dual_transport(g: Gram) -> Gram:
    """The lattice G* with G*_q = G_q for odd q and G*_2 = 2 (G_2)^#.

    "2 X" is the lattice X with every vector doubled, so its Gram is 4 Gram(X); this is the
    reading under which E* recovers L over pJ.
    """
    g = check_gram(g)
    d = disc(g)
    k = valuation(d, 2) if d % 2 == 0 else 0
    dodd = d >> k
    # X = G^# meet Z[1/2]^3; scaled by 2^k it is {adj(G) z / dodd : adj(G) z = 0 mod dodd}
    from .linalg import adj3
    adj = adj3(g)
    zs = kernel_mod(adj, dodd) if dodd > 1 else hnf([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    ys = [tuple(sum(adj[r][c] * z[c] for c in range(3)) // dodd for r in range(3)) for z in zs]
    basis = hnf(ys)
    gram = congruent(g, columns(basis))
    # vectors are 2^k * (actual), so the form scales by 4^k; doubling the vectors gives 4
    out = [[Fraction(4 * x, 4 ** k) for x in r] for r in gram]
    if any(x.denominator != 1 for r in out for x in r):
        raise ValueError("2-dual transport leaves the integral lattices")
    return tuple(tuple(int(x) for x in r) for r in out)
