"""Finite commutative unital rings.

A ring is stored as its additive coordinate group ⊕_i Z/d_i together
with a multiplication table on the coordinate basis; multiplication of
arbitrary elements is the bilinear extension. Elements are plain integer
tuples, reduced coordinate-wise. All values are immutable after
construction and validation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

from .errors import GuardExceeded
from .snf import abelian_quotient

RING_SIZE_GUARD = 4096
AXIOM_CHECK_GUARD = 256
ORACLE_CHECK_GUARD = 64

Element = tuple  # coordinate tuple; one entry per additive generator


class FiniteRing:
    def __init__(self, additive_orders, mul_table, one, label, *, validate=True):
        self.additive_orders = tuple(int(d) for d in additive_orders)
        if not self.additive_orders or any(d < 2 for d in self.additive_orders):
            raise ValueError("additive orders must be a nonempty list of integers >= 2")
        self.rank = len(self.additive_orders)
        self.size = reduce(lambda a, b: a * b, self.additive_orders, 1)
        if self.size > RING_SIZE_GUARD:
            raise GuardExceeded(
                "ring-size", f"|R| = {self.size} exceeds guard {RING_SIZE_GUARD}"
            )
        self.mul_table = tuple(
            tuple(self.reduce(e) for e in row) for row in mul_table
        )
        self.one = self.reduce(one)
        self.zero = (0,) * self.rank
        self.label = label
        self._elements = None
        self._index = None
        self._basis_action = {}
        self._units = None
        if validate:
            self._validate()

    # -- additive structure ------------------------------------------------

    def reduce(self, x) -> Element:
        return tuple(int(c) % d for c, d in zip(x, self.additive_orders))

    def add(self, x, y) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.additive_orders))

    def neg(self, x) -> Element:
        return tuple((-a) % d for a, d in zip(x, self.additive_orders))

    def sub(self, x, y) -> Element:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.additive_orders))

    def scale(self, n, x) -> Element:
        return tuple((n * a) % d for a, d in zip(x, self.additive_orders))

    # -- multiplication ----------------------------------------------------

    def mul(self, x, y) -> Element:
        acc = [0] * self.rank
        table = self.mul_table
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, bk in enumerate(table[i][j]):
                    if bk:
                        acc[k] += c * bk
        return tuple(a % d for a, d in zip(acc, self.additive_orders))

    def basis(self, i) -> Element:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    # -- element enumeration (lexicographic on coordinates) ----------------

    @property
    def elements(self):
        if self._elements is None:
            self._elements = [
                e for e in itertools.product(*(range(d) for d in self.additive_orders))
            ]
            self._index = {e: i for i, e in enumerate(self._elements)}
        return self._elements

    def index_of(self, x) -> int:
        self.elements
        return self._index[tuple(x)]

    def element(self, i) -> Element:
        return self.elements[i]

    def basis_action(self, i):
        """Index-level map x -> b_i * x, precomputed for closure loops."""
        if i not in self._basis_action:
            b = self.basis(i)
            self._basis_action[i] = [
                self.index_of(self.mul(b, x)) for x in self.elements
            ]
        return self._basis_action[i]

    # -- units ---------------------------------------------------------------

    def is_unit(self, x) -> bool:
        # x is a unit iff some power of x equals 1 (finite ring)
        y = tuple(x)
        for _ in range(self.size):
            if y == self.one:
                return True
            if y == self.zero:
                return False
            y = self.mul(y, x)
        return False

    def units(self) -> frozenset:
        if self._units is None:
            self._units = frozenset(x for x in self.elements if self.is_unit(x))
        return self._units

    def __repr__(self):
        return f"FiniteRing({self.label}, |R|={self.size})"

    # -- validation ----------------------------------------------------------

    def _validate(self):
        r = self.rank
        bs = [self.basis(i) for i in range(r)]
        for i in range(r):
            if self.mul(self.one, bs[i]) != bs[i]:
                raise ValueError(f"{self.label}: 1*b_{i} != b_{i}")
            for j in range(r):
                if self.mul_table[i][j] != self.mul_table[j][i]:
                    raise ValueError(f"{self.label}: basis product not commutative")
                for k in range(r):
                    lhs = self.mul(self.mul(bs[i], bs[j]), bs[k])
                    rhs = self.mul(bs[i], self.mul(bs[j], bs[k]))
                    if lhs != rhs:
                        raise ValueError(f"{self.label}: basis product not associative")
        # bilinearity gives the laws on all elements once they hold on the
        # basis; spot-check elementwise anyway (exhaustive when small)
        if self.size <= 32:
            elems = self.elements
            for x in elems:
                if self.mul(self.one, x) != x:
                    raise ValueError(f"{self.label}: unit law fails at {x}")
                for y in elems:
                    if self.mul(x, y) != self.mul(y, x):
                        raise ValueError(f"{self.label}: commutativity fails")
        else:
            sample = self.elements[:: max(1, self.size // 8)]
            for x in sample:
                if self.mul(self.one, x) != x:
                    raise ValueError(f"{self.label}: unit law fails at {x}")
                for y in sample:
                    for z in sample:
                        if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                            raise ValueError(f"{self.label}: associativity fails")


# -- ideals ------------------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    ring: FiniteRing
    members: int  # bitmask over the ring's element indices
    generators: tuple  # coordinate tuples witnessing the members

    @property
    def size(self) -> int:
        return self.members.bit_count()

    @property
    def residue_size(self) -> int:
        return self.ring.size // self.size

    def __contains__(self, x) -> bool:
        return bool(self.members >> self.ring.index_of(x) & 1)

    def member_elements(self):
        return [
            self.ring.element(i)
            for i in range(self.ring.size)
            if self.members >> i & 1
        ]

    def is_proper(self) -> bool:
        return self.size < self.ring.size

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Ideal({self.ring.label}; <{gens}>; size={self.size})"


def _additive_closure_indices(ring, add_fn, gen_indices, start=None):
    """Subgroup of indices generated by `start` (a subgroup) and the gens."""
    members = set(start) if start is not None else {ring.index_of(ring.zero)}
    for g in gen_indices:
        if g in members:
            continue
        base = list(members)
        cur = g
        while cur not in members:
            members.update(add_fn(x, cur) for x in base)
            cur = add_fn(cur, g)
    return members


def ideal_generated(ring: FiniteRing, gens) -> Ideal:
    """Smallest ideal containing `gens` (coordinate tuples)."""
    gens = [ring.reduce(g) for g in gens]
    add_fn = lambda i, j: ring.index_of(ring.add(ring.element(i), ring.element(j)))
    # the additive span of {b_i * g} is already closed under the action
    addgens = [
        ring.index_of(ring.mul(ring.basis(i), g))
        for g in gens
        for i in range(ring.rank)
    ]
    members = _additive_closure_indices(ring, add_fn, addgens)
    mask = 0
    for i in members:
        mask |= 1 << i
    return Ideal(ring, mask, tuple(sorted(gens)))


def zero_ideal(ring: FiniteRing) -> Ideal:
    return Ideal(ring, 1 << ring.index_of(ring.zero), ())


def minimal_generators(ring: FiniteRing, member_indices) -> tuple:
    """Greedy small generating set for an ideal given as an index set."""
    gens = []
    add_fn = lambda i, j: ring.index_of(ring.add(ring.element(i), ring.element(j)))
    span = {ring.index_of(ring.zero)}
    for idx in sorted(member_indices):
        if idx in span:
            continue
        gens.append(ring.element(idx))
        addgens = [
            ring.basis_action(i)[ring.index_of(g)]
            for g in gens
            for i in range(ring.rank)
        ]
        span = _additive_closure_indices(ring, add_fn, addgens)
        if len(span) == len(member_indices):
            break
    return tuple(gens)


# -- constructors --------------------------------------------------------------


def ring_zmod(n: int) -> FiniteRing:
    """Z/n as a finite ring."""
    if n < 2:
        raise ValueError(f"Z/{n}: modulus must be at least 2")
    if n > RING_SIZE_GUARD:
        raise GuardExceeded("ring-size", f"Z/{n} exceeds guard {RING_SIZE_GUARD}")
    return FiniteRing([n], [[(1,)]], (1,), f"Z/{n}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_trim(f):
    while f and f[-1] == 0:
        f = f[:-1]
    return f


def _poly_mulmod(a, b, f, p):
    """(a*b) mod f over Z/p; f monic of degree k, inputs of degree < k."""
    k = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if not c:
            continue
        prod[deg] = 0
        for j in range(k):
            prod[deg - k + j] = (prod[deg - k + j] - c * f[j]) % p
    prod = prod[:k]
    return prod + [0] * (k - len(prod))


def _poly_divisible(f, g, p):
    """Whether monic g divides f over Z/p."""
    rem = [c % p for c in f]
    dg = len(g) - 1
    while len(_poly_trim(rem)) - 1 >= dg:
        rem = _poly_trim(rem)
        shift = len(rem) - 1 - dg
        c = rem[-1]
        for j, gj in enumerate(g):
            rem[shift + j] = (rem[shift + j] - c * gj) % p
    return not _poly_trim(rem)


def _is_irreducible(f, p) -> bool:
    """Exhaustive factor search; fine for the supported degrees (k <= 8)."""
    k = len(f) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]  # monic of degree d
            if _poly_divisible(f, g, p):
                return False
    return True


def smallest_irreducible(p: int, k: int):
    """Lexicographically smallest monic irreducible of degree k over Z/p.

    Coefficients are low-degree first; lexicographic order compares the
    tuple (c_0, ..., c_{k-1}).
    """
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if _is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


def ring_gf(p: int, k: int = 1, f=None) -> FiniteRing:
    """The finite field F_{p^k} as Z/p[x]/(f)."""
    if not _is_prime(p):
        raise ValueError(f"GF: {p} is not prime")
    if k < 1:
        raise ValueError("GF: extension degree must be >= 1")
    if p**k > RING_SIZE_GUARD:
        raise GuardExceeded("ring-size", f"GF({p}^{k}) exceeds guard {RING_SIZE_GUARD}")
    if k > 8:
        raise GuardExceeded("gf-degree", "irreducibility search supports k <= 8")
    if f is None:
        f = smallest_irreducible(p, k)
        label = f"GF({p})" if k == 1 else f"GF({p}^{k})"
    else:
        f = [int(c) % p for c in f]
        if len(f) != k + 1 or f[-1] != 1:
            raise ValueError(f"GF: f must be monic of degree {k}")
        if not _is_irreducible(f, p):
            raise ValueError(f"GF({p}^{k}): polynomial {f} is reducible")
        label = f"GF({p}^{k}; f={','.join(str(c) for c in f)})"
    # basis 1, x, ..., x^(k-1)
    table = []
    for i in range(k):
        row = []
        xi = [0] * k
        xi[i] = 1
        for j in range(k):
            xj = [0] * k
            xj[j] = 1
            row.append(tuple(_poly_mulmod(xi, xj, f, p)))
        table.append(row)
    one = tuple([1] + [0] * (k - 1))
    return FiniteRing([p] * k, table, one, label)


def ring_product(a: FiniteRing, b: FiniteRing) -> FiniteRing:
    """Direct product with componentwise operations."""
    if a.size * b.size > RING_SIZE_GUARD:
        raise GuardExceeded(
            "ring-size", f"|{a.label} x {b.label}| exceeds guard {RING_SIZE_GUARD}"
        )
    ra, rb = a.rank, b.rank
    zero_a, zero_b = a.zero, b.zero
    table = []
    for i in range(ra + rb):
        row = []
        for j in range(ra + rb):
            if i < ra and j < ra:
                row.append(a.mul_table[i][j] + zero_b)
            elif i >= ra and j >= ra:
                row.append(zero_a + b.mul_table[i - ra][j - ra])
            else:
                row.append(zero_a + zero_b)
        table.append(row)
    return FiniteRing(
        list(a.additive_orders) + list(b.additive_orders),
        table,
        a.one + b.one,
        f"{a.label} x {b.label}",
    )


# -- quotients and factorization ------------------------------------------------


def quotient_ring(ring: FiniteRing, ideal: Ideal):
    """Cosets of an ideal, with induced operations.

    Returns ``(quotient, project, lift)`` where project/lift translate
    between ring elements and quotient coordinates.
    """
    if ideal.ring is not ring:
        raise ValueError("ideal belongs to a different ring")
    addgens = [
        ring.mul(ring.basis(i), g) for g in ideal.generators for i in range(ring.rank)
    ]
    qorders, project, lift = abelian_quotient(ring.additive_orders, addgens)
    if not qorders:
        raise ValueError("quotient by the unit ideal is the zero ring")
    t = len(qorders)

    def unit(j):
        return tuple(1 if i == j else 0 for i in range(t))

    table = [
        [project(ring.mul(lift(unit(i)), lift(unit(j)))) for j in range(t)]
        for i in range(t)
    ]
    label = f"({ring.label})/<{','.join(str(g) for g in ideal.generators)}>"
    q = FiniteRing(qorders, table, project(ring.one), label)
    return q, project, lift


@dataclass(frozen=True)
class LocalFactorization:
    ring: FiniteRing
    idempotents: tuple  # primitive idempotents, sorted by coordinates
    factors: tuple  # FiniteRing, one per idempotent, each local
    projections: tuple  # callables ring coords -> factor coords
    lifts: tuple  # sections of the projections
    maximal_ideal_masks: tuple  # pullback of each factor's maximal ideal

    def iso_forward(self, x):
        return tuple(p(x) for p in self.projections)

    def iso_backward(self, ys):
        r = self.ring
        acc = r.zero
        for e, lift, y in zip(self.idempotents, self.lifts, ys):
            acc = r.add(acc, r.mul(e, lift(y)))
        return acc


def local_factorization(ring: FiniteRing) -> LocalFactorization:
    """Decompose as a product of local rings via primitive idempotents."""
    idems = [x for x in ring.elements if ring.mul(x, x) == x]
    nonzero = [e for e in idems if e != ring.zero]
    primitive = sorted(
        e
        for e in nonzero
        if not any(f != e and ring.mul(e, f) == f for f in nonzero)
    )
    # sanity: pairwise orthogonal and summing to 1
    acc = ring.zero
    for i, e in enumerate(primitive):
        acc = ring.add(acc, e)
        for f in primitive[i + 1 :]:
            if ring.mul(e, f) != ring.zero:
                raise AssertionError("primitive idempotents not orthogonal")
    if acc != ring.one:
        raise AssertionError("primitive idempotents do not sum to 1")

    factors, projections, lifts, ideal_masks = [], [], [], []
    for e in primitive:
        complement = ideal_generated(ring, [ring.sub(ring.one, e)])
        factor, proj, lift = quotient_ring(ring, complement)
        non_units = [x for x in factor.elements if not factor.is_unit(x)]
        _assert_is_ideal(factor, non_units)
        mask = 0
        for i, x in enumerate(ring.elements):
            if not factor.is_unit(proj(x)):
                mask |= 1 << i
        factors.append(factor)
        projections.append(proj)
        lifts.append(lift)
        ideal_masks.append(mask)

    size_product = reduce(lambda a, b: a * b, (f.size for f in factors), 1)
    if size_product != ring.size:
        raise AssertionError("factor sizes do not multiply to |R|")
    lf = LocalFactorization(
        ring,
        tuple(primitive),
        tuple(factors),
        tuple(projections),
        tuple(lifts),
        tuple(ideal_masks),
    )
    for x in ring.elements:
        if lf.iso_backward(lf.iso_forward(x)) != x:
            raise AssertionError("factorization maps do not invert each other")
    return lf


def _assert_is_ideal(ring, subset):
    s = set(subset)
    for x in subset:
        for i in range(ring.rank):
            if ring.mul(ring.basis(i), x) not in s:
                raise AssertionError(f"{ring.label}: non-units not action-closed")
        for y in subset:
            if ring.add(x, y) not in s:
                raise AssertionError(f"{ring.label}: non-units not additively closed")


def maximal_ideals(ring: FiniteRing) -> list:
    """All maximal ideals, via the local factorization.

    Each result is verified: the quotient by it is a field.
    """
    lf = local_factorization(ring)
    out = []
    seen = set()
    for mask in lf.maximal_ideal_masks:
        if mask in seen:
            continue
        seen.add(mask)
        members = [i for i in range(ring.size) if mask >> i & 1]
        gens = minimal_generators(ring, members)
        ideal = Ideal(ring, mask, gens)
        field, _, _ = quotient_ring(ring, ideal)
        if len(field.units()) != field.size - 1:
            raise AssertionError("quotient by a maximal ideal is not a field")
        out.append(ideal)
    out.sort(key=lambda i: i.members)
    return out
