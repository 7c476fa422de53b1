import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcover.rings import (
    ideal_generated,
    local_factorization,
    maximal_ideals,
    quotient_ring,
    ring_gf,
    ring_product,
    ring_zmod,
    smallest_irreducible,
    zero_ideal,
)


def prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


# -- Z/n ----------------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(n=st.integers(2, 60), a=st.integers(0, 200), b=st.integers(0, 200))
def test_zmod_matches_integer_arithmetic(n, a, b):
    R = ring_zmod(n)
    x, y = ((a % n,), (b % n,))
    assert R.add(x, y) == ((a + b) % n,)
    assert R.mul(x, y) == ((a * b) % n,)
    assert R.sub(x, y) == ((a - b) % n,)
    assert R.neg(x) == ((-a) % n,)


@pytest.mark.parametrize("n", [2, 3, 4, 6, 8, 12, 30, 64])
def test_zmod_units_count_is_euler_phi(n):
    assert len(ring_zmod(n).units()) == euler_phi(n)


@pytest.mark.parametrize("n", range(2, 40))
def test_zmod_maximal_ideals_are_prime_divisors(n):
    # independent oracle: maximal ideals of Z/n are pZ/n for primes p | n
    R = ring_zmod(n)
    ideals = maximal_ideals(R)
    got = sorted((i.size, i.residue_size) for i in ideals)
    want = sorted((n // p, p) for p in prime_factors(n))
    assert got == want
    for i in ideals:
        members = {x[0] for x in i.member_elements()}
        p = i.residue_size
        assert members == {k for k in range(n) if k % p == 0}


def test_zmod_rejects_degenerate_moduli():
    for n in (0, 1, -2):
        with pytest.raises(ValueError):
            ring_zmod(n)


def test_ring_size_guard():
    from modcover.errors import GuardExceeded

    with pytest.raises((GuardExceeded, ValueError)):
        ring_zmod(5000)


# -- finite fields -----------------------------------------------------------


def test_smallest_irreducible_gf4():
    # lexicographically smallest monic irreducible of degree 2 over F_2
    assert tuple(smallest_irreducible(2, 2)) == (1, 1, 1)  # x^2 + x + 1


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 2)])
def test_gf_is_a_field(p, k):
    F = ring_gf(p, k)
    q = p**k
    assert F.size == q
    assert len(F.units()) == q - 1
    ideals = maximal_ideals(F)
    assert len(ideals) == 1 and ideals[0].size == 1 and ideals[0].residue_size == q
    # multiplicative group is closed and has no zero divisors
    for x in F.elements:
        for y in F.elements:
            if x != F.zero and y != F.zero:
                assert F.mul(x, y) != F.zero


def test_gf4_generator_squares_to_x_plus_one():
    F = ring_gf(2, 2)
    x = (0, 1)
    assert F.mul(x, x) == (1, 1)


def test_gf_rejects_reducible_polynomial():
    with pytest.raises(ValueError):
        ring_gf(2, 2, (0, 0, 1))  # x^2 is reducible


def test_gf_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        ring_gf(4, 1)


def test_gf_custom_polynomial_label_round_trips():
    from modcover.dsl import parse_ring

    F = ring_gf(2, 3, (1, 1, 0, 1))  # x^3 + x + 1
    assert parse_ring(F.label).label == F.label


# -- products and CRT ---------------------------------------------------------


def test_product_maximal_ideals_come_from_factors():
    R = ring_product(ring_zmod(4), ring_zmod(9))
    got = sorted(i.residue_size for i in maximal_ideals(R))
    assert got == [2, 3]


def test_crt_z6_matches_f2_times_f3():
    A = ring_zmod(6)
    B = ring_product(ring_zmod(2), ring_zmod(3))
    fa = sorted((i.size, i.residue_size) for i in maximal_ideals(A))
    fb = sorted((i.size, i.residue_size) for i in maximal_ideals(B))
    assert fa == fb
    assert len(A.units()) == len(B.units())


def test_product_componentwise_ops():
    A, B = ring_zmod(3), ring_gf(2, 2)
    R = ring_product(A, B)
    for xa, xb in itertools.product(A.elements, B.elements):
        for ya, yb in itertools.product(A.elements[:2], B.elements[:2]):
            x = xa + xb
            y = ya + yb
            assert R.mul(x, y) == A.mul(xa, ya) + B.mul(xb, yb)


# -- element-level axioms (basis-level checks extend bilinearly; this is belt
#    and suspenders on small rings) --------------------------------------------


@pytest.mark.parametrize(
    "make",
    [
        lambda: ring_zmod(12),
        lambda: ring_gf(2, 2),
        lambda: ring_gf(3, 2),
        lambda: ring_product(ring_zmod(4), ring_zmod(3)),
        lambda: ring_product(ring_gf(2, 2), ring_zmod(2)),
    ],
)
def test_exhaustive_ring_axioms(make):
    R = make()
    assert R.size <= 64
    elems = R.elements
    for x in elems:
        assert R.mul(R.one, x) == x
        assert R.mul(x, R.zero) == R.zero
    for x, y in itertools.product(elems, repeat=2):
        assert R.mul(x, y) == R.mul(y, x)
    for x, y, z in itertools.product(elems, repeat=3):
        assert R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))
        assert R.mul(x, R.add(y, z)) == R.add(R.mul(x, y), R.mul(x, z))


# -- ideals and quotients -------------------------------------------------------


def test_ideal_generated_brute_force_oracle():
    # oracle: I = {r*g1 + s*g2 : r, s in R} for small rings
    R = ring_zmod(12)
    for g1 in R.elements:
        I = ideal_generated(R, [g1])
        want = {R.mul(r, g1) for r in R.elements}
        assert set(I.member_elements()) == want


def test_zero_ideal_is_zero():
    R = ring_zmod(6)
    assert zero_ideal(R).size == 1


def test_quotient_of_z12_by_4_is_z4():
    R = ring_zmod(12)
    I = ideal_generated(R, [(4,)])
    Q, project, lift = quotient_ring(R, I)
    assert Q.size == 4
    assert Q.additive_orders == (4,)
    # projection is a ring homomorphism
    for x in R.elements:
        for y in R.elements:
            assert project(R.mul(x, y)) == Q.mul(project(x), project(y))
            assert project(R.add(x, y)) == Q.add(project(x), project(y))
    assert project(R.one) == Q.one
    for c in Q.elements:
        assert project(lift(c)) == c


def test_quotient_by_unit_ideal_rejected():
    R = ring_zmod(6)
    I = ideal_generated(R, [R.one])
    with pytest.raises(ValueError):
        quotient_ring(R, I)


# -- local factorization ----------------------------------------------------------


@pytest.mark.parametrize("n", [12, 30, 8, 36, 49])
def test_local_factorization_of_zmod(n):
    R = ring_zmod(n)
    lf = local_factorization(R)
    sizes = sorted(f.size for f in lf.factors)
    want = sorted(p ** prime_power(n, p) for p in prime_factors(n))
    assert sizes == want
    # idempotents are orthogonal and sum to 1
    total = R.zero
    for e in lf.idempotents:
        assert R.mul(e, e) == e
        total = R.add(total, e)
    assert total == R.one
    # round trip through the factorization
    for x in R.elements:
        assert lf.iso_backward(lf.iso_forward(x)) == x


def prime_power(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def test_maximal_ideals_of_gf_product():
    R = ring_product(ring_gf(2, 2), ring_gf(3))
    got = sorted(i.residue_size for i in maximal_ideals(R))
    assert got == [3, 4]


# -- independent lattice oracle and global identities ------------------------------


def brute_ideal_masks(R):
    """Subset-filter oracle: subsets containing 0, closed under
    subtraction and multiplication by every ring element."""
    assert R.size <= 16
    elems = R.elements
    zero_idx = R.index_of(R.zero)
    out = set()
    for bits in range(1 << R.size):
        if not bits >> zero_idx & 1:
            continue
        members = [i for i in range(R.size) if bits >> i & 1]
        ok = True
        for i in members:
            for j in members:
                if not bits >> R.index_of(R.sub(elems[i], elems[j])) & 1:
                    ok = False
                    break
            if not ok:
                break
            for r in elems:
                if not bits >> R.index_of(R.mul(r, elems[i])) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(bits)
    return out


@pytest.mark.parametrize(
    "make",
    [
        lambda: ring_zmod(12),
        lambda: ring_zmod(16),
        lambda: ring_gf(2, 2),
        lambda: ring_gf(2, 3),
        lambda: ring_product(ring_zmod(2), ring_zmod(2)),
        lambda: ring_product(ring_zmod(2), ring_zmod(4)),
        lambda: ring_product(ring_zmod(3), ring_zmod(5)),
    ],
)
def test_maximal_ideals_against_subset_filter_oracle(make):
    R = make()
    lattice = brute_ideal_masks(R)
    full = (1 << R.size) - 1
    proper = [m for m in lattice if m != full]
    maximal = {
        m for m in proper if not any(m != t and m & ~t == 0 for t in proper)
    }
    assert {i.members for i in maximal_ideals(R)} == maximal


@pytest.mark.parametrize(
    "make",
    [
        lambda: ring_zmod(12),
        lambda: ring_zmod(30),
        lambda: ring_gf(3, 2),
        lambda: ring_product(ring_zmod(4), ring_gf(2, 2)),
    ],
)
def test_union_of_maximal_ideals_is_the_non_units(make):
    R = make()
    in_some_ideal = set()
    for i in maximal_ideals(R):
        in_some_ideal.update(i.member_elements())
    non_units = set(R.elements) - R.units()
    assert in_some_ideal == non_units


def test_crt_explicit_isomorphism_z6_to_f2_times_f3():
    R = ring_zmod(6)
    P = ring_product(ring_zmod(2), ring_zmod(3))

    def phi(x):
        return (x[0] % 2, x[0] % 3)

    images = {phi(x) for x in R.elements}
    assert len(images) == 6  # bijective
    for x in R.elements:
        for y in R.elements:
            assert phi(R.add(x, y)) == P.add(phi(x), phi(y))
            assert phi(R.mul(x, y)) == P.mul(phi(x), phi(y))
    assert phi(R.one) == P.one


def test_local_factorization_idempotents_of_z6():
    lf = local_factorization(ring_zmod(6))
    assert sorted(e[0] for e in lf.idempotents) == [3, 4]


def test_local_factorization_of_local_ring_is_trivial():
    lf = local_factorization(ring_zmod(8))
    assert len(lf.factors) == 1
    assert lf.idempotents == ((1,),)


@pytest.mark.parametrize(
    "n,want",
    [(8, {1, 3, 5, 7}), (12, {1, 5, 7, 11}), (6, {1, 5})],
)
def test_unit_sets(n, want):
    assert {u[0] for u in ring_zmod(n).units()} == want


def test_quotient_by_zero_ideal_is_the_ring():
    R = ring_zmod(12)
    Q, project, lift = quotient_ring(R, zero_ideal(R))
    assert Q.size == R.size
    seen = {project(x) for x in R.elements}
    assert len(seen) == R.size
