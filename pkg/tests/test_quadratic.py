import io
import math
import random

import pytest

from irrcensus.errors import DomainError, ResourceLimitError
from irrcensus.quadratic import (
    QuadForm,
    class_group,
    compose,
    form_pow,
    principal_form,
    prime_sites_up_to,
    reduce_form,
    reduced_forms,
    sites_to_csv,
    splitting_type,
)

from helpers import kronecker


def test_validation_rejects_bad_d():
    with pytest.raises(DomainError):
        class_group(5)
    with pytest.raises(DomainError):
        class_group(-12)  # not squarefree
    with pytest.raises(DomainError):
        class_group(0)
    with pytest.raises(ResourceLimitError):
        class_group(-(10**7 + 3))


def test_class_group_minus5():
    cg = class_group(-5)
    assert cg.field.discriminant == -20
    assert cg.field.w == 2
    assert {(f.a, f.b, f.c) for f in cg.forms} == {(1, 0, 5), (2, 2, 3)}
    assert cg.group.invariant_factors == (2,)
    assert cg.class_index[QuadForm(1, 0, 5)] == 1
    assert cg.class_index[QuadForm(2, 2, 3)] == 2


def test_class_group_minus1():
    cg = class_group(-1)
    assert cg.field.discriminant == -4
    assert cg.field.w == 4
    assert [(f.a, f.b, f.c) for f in cg.forms] == [(1, 0, 1)]
    assert cg.group.invariant_factors == ()


def test_class_group_minus23():
    cg = class_group(-23)
    assert cg.field.discriminant == -23
    assert {(f.a, f.b, f.c) for f in cg.forms} == {(1, 1, 6), (2, 1, 3), (2, -1, 3)}
    assert cg.group.invariant_factors == (3,)
    # the two nonprincipal classes are inverse to each other
    i1 = cg.class_index[QuadForm(2, 1, 3)]
    i2 = cg.class_index[QuadForm(2, -1, 3)]
    assert {i1, i2} == {2, 3}


KNOWN_CLASS_NUMBERS = {
    -1: 1, -2: 1, -3: 1, -7: 1, -11: 1, -19: 1, -43: 1, -67: 1, -163: 1,
    -5: 2, -6: 2, -10: 2, -13: 2, -15: 2,
    -23: 3, -31: 3,
    -14: 4, -21: 4, -30: 4, -39: 4,
    -47: 5,
    -26: 6,
    -71: 7,
}


@pytest.mark.parametrize("d,h", sorted(KNOWN_CLASS_NUMBERS.items()))
def test_known_class_numbers(d, h):
    cg = class_group(d)
    assert cg.field.h == h
    assert cg.group.h == h


def test_known_group_structures():
    assert class_group(-14).group.invariant_factors == (4,)
    assert class_group(-21).group.invariant_factors == (2, 2)
    assert class_group(-30).group.invariant_factors == (2, 2)
    assert class_group(-26).group.invariant_factors == (6,)
    assert class_group(-65).group.h == 8


def test_reduction_example():
    # the norm-7 site form above d=-5
    assert reduce_form(7, 6, 2) == QuadForm(2, 2, 3)
    assert reduce_form(1, 2, 6) == QuadForm(1, 0, 5)
    with pytest.raises(DomainError):
        reduce_form(-1, 0, 5)
    with pytest.raises(DomainError):
        reduce_form(1, 5, 2)  # positive discriminant


def test_composition_basics():
    cg = class_group(-5)
    e = principal_form(-20)
    f = QuadForm(2, 2, 3)
    assert compose(e, e) == e
    assert compose(e, f) == f
    assert compose(f, f) == e  # the ramified class has order 2


@pytest.mark.parametrize("d", [-5, -23, -14, -21, -26, -47, -71, -1003, -2003])
def test_group_table_is_a_group(d):
    cg = class_group(d)
    forms = cg.forms
    h = len(forms)
    rng = random.Random(12345)
    sample = forms if h <= 12 else [forms[rng.randrange(h)] for _ in range(12)]
    # closure under composition, Latin-square rows, inverse behavior
    for f in sample:
        row = [compose(f, g) for g in forms]
        assert set(row) == set(forms)
        assert compose(f, f.inverse()) == cg.identity_form
    # homomorphism onto canonical coordinates
    ordering = cg.ordering
    for _ in range(60):
        f = forms[rng.randrange(h)]
        g = forms[rng.randrange(h)]
        lhs = cg.coordinates[compose(f, g)]
        rhs = ordering.add(cg.coordinates[f], cg.coordinates[g])
        assert lhs == rhs


def test_form_orders_divide_h():
    cg = class_group(-47)
    for f in cg.forms:
        assert form_pow(f, cg.field.h, cg.identity_form) == cg.identity_form


def test_splitting_examples():
    field = class_group(-5).field
    assert splitting_type(field, 2) == "ramified"
    assert splitting_type(field, 3) == "split"
    assert splitting_type(field, 5) == "ramified"
    assert splitting_type(field, 11) == "inert"
    with pytest.raises(DomainError):
        splitting_type(field, 9)


def test_splitting_matches_kronecker():
    field = class_group(-23).field
    from irrcensus.primes import primes_up_to

    for p in primes_up_to(200):
        expected = kronecker(field.discriminant, p)
        got = splitting_type(field, p)
        assert got == {1: "split", -1: "inert", 0: "ramified"}[expected]


def test_sites_minus5_to_10():
    cg = class_group(-5)
    sites = list(prime_sites_up_to(cg, 10))
    assert [s.norm for s in sites] == [2, 3, 3, 5, 7, 7]
    assert [s.splitting for s in sites] == [
        "ramified", "split", "split", "ramified", "split", "split",
    ]
    assert [s.class_index for s in sites] == [2, 2, 2, 1, 2, 2]
    assert sites[1].conjugate_id == 2 and sites[2].conjugate_id == 1
    assert sites[0].conjugate_id == 0
    assert [s.id for s in sites] == list(range(6))


def test_sites_minus1_small():
    cg = class_group(-1)
    sites = list(prime_sites_up_to(cg, 5))
    assert [s.norm for s in sites] == [2, 5, 5]  # 3 is inert, norm 9 > 5
    assert all(s.class_index == 1 for s in sites)


def test_sites_minimal_bound():
    cg = class_group(-5)
    sites = list(prime_sites_up_to(cg, 2))
    assert len(sites) == 1 and sites[0].norm == 2
    with pytest.raises(DomainError):
        list(prime_sites_up_to(cg, 1))


def test_sites_include_inert_squares():
    cg = class_group(-5)
    sites = list(prime_sites_up_to(cg, 130))
    inert = [s for s in sites if s.splitting == "inert"]
    assert [s.norm for s in inert] == [121]  # 11 is inert, 11^2 <= 130
    assert all(s.class_index == 1 for s in inert)
    norms = [s.norm for s in sites]
    assert norms == sorted(norms)


def test_ramified_site_count_matches_disc():
    for d, expected in ((-5, 2), (-21, 3), (-1, 1), (-26, 2), (-30, 3)):
        cg = class_group(d)
        sites = list(prime_sites_up_to(cg, 300))
        ramified = [s for s in sites if s.splitting == "ramified"]
        disc_primes = set()
        m = -cg.field.discriminant
        p = 2
        while p * p <= m:
            while m % p == 0:
                disc_primes.add(p)
                m //= p
            p += 1
        if m > 1:
            disc_primes.add(m)
        assert len(ramified) == len(disc_primes) == expected


@pytest.mark.parametrize("d", [-5, -23])
def test_conjugate_sites_inverse_classes(d):
    cg = class_group(d)
    sites = list(prime_sites_up_to(cg, 10**5))
    by_id = {s.id: s for s in sites}
    neg = cg.ordering.neg_table()
    for s in sites:
        mate = by_id[s.conjugate_id]
        if s.splitting == "split":
            assert mate.p == s.p and mate.id != s.id
            assert neg[s.class_index - 1] + 1 == mate.class_index
        else:
            assert mate is s


def test_chebotarev_smoke_minus5():
    # classes receive equal shares of prime sites, within 2% relative at 1e6
    cg = class_group(-5)
    counts = [0, 0]
    total = 0
    for s in prime_sites_up_to(cg, 10**6):
        counts[s.class_index - 1] += 1
        total += 1
    for c in counts:
        assert abs(c * 2 / total - 1.0) < 0.02


def test_prefix_stability_of_ids():
    cg = class_group(-5)
    small = list(prime_sites_up_to(cg, 100))
    large = list(prime_sites_up_to(cg, 1000))
    assert small == large[: len(small)]


def test_sites_csv_golden():
    cg = class_group(-5)
    buf = io.StringIO()
    sites_to_csv(prime_sites_up_to(cg, 10), buf)
    assert buf.getvalue() == (
        "id,p,norm,splitting,class_index,conjugate_id\n"
        "0,2,2,ramified,2,0\n"
        "1,3,3,split,2,2\n"
        "2,3,3,split,2,1\n"
        "3,5,5,ramified,1,3\n"
        "4,7,7,split,2,5\n"
        "5,7,7,split,2,4\n"
    )


def test_reduced_forms_are_reduced_and_primitive():
    for d in (-5, -23, -47, -71):
        cg = class_group(d)
        for f in cg.forms:
            assert f.is_reduced()
            assert math.gcd(math.gcd(f.a, f.b), f.c) == 1
            assert f.discriminant == cg.field.discriminant
    assert reduced_forms(-20) == class_group(-5).forms


def test_psi_value_minus5():
    field = class_group(-5).field
    assert math.isclose(field.psi, math.pi / math.sqrt(20))
    assert field.psi_coefficient == 1  # 2/w with w=2
