import pytest

from quadsys.bounds import lower_bound
from quadsys.errors import ContextMismatch, NoZeroFoundBelowGuarantee, SearchSpaceTooLarge
from quadsys.oracle import ResidueSearchSpec, all_primitive_zeros, certify_anisotropic
from quadsys.padic import FieldContext
from quadsys.qform import FormSystem, QuadraticForm
from quadsys.solver import solve_system
from quadsys.witness import (
    anisotropic_quaternary,
    block_witness,
    direct_sum,
    evidence_level,
    quaternary_coefficients,
)


def test_quaternary_examples():
    assert quaternary_coefficients(3) == [1, -2, -3, 6]
    assert quaternary_coefficients(5) == [1, -2, -5, 10]
    assert quaternary_coefficients(2) == [1, 1, 1, 1]
    assert quaternary_coefficients(7) == [1, -3, -7, 21]


@pytest.mark.parametrize("p,k", [(3, 3), (5, 2), (2, 3), (7, 2)])
def test_quaternary_anisotropic_by_oracle(p, k):
    ev = certify_anisotropic(anisotropic_quaternary(p), k)
    assert ev["found"] is None and ev["modulus"] == p**k


def test_squares_mod_8():
    assert {x * x % 8 for x in range(8)} == {0, 1, 4}


def test_direct_sum_examples():
    ctx = FieldContext(3)
    q = FormSystem([anisotropic_quaternary(ctx)], ctx)
    qq = direct_sum(q, q)
    assert (qq.t, qq.n) == (2, 8)
    G0, G1 = (f.exact_gram() for f in qq.forms)
    assert all(G0[i][j] == 0 for i in range(8) for j in range(8) if i >= 4 or j >= 4)
    assert all(G1[i][j] == 0 for i in range(8) for j in range(8) if i < 4 or j < 4)
    same = direct_sum(q, FormSystem.empty(ctx))
    assert same.n == 4 and same.forms[0].exact_gram() == q.forms[0].exact_gram()
    with pytest.raises(ContextMismatch):
        direct_sum(q, FormSystem([anisotropic_quaternary(5)], FieldContext(5)))


def test_direct_sum_associative():
    ctx = FieldContext(5)
    a = FormSystem([QuadraticForm.diagonal(ctx, [1, 2])], ctx)
    b = FormSystem([QuadraticForm.from_rationals(ctx, [[0, 1], [1, 3]])], ctx)
    c = FormSystem([QuadraticForm.diagonal(ctx, [7])], ctx)
    left = direct_sum(direct_sum(a, b), c)
    right = direct_sum(a, direct_sum(b, c))
    assert [f.exact_gram() for f in left.forms] == [f.exact_gram() for f in right.forms]


def test_direct_sum_zeros_project_to_blocks():
    ctx = FieldContext(3)
    a = FormSystem([QuadraticForm.diagonal(ctx, [1, -1])], ctx)
    b = FormSystem([QuadraticForm.diagonal(ctx, [1, 1])], ctx)
    s = direct_sum(a, b)
    za = set(all_primitive_zeros(ResidueSearchSpec.from_system(a, 2)))
    zb = set(all_primitive_zeros(ResidueSearchSpec.from_system(b, 2)))
    for z in all_primitive_zeros(ResidueSearchSpec.from_system(s, 2)):
        assert z[:2] in za or z[2:] in zb


def test_block_witness_examples():
    one = block_witness(1, 3)
    assert one.system.forms[0].exact_gram() == anisotropic_quaternary(3).exact_gram()
    two = block_witness(2, 3)
    assert (two.t, two.system.n) == (2, 8)
    for i, block in two.blocks:
        G = two.system.forms[i].exact_gram()
        sub = [row[block.start:block.stop] for row in G[block.start:block.stop]]
        certify_anisotropic(sub, 3, p=3)
    three = block_witness(3, 5)
    assert (three.t, three.system.n) == (3, lower_bound(3, 4).value)


@pytest.mark.parametrize("t,p", [(1, 3), (2, 3), (3, 3), (2, 5), (2, 2)])
def test_witness_properties(t, p):
    w = block_witness(t, p)
    assert w.system.n == lower_bound(t, 4).value
    assert len(w.anisotropy_evidence) == t
    assert all(ev["found"] is None for ev in w.anisotropy_evidence)
    with pytest.raises(NoZeroFoundBelowGuarantee):
        solve_system(w.system)


def test_evidence_level():
    assert evidence_level(3) == 3
    assert evidence_level(5) == 2
    assert evidence_level(2) == 3
    with pytest.raises(SearchSpaceTooLarge):
        block_witness(1, 61)
    assert block_witness(1, 61, certify=False).anisotropy_evidence == []


def test_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        block_witness(0, 3)
