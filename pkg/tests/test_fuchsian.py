import itertools
from dataclasses import replace
from fractions import Fraction
from types import SimpleNamespace

import pytest

import oracles
from fuchsq.construct import ConstructionInput, construct_group
from fuchsq.exactnum import squarefree_mul
from fuchsq.fuchsian import (
    ElementType,
    GroupElement,
    NoWitness,
    classify_matrix,
    fixes_boundary_point,
    not_cusp_certificate,
    psl_kernel,
    reduce_word,
    word_element,
)
from fuchsq.minkowski import INF, apply, boundary_to_vector, vector_to_boundary

F = Fraction


def test_reduce_word_cancels_involutions():
    assert reduce_word((1, 2, 2, 1, 3)) == (3,)
    assert reduce_word((0, 0)) == ()


def test_generators_are_involutions(golden):
    for g in golden.generators:
        e = GroupElement.generator(g) * GroupElement.generator(g)
        assert e.word == () and e.proj == GroupElement.identity().proj


def test_classification_by_trace():
    one, zero = F(1), F(0)
    assert classify_matrix(((one, one), (zero, one))) is ElementType.PARABOLIC
    assert classify_matrix(((F(2), zero), (zero, one))) is ElementType.HYPERBOLIC
    assert classify_matrix(((zero, -one), (one, zero))) is ElementType.ELLIPTIC
    assert classify_matrix(((one, zero), (zero, one))) is ElementType.IDENTITY


@pytest.mark.parametrize("word", [(1,), (1, 2), (0, 3, 1), (2, 0, 1, 3), (3, 2, 1, 0)])
def test_both_models_act_alike_on_the_boundary(golden, word):
    g = word_element(golden.generators, word)
    for r in (F(0), F(-5, 3), F(7, 2), INF):
        lor = vector_to_boundary(apply(g.lorentz, boundary_to_vector(r)))
        mob = oracles.mobius(g.proj, None if r is INF else r)
        assert (lor is INF and mob is None) or lor == mob


def test_hyperbolic_witness_fixes_y(golden):
    cert = not_cusp_certificate(golden, 2)
    assert cert.validate()
    assert fixes_boundary_point(cert.witness, F(2))
    with pytest.raises(NoWitness):
        not_cusp_certificate(golden, 1)


def _relabel(b, classes):
    return SimpleNamespace(generators=tuple(replace(g, det_class=c)
                                            for g, c in zip(b.generators, classes)))


def test_trivial_labels_give_index_one(golden):
    k = psl_kernel(_relabel(golden, [1, 1, 1, 1]))
    assert k.index == 1 and k.transversal == ((),)
    assert sorted(g.word for g in k.generators) == [(0,), (1,), (2,), (3,)]


def test_index_two_transversal_and_generators(golden):
    k = psl_kernel(_relabel(golden, [1, 3, 1, 1]))
    assert k.index == 2 and k.transversal == ((), (1,))
    words = {g.word for g in k.generators}
    assert {(2,), (3,), (0,), (1, 2, 1), (1, 3, 1), (1, 0, 1)} <= words


def test_golden_kernel_has_index_four(golden):
    k = psl_kernel(golden)
    assert k.index == 4
    assert all(g.det_class == 1 for g in k.generators)


def _rewrite(word, reps, classes):
    """Reidemeister rewriting of a kernel word into Schreier generators."""
    coset, factors = 1, []
    for j in word:
        nxt = squarefree_mul(coset, classes[j])
        factors.append(reduce_word(reps[coset] + (j,) + tuple(reversed(reps[nxt]))))
        coset = nxt
    return coset, [f for f in factors if f]


def test_schreier_generators_generate_the_kernel(golden):
    k = psl_kernel(golden)
    classes = {g.index: g.det_class for g in golden.generators}
    reps = dict(zip(k.image, k.transversal))
    gens = {g.word for g in k.generators}
    n_kernel = 0
    for length in range(1, 6):
        for word in itertools.product(range(4), repeat=length):
            word = reduce_word(word)
            end, factors = _rewrite(word, reps, classes)
            if end != 1:
                continue
            n_kernel += 1
            assert all(f in gens for f in factors)
            assert reduce_word(sum(factors, ())) == word
    assert n_kernel > 50


def test_kernel_labels_are_gf2_rank():
    b = construct_group(ConstructionInput.make([0, 1], 3, v0=-2))
    assert [g.det_class for g in b.generators] == [3, 3, 1, 1]
    assert psl_kernel(b).index == 2
