"""Weyl group machinery: dominance conjugation, words, coset reps."""

import itertools
from fractions import Fraction as Q

import pytest

from liecheck.cases import get_case
from liecheck.rootdata import (
    RootSystem,
    coroot_pairing,
    norm_sq,
    vadd,
    vec,
)
from liecheck.weyl import (
    apply_word,
    longest_element,
    matrix_apply,
    minimal_coset_reps,
    orbit,
    parabolic_longest,
    to_dominant,
    word_length,
    word_matrix,
)

B2 = RootSystem.from_simples([vec(1, -1), vec(0, 1)])
A3 = RootSystem.from_simples([vec(1, -1, 0, 0), vec(0, 1, -1, 0), vec(0, 0, 1, -1)])


def is_dominant(v, system):
    return all(coroot_pairing(v, a) >= 0 for a in system.simple_roots)


def test_to_dominant_fixes_dominant():
    v = vec(3, 1)
    dom, word = to_dominant(v, B2)
    assert dom == v and word == ()


def test_to_dominant_produces_dominant_orbit_member():
    for v in [vec(-3, 2), vec(0, -5), vec(Q(1, 2), Q(-7, 2))]:
        dom, word = to_dominant(v, B2)
        assert is_dominant(dom, B2)
        assert norm_sq(dom) == norm_sq(v)
        # the reported word conjugates v to its dominant form
        assert apply_word(word, v, B2) == dom


def test_to_dominant_constant_on_orbit():
    v = vec(4, 1)
    for w in orbit(v, B2):
        dom, _ = to_dominant(w, B2)
        assert dom == v
    assert len(orbit(v, B2)) == 8


def test_apply_word_composes_right_to_left():
    # word (i, j) acts as s_i after s_j
    v = vec(2, -1)
    one_then_zero = apply_word((0, 1), v, B2)
    step = apply_word((1,), v, B2)
    assert apply_word((0,), step, B2) == one_then_zero


def test_word_matrix_agrees_with_apply():
    word = (0, 1, 0, 1)
    cols = word_matrix(word, B2)
    for v in [vec(1, 0), vec(0, 1), vec(Q(3, 2), Q(-5, 2))]:
        assert matrix_apply(cols, v) == apply_word(word, v, B2)


def test_word_length_counts_inversions():
    assert word_length((), B2) == 0
    assert word_length((0,), B2) == 1
    assert word_length((0, 0), B2) == 0
    w0 = longest_element(B2)
    assert word_length(w0, B2) == len(B2.positive_roots)


def test_longest_element_negates_chamber():
    for system in (B2, A3):
        w0 = longest_element(system)
        assert len(w0) == len(system.positive_roots)
        rho = system.half_positive_sum()
        image = apply_word(w0, rho, system)
        assert is_dominant(vec(*(-c for c in image)), system)
        assert all(
            coroot_pairing(image, a) <= 0 for a in system.simple_roots
        )


def test_parabolic_longest_stays_in_subgroup():
    for omit in range(A3.rank):
        word = parabolic_longest(A3, omit)
        assert omit not in word
        kept = [a for i, a in enumerate(A3.simple_roots) if i != omit]
        sub = RootSystem.from_simples(kept)
        assert word_length(word, A3) == len(sub.positive_roots)
        # it inverts the sub-chamber: every kept simple root goes negative
        for alpha in kept:
            image = apply_word(word, alpha, A3)
            assert sub.is_positive_root(vec(*(-c for c in image)))


def test_minimal_coset_reps_small():
    # B2 over its long-root A1 subsystem: index |W(B2)| / |W(A1)| = 4
    sub = RootSystem.from_simples([vec(1, -1)])
    reps = minimal_coset_reps(B2, sub)
    assert len(reps) == 4
    assert () in reps
    matrices = {word_matrix(w, B2) for w in reps}
    assert len(matrices) == len(reps)
    rho = B2.half_positive_sum()
    for word in reps:
        image = apply_word(word, rho, B2)
        assert coroot_pairing(image, vec(1, -1)) > 0


def test_minimal_reps_map_chamber_into_sub_chamber():
    case = get_case("G")
    rho = case.g_restricted.half_positive_sum()
    for word in case.w1:
        image = apply_word(word, rho, case.g_restricted)
        assert all(
            coroot_pairing(image, gamma) > 0
            for gamma in case.k_system.simple_roots
        )


def test_reduced_words_identity_telescopes():
    """Telescoping positive-root expansion of rho - w(rho).

    For any reduced word s_{d1}...s_{dn} in simple reflections,
    rho - s_{d1}...s_{dn}(rho) equals the sum of s_{d1}...s_{d(k-1)}(d_k),
    each summand a positive root, each coroot pairing against rho exactly 1.
    """
    system = B2
    rho = system.half_positive_sum()
    for n in range(0, 5):
        for letters in itertools.product(range(system.rank), repeat=n):
            if word_length(letters, system) != n:
                continue
            image = apply_word(letters, rho, system)
            assert norm_sq(image) == norm_sq(rho)
            total = vec(*([0] * system.ambient_dim))
            for k in range(n):
                prefix = letters[:k]
                summand = apply_word(prefix, system.simple_roots[letters[k]], system)
                assert system.is_positive_root(summand)
                assert coroot_pairing(rho, system.simple_roots[letters[k]]) == 1
                total = vadd(total, summand)
            assert vadd(image, total) == rho
