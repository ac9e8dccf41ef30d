"""Windowed admissibility, extendability and the closure operations."""

import itertools

import pytest

from groupshift import (
    Alphabet,
    BlockCode,
    FiniteFamily,
    FreeAbelianGroup,
    MalformedInputError,
    Pattern,
    SubshiftSpec,
    UndeterminedError,
    apply_block_code,
    ball,
    builtin_one_or_less,
    extendable,
    factor_window_admissible,
    free_abelian_group,
    free_group,
    identity_block_code,
    intersect,
    locally_admissible,
    projective_window_admissible,
    translate_pattern,
    union_window_admissible,
)

BITS = Alphabet(("0", "1"))


@pytest.fixture(scope="module")
def zline():
    return FreeAbelianGroup(1, names=["a"])


def cells(group, *words):
    return [group.element(group.parse_word(w)) for w in words]


def z_sft(group, *forbidden_words):
    """An SFT on the line forbidding the given 0/1 strings."""
    pats = []
    for s in forbidden_words:
        assignment = {}
        for i, ch in enumerate(s):
            assignment[group.element((1,) * i)] = int(ch)
        pats.append(Pattern(assignment))
    return SubshiftSpec(BITS, group, FiniteFamily(tuple(pats)))


def brute_force_extendable(pattern, spec, radius):
    """Oracle: enumerate every total assignment on the ball."""
    group = spec.group
    window = ball(group, radius).sorted_elements()
    fixed = dict(pattern.assignment)
    free = [c for c in window if c not in fixed]
    for values in itertools.product(range(len(spec.alphabet)), repeat=len(free)):
        total = dict(fixed)
        total.update(zip(free, values))
        if locally_admissible(Pattern(total), spec):
            return True
    return False


def test_one_or_less_examples(z2):
    spec = builtin_one_or_less(z2, 1)
    two_ones = Pattern({z2.identity: 1,
                        z2.element(z2.parse_word("x")): 1})
    assert not locally_admissible(two_ones, spec)
    zeros = Pattern({e: 0 for e in ball(z2, 3).elements})
    assert locally_admissible(zeros, spec)
    single = Pattern({z2.identity: 1})
    assert extendable(single, spec, 2)


def test_one_or_less_k3(z2):
    spec = builtin_one_or_less(z2, 3)
    p = Pattern({z2.identity: 2, z2.element(z2.parse_word("y")): 3})
    assert not locally_admissible(p, spec)


def test_extendable_examples(zline):
    no11 = z_sft(zline, "11")
    gap = Pattern({zline.element(zline.parse_word("a^-1")): 1,
                   zline.element(zline.parse_word("a")): 1})
    assert extendable(gap, no11, 1)
    assert brute_force_extendable(gap, no11, 1)

    hard = z_sft(zline, "0", "11")
    one = Pattern({zline.identity: 1})
    assert not extendable(one, hard, 1)
    assert not brute_force_extendable(one, hard, 1)


def test_extendable_budget_is_loud(zline):
    spec = z_sft(zline, "11")
    with pytest.raises(UndeterminedError):
        extendable(Pattern({}), spec, 3, budget=2)


def test_extendable_monotone(zline):
    spec = z_sft(zline, "11")
    p = Pattern({zline.identity: 1})
    bigger = Pattern({zline.identity: 1,
                      zline.element(zline.parse_word("a")): 0})
    assert extendable(bigger, spec, 1) <= extendable(p, spec, 1)


def test_extendable_implies_admissible(zline):
    # the converse fails: locally fine but not completable
    hard = z_sft(zline, "0", "11")
    one = Pattern({zline.identity: 1})
    assert locally_admissible(one, hard)
    assert not extendable(one, hard, 1)


def test_admissibility_translation_invariant(z2):
    spec = builtin_one_or_less(z2, 1)
    p = Pattern({z2.identity: 1, z2.element(z2.parse_word("x y")): 1})
    for w in ("x", "y^-1", "x x"):
        q = translate_pattern(z2, p, z2.element(z2.parse_word(w)))
        assert locally_admissible(p, spec) == locally_admissible(q, spec)


def test_intersect_is_conjunction(zline):
    a = z_sft(zline, "11")
    b = z_sft(zline, "00")
    both = intersect(a, b)
    p = Pattern({zline.identity: 1, zline.element((1,)): 1})
    q = Pattern({zline.identity: 0, zline.element((1,)): 0})
    ok = Pattern({zline.identity: 0, zline.element((1,)): 1})
    for pat in (p, q, ok):
        assert locally_admissible(pat, both) == (
            locally_admissible(pat, a) and locally_admissible(pat, b))
    # X meets the full shift is X on small windows
    full = z_sft(zline)
    meet = intersect(a, full)
    for pat in (p, q, ok):
        assert locally_admissible(pat, meet) == locally_admissible(pat, a)


def test_intersect_rejects_mismatch(zline, z2):
    a = z_sft(zline, "11")
    other = builtin_one_or_less(z2, 1)
    with pytest.raises(MalformedInputError):
        intersect(a, other)


def test_union_window(zline):
    only0 = z_sft(zline, "1")
    only1 = z_sft(zline, "0")
    zero = Pattern({zline.identity: 0})
    both = Pattern({zline.identity: 0, zline.element((1,)): 1})
    assert union_window_admissible(zero, only0, only1, 1)
    assert not union_window_admissible(both, only0, only1, 1)
    assert union_window_admissible(Pattern({}), only0, only1, 1)


def test_apply_block_code_identity(zline):
    code = identity_block_code(zline, 2)
    p = Pattern({zline.identity: 1, zline.element((1,)): 0})
    assert apply_block_code(p, code) == p


def test_apply_block_code_xor(zline):
    window = (zline.identity, zline.element((1,)))
    code = BlockCode(zline, window, lambda v: v[0] ^ v[1], 2, 2)
    p = Pattern({zline.element((1,) * i): b for i, b in enumerate((0, 1, 1, 0))})
    out = apply_block_code(p, code)
    got = [out[zline.element((1,) * i)] for i in range(3)]
    assert got == [1, 0, 1]
    assert len(out) == 3


def test_apply_block_code_window_too_big(zline):
    window = tuple(zline.element((1,) * i) for i in range(5))
    code = BlockCode(zline, window, lambda v: v[0], 2, 2)
    p = Pattern({zline.identity: 1})
    assert len(apply_block_code(p, code)) == 0


def test_factor_window_identity_code(zline):
    spec = z_sft(zline, "11")
    code = identity_block_code(zline, 2)
    p = Pattern({zline.identity: 1})
    assert factor_window_admissible(p, spec, code, 1) == extendable(p, spec, 1)


def test_factor_window_constant_code(zline):
    full = z_sft(zline)
    code = BlockCode(zline, (zline.identity,), lambda v: 0, 2, 2)
    y = Pattern({zline.identity: 1})
    assert not factor_window_admissible(y, full, code, 1)


def test_factor_window_renaming(zline):
    spec = z_sft(zline, "11")
    code = identity_block_code(zline, 2)  # 0->0 ("a"), 1->1 ("b")
    y = Pattern({zline.identity: 1, zline.element((1,)): 1})
    assert not factor_window_admissible(y, spec, code, 1)


def test_projective_window(z2):
    zline = FreeAbelianGroup(1, names=["t"])
    embedding = {1: z2.parse_word("x"), 2: z2.parse_word("x^-1")}
    full = SubshiftSpec(BITS, z2, FiniteFamily(()))
    y = Pattern({zline.identity: 1, zline.element((1,)): 1})
    assert projective_window_admissible(y, zline, embedding, full, 2)

    # forbid two horizontally adjacent 1s in the plane
    forbid = Pattern({z2.identity: 1, z2.element(z2.parse_word("x")): 1})
    spec = SubshiftSpec(BITS, z2, FiniteFamily((forbid,)))
    assert not projective_window_admissible(y, zline, embedding, spec, 2)


def test_projective_identity_embedding(z2):
    embedding = {i: (i,) for i in z2.nonidentity_ids}
    spec = builtin_one_or_less(z2, 1)
    p = Pattern({z2.identity: 1})
    assert projective_window_admissible(p, z2, embedding, spec, 1) == \
        extendable(p, spec, 1)


def test_block_code_commutes_with_translation(zline):
    window = (zline.identity, zline.element((1,)))
    code = BlockCode(zline, window, lambda v: v[0] ^ v[1], 2, 2)
    p = Pattern({zline.element((1,) * i): b for i, b in enumerate((0, 1, 1, 0, 1))})
    g = zline.element(zline.parse_word("a a"))
    lhs = apply_block_code(translate_pattern(zline, p, g), code)
    rhs = translate_pattern(zline, apply_block_code(p, code), g)
    assert lhs == rhs


def test_generated_family_monotone(z2):
    spec = builtin_one_or_less(z2, 1)
    small = {frozenset(p.assignment.items())
             for p in spec.forbidden.patterns_up_to(z2, 1)}
    big = {frozenset(p.assignment.items())
           for p in spec.forbidden.patterns_up_to(z2, 2)}
    assert small <= big


def test_generator_radius_budget(z2):
    from groupshift.subshifts import GeneratorBudgetError
    spec = builtin_one_or_less(z2, 1)
    with pytest.raises(GeneratorBudgetError):
        spec.forbidden.patterns_up_to(z2, 1000)
