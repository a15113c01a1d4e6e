import random
from math import isqrt

import pytest

from polaramp import (
    ENRIQUES_LATTICE,
    Clause,
    Lattice,
    NotBigError,
    NotNefError,
    ViolatorType,
    WitnessKind,
    WrongSurfaceKind,
    is_ample_enriques,
    is_k_spanned_enriques,
    is_k_very_ample_enriques,
    is_nef_enriques,
    max_k_enriques,
    phi,
    validate_surface,
)
from polaramp.enumeration import classes_with_degree_and_square


def vec(e, f, *rest):
    return (e, f) + tuple(rest) + (0,) * (8 - len(rest))


H = vec(1, 1)
UNNODAL = validate_surface(None, "enriques", H)
A1 = vec(0, 0, 1)


def random_enriques_class(rng, square=None):
    """Random a e + b f + v with v in E8(-1) and positive square."""
    while True:
        v = tuple(rng.randint(-2, 2) for _ in range(8))
        v_sq = ENRIQUES_LATTICE.square((0, 0) + v)
        need = (square if square is not None else 2 * rng.randint(1, 12)) - v_sq
        if need <= 0 or need % 2:
            continue
        half = need // 2
        divisors = [d for d in range(1, half + 1) if half % d == 0]
        a = rng.choice(divisors)
        return (a, half // a) + v


def reflect(x, r):
    # reflection in a (-2)-class: x -> x + (x.r) r
    t = ENRIQUES_LATTICE.pair(x, r)
    return tuple(a + t * b for a, b in zip(x, r))


# -- examples ---------------------------------------------------------------


def test_phi_examples():
    assert phi(UNNODAL, vec(2, 2)) == 2
    assert phi(UNNODAL, vec(1, 1)) == 1
    assert phi(UNNODAL, vec(3, 3)) == 3


def test_kva_examples():
    v = is_k_very_ample_enriques(UNNODAL, vec(2, 2), 1)
    assert v.answer is False and v.clause is Clause.VIOLATOR_FOUND
    w = v.witness
    assert w.kind is WitnessKind.NON_NEG_SQUARE and w.D == vec(0, 1)
    assert w.D_sq == 0 and w.DL == 2 and w.failing_degree == 2
    assert is_k_very_ample_enriques(UNNODAL, vec(2, 2), 0).answer
    assert is_k_spanned_enriques(UNNODAL, vec(2, 2), 1) == v


def test_max_k_examples():
    r = max_k_enriques(UNNODAL, vec(2, 2))
    assert (r.phi, r.k_max, r.violator_type) == (2, 0, ViolatorType.ISOTROPIC_II)
    assert r.witness.failing_degree == r.k_max + 2
    assert r.annotation == (ViolatorType.DOUBLE_III, vec(1, 1))
    assert max_k_enriques(UNNODAL, vec(3, 3)).k_max == 1
    assert max_k_enriques(UNNODAL, vec(4, 4)).annotation is None  # D^2 = 8
    # D = 2e + 2f + a1 + a2 has D^2 = 4 and phi(D) = 2, so 2D first fails at k = 3
    D = vec(2, 2, 1, 1)
    r = max_k_enriques(UNNODAL, tuple(2 * a for a in D))
    assert (r.phi, r.k_max) == (4, 2)
    assert r.annotation == (ViolatorType.DOUBLE_IV, D)


def test_nodal_tie():
    h = vec(2, 2, -1)
    s = validate_surface(None, "enriques", h, [A1])
    L = vec(2, 2)
    assert s.pair(A1, L) == 0
    r = max_k_enriques(s, L)
    assert r.k_max == 0 and r.violator_type is ViolatorType.NODAL_I
    assert r.witness.D == A1 and r.witness.kind is WitnessKind.NEG_TWO_CURVE
    assert r.witness.failing_degree == 2
    v = is_k_very_ample_enriques(s, L, 1)
    assert v.answer is False and v.witness.D == A1
    assert is_nef_enriques(s, L).answer
    a = is_ample_enriques(s, L)
    assert a.answer is False and a.witness.D == A1


def test_not_nef_against_nodal_curve():
    h = vec(2, 2, -1)
    s = validate_surface(None, "enriques", h, [A1])
    L = vec(2, 2, 1)
    assert s.pair(A1, L) == -2 and s.square(L) > 0
    v = is_nef_enriques(s, L)
    assert v.answer is False and v.clause is Clause.NOT_NEF
    with pytest.raises(NotNefError):
        phi(s, L)


def test_preconditions():
    with pytest.raises(NotBigError):
        phi(UNNODAL, vec(1, 0))
    with pytest.raises(NotBigError):
        phi(UNNODAL, vec(-1, -1))
    quartic = validate_surface(Lattice.from_rows([[4]]), "k3", (1,))
    with pytest.raises(WrongSurfaceKind):
        phi(quartic, (1,))
    with pytest.raises(WrongSurfaceKind):
        max_k_enriques(quartic, (1,))
    with pytest.raises(ValueError):
        is_k_very_ample_enriques(UNNODAL, vec(1, 1), -1)


# -- properties ---------------------------------------------------------------


def random_law_set(count=200, seed=17):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        k = 1 + i % 5
        out.append((k, random_enriques_class(rng, 4 * k + 4)))
    return out


def test_square_4k_plus_4_is_never_k_very_ample():
    for k, L in random_law_set():
        assert UNNODAL.square(L) == 4 * k + 4 and UNNODAL.degree(L) > 0
        assert is_k_very_ample_enriques(UNNODAL, L, k).answer is False


def test_phi_bound_and_fibre():
    for _, L in random_law_set(60, seed=4):
        p = phi(UNNODAL, L)
        assert 1 <= p <= isqrt(UNNODAL.square(L))
        fibres = classes_with_degree_and_square(UNNODAL, L, p, 0, positive=True)
        assert fibres and all(UNNODAL.square(f) == 0 for f in fibres)
        for c in range(1, p):
            assert classes_with_degree_and_square(UNNODAL, L, c, 0, positive=True) == []


def test_kmax_consistent_with_kva():
    rng = random.Random(8)
    for _ in range(40):
        L = random_enriques_class(rng)
        r = max_k_enriques(UNNODAL, L)
        assert r.k_max == r.phi - 2
        for k in range(0, r.k_max + 1):
            assert is_k_very_ample_enriques(UNNODAL, L, k).answer
        assert is_k_very_ample_enriques(UNNODAL, L, r.k_max + 1).answer is False
        assert r.witness.failing_degree == r.k_max + 2


def test_monotone_in_k_with_nodal_data():
    rng = random.Random(21)
    # roots of the E8 summand
    roots = [r for r in classes_with_degree_and_square(ENRIQUES_LATTICE, vec(1, 1), 0, -2) if r[:2] == (0, 0)]
    assert len(roots) == 240
    done = 0
    while done < 30:
        h = random_enriques_class(rng)
        nodal = [g if ENRIQUES_LATTICE.pair(g, h) > 0 else tuple(-a for a in g) for g in rng.sample(roots, 2)]
        if any(ENRIQUES_LATTICE.pair(g, h) == 0 for g in nodal):
            continue
        s = validate_surface(None, "enriques", h, nodal)
        L = random_enriques_class(rng)
        if s.degree(L) <= 0 or not is_nef_enriques(s, L):
            continue
        done += 1
        answers = [is_k_very_ample_enriques(s, L, k).answer for k in range(8)]
        assert all(answers[i] or not answers[i + 1] for i in range(7))
        r = max_k_enriques(s, L)
        assert answers[: r.k_max + 1] == [True] * (r.k_max + 1)
        assert answers[r.k_max + 1] is False
        expected = min(min(s.pair(g, L) for g in nodal), r.phi - 2)
        assert r.k_max == expected


def test_invariance_under_reflections():
    rng = random.Random(33)
    roots = classes_with_degree_and_square(ENRIQUES_LATTICE, vec(1, 1), 0, -2)
    for _ in range(25):
        L = random_enriques_class(rng)
        r = rng.choice(roots)
        L2, h2 = reflect(L, r), reflect(H, r)
        s2 = validate_surface(None, "enriques", h2)
        assert ENRIQUES_LATTICE.square(L2) == ENRIQUES_LATTICE.square(L)
        a, b = max_k_enriques(UNNODAL, L), max_k_enriques(s2, L2)
        assert (a.phi, a.k_max, a.violator_type) == (b.phi, b.k_max, b.violator_type)


def test_invariance_under_isometries_with_nodal_data():
    rng = random.Random(44)
    roots = [r for r in classes_with_degree_and_square(ENRIQUES_LATTICE, vec(1, 1), 0, -2)]
    h = vec(2, 2, -1)
    s = validate_surface(None, "enriques", h, [A1])
    checked = 0
    while checked < 20:
        L = random_enriques_class(rng)
        if not is_nef_enriques(s, L):
            continue
        checked += 1
        r = rng.choice(roots)
        s2 = validate_surface(None, "enriques", reflect(h, r), [reflect(A1, r)])
        L2 = reflect(L, r)
        for k in range(4):
            a, b = is_k_very_ample_enriques(s, L, k), is_k_very_ample_enriques(s2, L2, k)
            assert (a.answer, a.clause) == (b.answer, b.clause)
            if a.witness is not None:
                assert (a.witness.D_sq, a.witness.DL, a.witness.kind) == (b.witness.D_sq, b.witness.DL, b.witness.kind)
        ra, rb = max_k_enriques(s, L), max_k_enriques(s2, L2)
        assert (ra.phi, ra.k_max, ra.violator_type) == (rb.phi, rb.k_max, rb.violator_type)
