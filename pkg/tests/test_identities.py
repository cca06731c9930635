from fractions import Fraction

import pytest

from operadlab.identities import (FOUR_TERM, NAMES, Certificate, builtin, combine, equiv3,
                                  implies3, orbit, orbit_span, span_of, verify_four_term)
from operadlab.magma import apply_permutation, to_row, var


def test_builtin_shapes():
    a, b, c = var(1), var(2), var(3)
    assert builtin("lwlei") == (a * b - b * a) * c - 2 * (a * (b * c)) + 2 * (b * (a * c))
    assert builtin("rwlei") == a * (b * c - c * b) - 2 * ((a * b) * c) + 2 * ((a * c) * b)
    assert builtin("anticomm").arity == 2
    with pytest.raises(KeyError):
        builtin("nope")


def test_orbit_span_dimensions():
    assert span_of(["lwlei", "rwlei"]).rank == 6
    assert span_of(["assoc"]).rank == 6
    assert span_of(["lieadm"]).rank == 1
    assert orbit_span([]).rank == 0
    assert len(orbit(builtin("lwlei"))) == 6


def test_alder_certificate_matches_known_combination():
    ok, cert = implies3(["lwlei", "rwlei"], "alder")
    assert ok
    assert sorted(cert.combination) == sorted([
        (Fraction(1), "lwlei", (1, 3, 2)),
        (Fraction(-1), "lwlei", (2, 3, 1)),
        (Fraction(-1), "rwlei", (1, 2, 3)),
        (Fraction(1), "rwlei", (2, 1, 3)),
    ])
    assert cert.verify()


def test_lieadm_certificate_thirds():
    ok, cert = implies3(["lwlei", "rwlei"], "lieadm")
    assert ok and cert.verify()
    assert {abs(c) for c, _, _ in cert.combination} == {Fraction(1, 3)}
    cyclic = [(1, 2, 3), (3, 1, 2), (2, 3, 1)]
    known = Certificate("lieadm", tuple(
        [(Fraction(1, 3), "lwlei", s) for s in cyclic] + [(Fraction(-1, 3), "rwlei", s) for s in cyclic]))
    assert known.verify()


def test_quarter_combinations_recover_wlei():
    q = Fraction(1, 4)
    lw = combine([(2 * q, "assadm", (2, 3, 1)), (2 * q, "lieadm", (1, 2, 3)),
                  (q, "alder", (1, 2, 3)), (q, "alder", (1, 3, 2)), (-q, "alder", (2, 3, 1))])
    rw = combine([(2 * q, "assadm", (1, 2, 3)), (2 * q, "assadm", (2, 3, 1)),
                  (-2 * q, "lieadm", (1, 2, 3)), (-q, "alder", (1, 2, 3)),
                  (q, "alder", (1, 3, 2)), (q, "alder", (2, 3, 1))])
    assert lw == builtin("lwlei")
    assert rw == builtin("rwlei")


def test_four_term_identity():
    assert len(FOUR_TERM) == 4
    assert verify_four_term()
    assert verify_four_term(Fraction(-7, 3))


@pytest.mark.parametrize("goal", ["assadm", "lieadm", "alder", "lalia", "ralia"])
def test_consequences_of_wlei(goal):
    ok, cert = implies3(["lwlei", "rwlei"], goal)
    assert ok and cert.verify()


def test_not_poisson_admissible():
    ok, cert = implies3(["lwlei", "rwlei"], "pder")
    assert not ok and cert is None
    assert to_row(builtin("pder")) not in span_of(["lwlei", "rwlei"])


def test_equivalences():
    assert equiv3(["lwlei", "rwlei"], ["lwlei", "alder"])
    assert equiv3(["lwlei", "rwlei"], ["rwlei", "alder"])
    assert equiv3(["lwlei", "rwlei"], ["lieadm", "assadm", "alder"])
    assert not equiv3(["lwlei"], ["rwlei"])
    assert not equiv3(["lwlei", "rwlei"], ["assoc"])


def test_one_sided_is_weaker():
    assert not implies3(["lwlei"], "rwlei")[0]
    assert not implies3(["lieadm", "assadm"], "lwlei")[0]


def test_certificate_json_round_trip():
    _, cert = implies3(["lwlei", "rwlei"], "lieadm")
    data = cert.to_json()
    assert all(isinstance(t["coefficient"], str) for t in data["combination"])
    back = Certificate.from_json(data)
    assert back == cert and back.verify()


def test_certificate_format():
    _, cert = implies3(["lwlei", "rwlei"], "alder")
    assert cert.format() == ("alder(t1,t2,t3) = lwlei(t1,t3,t2) - lwlei(t2,t3,t1)"
                             " - rwlei(t1,t2,t3) + rwlei(t2,t1,t3)")


def test_names_are_all_buildable():
    for n in NAMES:
        p = builtin(n)
        assert p.is_standard
        assert apply_permutation(p, tuple(range(1, p.arity + 1))) == p
