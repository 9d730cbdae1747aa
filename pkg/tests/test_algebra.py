"""Fields, polynomials and the derived-polynomial toolkit."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krh.fields import QQ, CyclotomicField, rat
from krh.laurent import Laurent
from krh.poly import DivisionByZero, NEG_INF, NotDivisible, Poly, divide_exact
from krh.potential import LabelOutOfRange, Potential, gornik_f

from oracles import polynomial_long_division


def x(i, field=QQ):
    return Poly.var("x%d" % i, field)


class TestCyclotomic:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_primitive_root(self, n):
        F = CyclotomicField(n)
        z = F.zeta
        p = F.one
        for k in range(1, n):
            p = p * z
            assert p != F.one, (n, k)
        assert p * z == F.one

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_field_axioms_sampled(self, n):
        F = CyclotomicField(n)
        a = F.zeta + F.from_rational(rat(2, 3))
        b = F.zeta * F.zeta - F.one
        c = F.from_rational(rat(-5, 7))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        if b:
            assert (a / b) * b == a
        assert a * a.inverse() == F.one

    def test_rationals_embed(self):
        F = CyclotomicField(3)
        assert F.from_rational(2) + F.from_rational(3) == F.from_rational(5)
        assert F.from_rational(rat(1, 2)) * F.from_rational(2) == F.one


class TestPoly:
    def test_divide_exact_geometric(self):
        q = divide_exact(x(1) ** 3 - x(2) ** 3, x(1) - x(2))
        assert q == x(1) ** 2 + x(1) * x(2) + x(2) ** 2

    def test_divide_by_one(self):
        f = x(1) * x(2) + x(3) ** 2
        assert divide_exact(f, Poly.const(1)) == f

    def test_divide_exact_against_long_division_oracle(self):
        # ((x1+x2)^2 - (x3+x4)^2) / (x1+x2-x3-x4) = x1+x2+x3+x4,
        # cross-checked by substituting single-variable slices u, v and
        # running classical long division.
        f = (x(1) + x(2)) ** 2 - (x(3) + x(4)) ** 2
        g = x(1) + x(2) - x(3) - x(4)
        q = divide_exact(f, g)
        assert q == x(1) + x(2) + x(3) + x(4)
        # oracle slice: x1=u, x2=0, x3=v=const, x4=0: f = u^2 - c^2 over u
        for c in (2, 5):
            fu = [Fraction(-c * c), 0, 1]        # u^2 - c^2
            gu = [Fraction(-c), 1]               # u - c
            qu, ru = polynomial_long_division(fu, gu)
            assert not ru and qu == [Fraction(c), Fraction(1)]
            got = q.substitute({"x1": Poly.var("u"), "x2": Poly.const(0),
                                "x3": Poly.const(c), "x4": Poly.const(0)})
            want = Poly.var("u") + Poly.const(c)
            assert got == want

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            divide_exact(x(1) ** 2 + 1, x(1) - x(2))

    def test_divide_by_zero(self):
        with pytest.raises(DivisionByZero):
            divide_exact(x(1), Poly.zero())

    def test_degree_conventions(self):
        assert Poly.zero().degree() == NEG_INF
        assert (x(1) ** 3).degree() == 6
        assert Poly.const(5).degree() == 0

    @given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 3),
           st.integers(0, 3))
    @settings(max_examples=60, deadline=None)
    def test_product_degree_additive(self, c1, c2, e1, e2):
        f = (x(1) ** e1).scale(rat(c1)) + x(2)
        g = (x(2) ** e2).scale(rat(c2)) + Poly.const(1)
        if f and g:
            assert (f * g).degree() == f.degree() + g.degree()

    def test_canonical_string(self):
        f = x(2) + x(1) ** 2 + Poly.const(3)
        assert str(f) == "x1^2 + x2 + 3"


class TestPotentialToolkit:
    def test_pi_values(self):
        p = Potential(2)  # x^3
        assert p.pi("x1", "x2") == x(1) ** 2 + x(1) * x(2) + x(2) ** 2
        assert p.pi("x1", "x1") == (x(1) ** 2).scale(rat(3))
        pg = Potential(2, {1: -3})
        assert pg.pi("x1", "x2") == \
            x(1) ** 2 + x(1) * x(2) + x(2) ** 2 - Poly.const(3)

    @pytest.mark.parametrize("pot", [Potential(2), Potential(3),
                                     Potential.gornik(3),
                                     Potential(3, {0: 1, 2: rat(1, 2)})])
    def test_pi_defining_identity(self, pot):
        lhs = (x(1) - x(2)) * pot.pi("x1", "x2")
        assert lhs == pot.at("x1") - pot.at("x2")
        assert pot.pi("x1", "x2").degree() == 2 * pot.n

    def test_sym2_matches_coefficient_oracle(self):
        # coefficient matching: expand g(x+y, xy) and compare with p(x)+p(y)
        for pot in (Potential(2), Potential(2, {1: -3}), Potential(3)):
            g = pot.sym2()
            lhs = g.substitute({"s": x(1) + x(2), "t": x(1) * x(2)})
            assert lhs == pot.at("x1") + pot.at("x2")
        assert Potential(2).sym2() == \
            Poly.var("s") ** 3 - (Poly.var("s") * Poly.var("t")).scale(rat(3))
        g2 = Potential(2, {1: -3}).sym2()
        s, t = Poly.var("s"), Poly.var("t")
        assert g2 == s ** 3 - (s * t).scale(rat(3)) - s.scale(rat(3))

    def test_sym2_x4_identity(self):
        pot = Potential(3)
        g = pot.sym2()
        assert g.substitute({"s": x(1) + x(2), "t": x(1) * x(2)}) \
            - pot.at("x1") - pot.at("x2") == Poly.zero()

    @pytest.mark.parametrize("pot", [Potential(2), Potential(2, {1: -3}),
                                     Potential(3)])
    def test_uv_identity_and_degrees(self, pot):
        u, v = pot.uv("x1", "x2", "x3", "x4")
        b1 = x(1) + x(2) - x(3) - x(4)
        b2 = x(1) * x(2) - x(3) * x(4)
        rhs = pot.at("x1") + pot.at("x2") - pot.at("x3") - pot.at("x4")
        assert u * b1 + v * b2 == rhs
        assert u.degree() == 2 * pot.n
        assert v.degree() == 2 * pot.n - 2

    def test_uv_x3_values(self):
        u, v = Potential(2).uv("x1", "x2", "x3", "x4")
        s, sp = x(1) + x(2), x(3) + x(4)
        assert u == s * s + s * sp + sp * sp - (x(1) * x(2)).scale(rat(3))
        assert v == (x(3) + x(4)).scale(rat(-3))

    @pytest.mark.parametrize("n", [2, 3])
    def test_gornik_v1212(self, n):
        pot = Potential.gornik(n)
        _, v = pot.uv("x1", "x2", "x1", "x2")
        expect = Poly.zero()
        for l in range(n):
            expect = expect + (x(1) ** (n - 1 - l) * x(2) ** l).scale(
                rat(-(n + 1)))
        assert v == expect

    @pytest.mark.parametrize("n", [2, 3])
    def test_gornik_e_coeff(self, n):
        e = Potential.gornik(n).e3("x1", "x2", "x3")
        expect = Poly.zero()
        for a in range(n):
            for b in range(n - a):
                c = n - 1 - a - b
                expect = expect + (x(1) ** a * x(2) ** b
                                   * x(3) ** c).scale(rat(1, 2))
        assert e == expect

    def test_e_coeff_repeated_markings(self):
        # -2(e_112 + e_122) = -(d pi_12/dx1 + d pi_12/dx2)
        pot = Potential(2)
        e112 = pot.e3("x1", "x1", "x2")
        e122 = pot.e3("x1", "x2", "x2")
        pi12 = pot.pi("x1", "x2")
        lhs = (e112 + e122).scale(rat(-2))
        rhs = -(pi12.derivative("x1") + pi12.derivative("x2"))
        assert lhs == rhs

    def test_e_coeff_cyclic_symmetry(self):
        pot = Potential(3)  # x^4
        a = pot.e3("x1", "x2", "x3")
        b = pot.e3("x2", "x3", "x1")
        c = pot.e3("x3", "x1", "x2")
        assert a == b == c

    @pytest.mark.parametrize("pot", [Potential(2), Potential.gornik(3)])
    def test_sym3_rows(self, pot):
        rows = pot.sym3_rows(["x4", "x5", "x6"], ["x1", "x2", "x3"])
        total = Poly.zero()
        for a, b in rows:
            total = total + a * b
        rhs = (pot.at("x4") + pot.at("x5") + pot.at("x6")
               - pot.at("x1") - pot.at("x2") - pot.at("x3"))
        assert total == rhs
        # the b rows are the elementary symmetric differences
        assert rows[0][1] == x(4) + x(5) + x(6) - x(1) - x(2) - x(3)
        e2o = x(4) * x(5) + x(5) * x(6) + x(6) * x(4)
        e2i = x(1) * x(2) + x(2) * x(3) + x(3) * x(1)
        assert rows[1][1] == e2o - e2i
        assert rows[2][1] == x(4) * x(5) * x(6) - x(1) * x(2) * x(3)

    def test_sym3_h_for_cubic(self):
        h = Potential(2).sym3()
        s1, s2, s3 = (Poly.var(v) for v in ("s1", "s2", "s3"))
        assert h == s1 ** 3 - (s1 * s2).scale(rat(3)) + s3.scale(rat(3))


class TestGornikF:
    def test_small_values(self):
        assert gornik_f(2, 0) == Poly.const(1, CyclotomicField(2)) + \
            Poly.var("x", CyclotomicField(2))
        F = CyclotomicField(2)
        assert gornik_f(2, 1) == Poly.const(1, F) - Poly.var("x", F)

    def test_label_range(self):
        with pytest.raises(LabelOutOfRange):
            gornik_f(3, 3)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_eigenvector_orthogonality_sum(self, n):
        F = CyclotomicField(n)

        def modred(p):
            out = {}
            for m, c in p.terms.items():
                e = dict(m).get("x", 0) % n
                mm = (("x", e),) if e else ()
                out[mm] = out.get(mm, F.zero) + c
            return Poly(F, {k: v for k, v in out.items() if v})

        total = Poly.zero(F)
        for k in range(n):
            fk = gornik_f(n, k)
            total = total + fk
            # eigenvector: x f_k = zeta^k f_k mod x^n - 1
            assert modred(Poly.var("x", F) * fk) == fk.scale(F.zeta_power(k))
            for l in range(n):
                prod = modred(fk * gornik_f(n, l))
                if k == l:
                    assert prod == fk.scale(F.from_rational(n))
                else:
                    assert not prod
        assert total == Poly.const(n, F)


class TestLaurent:
    def test_quantum_integers(self):
        assert str(Laurent.quantum_integer(2)) == "q^-1 + q"
        assert Laurent.quantum_integer(3)(1) == 3
        assert Laurent.quantum_integer(0) == Laurent.zero()

    def test_ring_ops(self):
        a = Laurent.quantum_integer(2)
        assert a * a == Laurent({-2: 1, 0: 2, 2: 1})
        assert (a - a) == Laurent.zero()
        assert a.shift(3) == Laurent({2: 1, 4: 1})
