import random
from fractions import Fraction

import pytest

from qlmoments import cocycle as cc
from qlmoments.exactnum import KNum
from qlmoments.kacmoody import Root
from conftest import random_k, random_k_point

Q = 5


@pytest.fixture(scope="module")
def kctx():
    one = KNum.one(Q)
    return {
        "one": one,
        "half": KNum.rational(Fraction(1, 2), Q),
        "q": KNum.rational(Q, Q),
        "sq": KNum.sqrt_q(Q),
        "t": KNum.root4(Q),
    }


class TestAction:
    def test_single_letter_inverts_own_coordinate(self):
        z = (0.2 + 0.1j, 0.3, 0.4, 0.5, 0.6)
        out = cc.act_one(1, z, 5.0, 5**0.5)
        assert abs(out[0] - 1 / (5 * z[0])) < 1e-14
        assert out[1] == z[1] and out[2] == z[2]
        assert abs(out[4] - 5**0.5 * z[0] * z[4]) < 1e-14

    def test_involution(self, rng):
        z = tuple(complex(rng.uniform(0.2, 0.9), rng.uniform(-0.2, 0.2))
                  for _ in range(5))
        for i in (2, 5):
            back = cc.act_one(i, cc.act_one(i, z, 5.0, 5**0.5), 5.0, 5**0.5)
            assert max(abs(a - b) for a, b in zip(back, z)) < 1e-13

    def test_order_three_braid_action(self, rng):
        z = tuple(complex(rng.uniform(0.2, 0.9), rng.uniform(-0.2, 0.2))
                  for _ in range(5))
        word = (2, 5, 2, 5, 2, 5)
        out = cc.act_on_z(word, z, 5.0, 5**0.5)
        assert max(abs(a - b) for a, b in zip(out, z)) < 1e-12


class TestCocycleMatrix:
    def test_empty_word_is_identity(self, kctx):
        z = (kctx["one"],) * 4
        m = cc.cocycle_matrix((), z, kctx["q"], kctx["sq"], kctx["half"])
        assert m == cc.identity3(kctx["one"], kctx["one"] - kctx["one"])

    def test_single_letter_diagonal(self, kctx, rng):
        z = random_k_point(rng, 4)
        m = cc.cocycle_matrix((1,), z, kctx["q"], kctx["sq"], kctx["half"])
        u = z[0]
        q, sq = kctx["q"], kctx["sq"]
        assert m[0][0] == -(1 - q * u) / (q * u * (1 - u))
        assert m[1][1] == 1 / (sq * u)
        assert m[2][2] == (1 + q * u) / (q * u * (1 + u))
        assert m[0][1] == m[1][0] == KNum.zero(Q)

    def test_diagonal_inverse_closed_form(self, kctx, rng):
        # the inverse of a single-letter matrix for letters 1..r
        z = random_k_point(rng, 4)
        m = cc.cocycle_matrix((2,), z, kctx["q"], kctx["sq"], kctx["half"])
        inv = cc.mat_inv3(m)
        u = z[1]
        q, sq = kctx["q"], kctx["sq"]
        assert inv[0][0] == -q * u * (1 - u) / (1 - q * u)
        assert inv[1][1] == sq * u
        assert inv[2][2] == q * u * (1 + u) / (1 + q * u)

    @pytest.mark.parametrize("pair", [((1, 2), (2, 1)), ((3, 1), (1, 3))])
    def test_commuting_letters(self, kctx, rng, pair):
        for _ in range(20):
            z = random_k_point(rng, 5)
            a = cc.cocycle_matrix(pair[0], z, kctx["q"], kctx["sq"], kctx["half"])
            b = cc.cocycle_matrix(pair[1], z, kctx["q"], kctx["sq"], kctx["half"])
            assert a == b

    def test_braid_pair(self, kctx, rng):
        r = 4
        for _ in range(20):
            z = random_k_point(rng, r + 1)
            a = cc.cocycle_matrix((1, r + 1, 1), z, kctx["q"], kctx["sq"], kctx["half"])
            b = cc.cocycle_matrix((r + 1, 1, r + 1), z, kctx["q"], kctx["sq"], kctx["half"])
            assert a == b

    def test_inverse_law_single_letters(self, kctx, rng):
        ident = cc.identity3(kctx["one"], kctx["one"] - kctx["one"])
        for _ in range(20):
            z = random_k_point(rng, 4)
            for letter in (1, 3, 4):
                a = cc.cocycle_matrix((letter,), z, kctx["q"], kctx["sq"], kctx["half"])
                moved = cc.act_on_z((letter,), z, kctx["q"], kctx["sq"])
                b = cc.cocycle_matrix((letter,), moved, kctx["q"], kctx["sq"], kctx["half"])
                assert cc.mat_mul(a, b) == ident

    def test_complex_and_exact_agree(self, kctx, rng):
        z = random_k_point(rng, 4)
        zf = tuple(v.embed() for v in z)
        me = cc.cocycle_matrix((1, 2, 4), z, kctx["q"], kctx["sq"], kctx["half"])
        mf = cc.cocycle_matrix((1, 2, 4), zf, 5.0, 5**0.5, 0.5)
        for i in range(3):
            for j in range(3):
                assert abs(me[i][j].embed() - mf[i][j]) < 1e-10

    def test_singular_point_reports_letter(self, kctx):
        z = (KNum.one(Q), random_k(random.Random(0)), KNum.one(Q),
             random_k(random.Random(1)))
        with pytest.raises(cc.SingularPointError) as info:
            cc.cocycle_matrix((1,), z, kctx["q"], kctx["sq"], kctx["half"])
        assert info.value.letter == 1


class TestConstantMatrices:
    def test_u_squares_to_identity(self, kctx):
        u = cc.u_matrix(kctx["half"])
        one = kctx["one"]
        assert cc.mat_mul(u, u) == cc.identity3(one, one - one)

    def test_b_inverse(self, kctx):
        b = cc.b_matrix(kctx["half"])
        binv = cc.b_inverse_matrix(kctx["one"])
        one = kctx["one"]
        ident = cc.identity3(one, one - one)
        assert cc.mat_mul(b, binv) == ident
        assert cc.mat_mul(binv, b) == ident


class TestGamma:
    def test_identity_word_cases(self):
        alpha = Root((0, 0, 0, 0, 1))  # the last simple root, r = 4
        for a2 in (1, -1):
            for a, zeta_pow in ((1, 0), (1, 2), (-1, 1), (-1, 3)):
                zeta = KNum.fourth_root_of_unity(Q, zeta_pow)
                got = cc.gamma_factor_exact((), alpha, a2, a, zeta, Q)
                want = KNum.rational(1 if a2 == a else 0, Q)
                assert got == want

    def test_level_one_closed_form(self, rng):
        # the residue factor for level-one words splits into two products
        r = 4
        for _ in range(6):
            ks = [rng.randint(0, 1) for _ in range(r)]
            if not any(ks):
                continue
            alpha = Root(tuple(ks) + (1,))
            word = tuple(i + 1 for i in range(r) if ks[i])
            xi = random_k_point(rng, r)
            for a2 in (1, -1):
                for a in (1, -1):
                    zeta = KNum.rational(a, Q)
                    got = cc.gamma_factor_exact(word, alpha, a2, a, zeta, Q, xi)
                    sq = KNum.sqrt_q(Q)
                    half = KNum.rational(Fraction(1, 2), Q)
                    prod1 = KNum.one(Q)
                    prod2 = KNum.one(Q)
                    for i in range(r):
                        if ks[i]:
                            prod1 = prod1 * (1 - sq / xi[i]) / (1 - sq * xi[i])
                            prod2 = prod2 * xi[i].inv()
                    scaled = half * prod1 + half * a * a2 * prod2
                    want = (2 ** len(word)) * scaled
                    assert got == want

    def test_gamma_table_matches_closed_polynomials(self):
        for k in range(4):
            assert cc.gamma_table_entry(k, Q) == cc.gamma_table_polynomial(k, Q)

    def test_gamma_table_other_modulus(self):
        for k in (0, 1):
            assert cc.gamma_table_entry(k, 13) == cc.gamma_table_polynomial(k, 13)


class TestLocalData:
    def test_identity_word_row(self, kctx, rng):
        z = random_k_point(rng, 5)
        for chi in (1, -1):
            l1, l2, l3 = cc.local_coefficient_row((), z, kctx["q"], kctx["sq"],
                                                  chi, kctx["half"])
            assert l1 == KNum.rational(chi, Q)
            assert l2 == KNum.zero(Q)
            assert l3 == KNum.one(Q)

    def test_identity_word_local_factor_closed_form(self, rng):
        # S_p for the trivial word: (1 - 1/|p|)(1/|p| + half-sum of products)
        r = 3
        alpha = Root((0,) * r + (1,))
        q, sq, t = 5.0, 5**0.5, 5**0.25
        for e in (1, 2):
            xi = tuple(complex(rng.uniform(0.7, 1.3), rng.uniform(-0.2, 0.2))
                       for _ in range(r))
            for a in (1, -1):
                zeta = complex(a)
                got = cc.local_residue_factor((), alpha, xi, zeta, a, q, sq, t, e, 0.5)
                qe = q**e
                zk = [(x / sq) ** e for x in xi]
                pm = 1.0
                pp = 1.0
                for v in zk:
                    pm *= 1 - v
                    pp *= 1 + v
                want = (1 - 1 / qe) * (1 / qe + 0.5 / pm + 0.5 / pp)
                assert abs(got - want) < 1e-12 * abs(want)

    def test_level_one_factor_is_sign_flip(self, rng):
        # a level-one word flips its support coordinates xi -> 1/xi
        r = 3
        ks = (1, 0, 1)
        alpha = Root(ks + (1,))
        word = (1, 3)
        q, sq, t = 5.0, 5**0.5, 5**0.25
        xi = tuple(complex(rng.uniform(0.8, 1.2), rng.uniform(-0.1, 0.1))
                   for _ in range(r))
        flipped = tuple(1 / x if k else x for x, k in zip(xi, ks))
        trivial = Root((0,) * r + (1,))
        for a in (1, -1):
            zeta = complex(a)
            got = cc.local_residue_factor(word, alpha, xi, zeta, a, q, sq, t, 1, 0.5)
            want = cc.local_residue_factor((), trivial, flipped, zeta, a, q, sq, t, 1, 0.5)
            assert abs(got - want) < 1e-11 * abs(want)

    def test_residue_point_constraint(self, rng):
        # prod_i z_i^{k_i} * z_last^n = zeta^{-n} q^{-(d+1)/2}, exactly in K
        for ks, zeta_pow in (((1, 1, 1, 0, 2), 1), ((1, 0, 1, 1, 1), 0),
                             ((1, 1, 1, 2, 2), 3)):
            alpha = Root(ks)
            n = alpha.level
            zeta = KNum.fourth_root_of_unity(Q, zeta_pow)
            xi = random_k_point(rng, alpha.rank)
            qk = KNum.rational(Q, Q)
            z = cc.residue_point(alpha, xi, zeta, qk, KNum.sqrt_q(Q),
                                 KNum.root4(Q))
            prod = z[-1] ** n
            for v, k in zip(z[:-1], ks[:-1]):
                prod = prod * v**k
            want = zeta ** (-n) * KNum.root4(Q, -2 * (alpha.height + 1))
            assert prod == want
