import pytest

from grouprank.genset import GeneratingSequence, is_generating, is_irredundant
from grouprank.oracle import (
    OracleCapError,
    brute_class_ranks,
    brute_i,
    brute_m,
    closure_elements,
    construct,
    rank_report,
    subgroup_lattice,
)

def nu(n):
    count = 0
    p = 2
    while p * p <= n:
        if n % p == 0:
            count += 1
            while n % p == 0:
                n //= p
        p += 1
    return count + (1 if n > 1 else 0)


class TestConstruct:
    @pytest.mark.parametrize("spec,order", [
        ("cyclic(7)", 7),
        ("cyclic(1)", 1),
        ("symmetric(5)", 120),
        ("alternating(5)", 60),
        ("alternating(6)", 360),
        ("dihedral(12)", 12),
        ("dihedral(4)", 4),
        ("product(cyclic(2),cyclic(3))", 6),
        ("product(symmetric(3),symmetric(3))", 36),
        ("product(product(cyclic(2),cyclic(2)),cyclic(3))", 12),
    ])
    def test_orders(self, spec, order):
        assert construct(spec).order() == order

    @pytest.mark.parametrize("spec", [
        "cyclic", "cyclic(x)", "frobnicate(3)", "dihedral(7)",
        "product(cyclic(2))", "alternating(2)",
    ])
    def test_malformed_specs(self, spec):
        with pytest.raises(ValueError):
            construct(spec)

    def test_product_acts_on_disjoint_union(self):
        g = construct("product(cyclic(2),cyclic(3))")
        assert g.degree == 5


class TestBruteRanks:
    def test_s4(self):
        assert brute_m(construct("symmetric(4)"))[0] == 3
        assert brute_i(construct("symmetric(4)"))[0] == 3

    def test_a4(self):
        assert brute_m(construct("alternating(4)"))[0] == 2

    def test_z12(self):
        assert brute_m(construct("cyclic(12)"))[0] == 2

    def test_zp(self):
        assert brute_i(construct("cyclic(7)"))[0] == 1

    def test_witnesses_verify_under_main_predicates(self):
        g = construct("symmetric(4)")
        m, wit = brute_m(g)
        seq = GeneratingSequence(g, wit)
        assert is_irredundant(seq) and is_generating(seq)
        i, wit_i = brute_i(g)
        assert is_irredundant(GeneratingSequence(g, wit_i))
        assert m <= i

    def test_cap_is_hard_error(self, m11):
        with pytest.raises(OracleCapError):
            brute_m(m11)


class TestWhistonLaw:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_symmetric(self, n):
        assert brute_m(construct(f"symmetric({n})"))[0] == n - 1
        assert brute_i(construct(f"symmetric({n})"))[0] == n - 1

    @pytest.mark.parametrize("n", [4, 5])
    def test_alternating(self, n):
        assert brute_m(construct(f"alternating({n})"))[0] == n - 2
        assert brute_i(construct(f"alternating({n})"))[0] == n - 2


class TestCyclicLaw:
    def test_nu_law_up_to_60(self):
        for n in range(2, 61):
            g = construct(f"cyclic({n})")
            expected = nu(n)
            assert brute_m(g)[0] == expected, n
            assert brute_i(g)[0] == expected, n


class TestAdditivity:
    PAIRS = [
        ("cyclic(2)", "cyclic(3)"),
        ("cyclic(2)", "cyclic(2)"),
        ("cyclic(4)", "cyclic(6)"),
        ("cyclic(8)", "cyclic(5)"),
        ("symmetric(3)", "cyclic(2)"),
        ("symmetric(3)", "cyclic(5)"),
        ("symmetric(3)", "symmetric(3)"),
        ("dihedral(6)", "cyclic(4)"),
        ("dihedral(8)", "cyclic(3)"),
        ("dihedral(10)", "cyclic(2)"),
        ("dihedral(12)", "cyclic(7)"),
        ("cyclic(6)", "cyclic(6)"),
    ]

    @pytest.mark.parametrize("a,b", PAIRS)
    def test_m_and_i_add(self, a, b):
        ga, gb = construct(a), construct(b)
        prod = construct(f"product({a},{b})")
        assert prod.order() <= 400
        assert brute_m(prod)[0] == brute_m(ga)[0] + brute_m(gb)[0]
        assert brute_i(prod)[0] == brute_i(ga)[0] + brute_i(gb)[0]


class TestSubgroupCharacterization:
    @pytest.mark.parametrize("spec", [
        "symmetric(4)", "alternating(4)", "dihedral(16)", "dihedral(20)",
        "cyclic(24)", "cyclic(60)", "product(cyclic(2),symmetric(3))",
        "product(cyclic(2),cyclic(4))", "symmetric(3)",
        "product(cyclic(3),cyclic(3))",
    ])
    def test_i_is_max_subgroup_m(self, spec):
        g = construct(spec)
        assert g.order() <= 100
        i = brute_i(g)[0]
        best = max(brute_m(sub)[0] for sub, _ in subgroup_lattice(g))
        assert i == best

    @pytest.mark.parametrize("spec", ["dihedral(16)", "symmetric(4)",
                                      "cyclic(30)"])
    def test_i_monotone_under_subgroups(self, spec):
        g = construct(spec)
        i_g = brute_i(g)[0]
        for sub, _ in subgroup_lattice(g):
            assert brute_i(sub)[0] <= i_g


class TestTarskiDensity:
    @pytest.mark.parametrize("spec", [
        "symmetric(4)", "symmetric(5)", "alternating(5)", "dihedral(12)",
        "cyclic(30)", "product(cyclic(2),symmetric(3))",
    ])
    def test_every_size_between_min_and_m_realized(self, spec):
        report = rank_report(construct(spec))
        sizes = report.generating_sizes
        assert sizes
        low, high = min(sizes), max(sizes)
        assert high == report.m
        assert sizes == frozenset(range(low, high + 1))


class TestClassRanks:
    def test_transpositions_of_s4(self):
        s4 = construct("symmetric(4)")
        transpositions = [p for p in s4.elements()
                          if p.order() == 2 and len(p.cycles()) == 1]
        assert len(transpositions) == 6
        (m, wit), (i, _) = brute_class_ranks(s4, transpositions)
        assert m == 3
        assert all(w in transpositions for w in wit)

    def test_class_rank_bounded_by_group_rank(self):
        s4 = construct("symmetric(4)")
        m_s4 = brute_m(s4)[0]
        i_s4 = brute_i(s4)[0]
        for cls in s4.conjugacy_classes():
            if cls.element_order == 1:
                continue
            (mc, _), (ic, _) = brute_class_ranks(s4, cls.elements())
            assert mc <= m_s4
            assert ic <= i_s4

    def test_identity_class_rank_zero(self):
        s4 = construct("symmetric(4)")
        from grouprank.permcore import identity
        (mc, _), (ic, _) = brute_class_ranks(s4, [identity(4)])
        assert (mc, ic) == (0, 0)


class TestSubgroupLattice:
    def test_z6(self):
        lat = subgroup_lattice(construct("cyclic(6)"))
        assert sorted(sub.order() for sub, _ in lat) == [1, 2, 3, 6]

    def test_klein(self):
        assert len(subgroup_lattice(construct("dihedral(4)"))) == 5

    def test_s4_count_against_independent_enumeration(self):
        from grouprank.permcore import Permutation
        s4 = construct("symmetric(4)")
        lat = subgroup_lattice(s4)
        assert len(lat) == 30
        # independent route: close the set of subgroups under adjoining one
        # element at a time, starting from the trivial subgroup
        elems = closure_elements(s4.generators, 4)
        subgroups = {frozenset([tuple(range(4))])}
        frontier = list(subgroups)
        while frontier:
            new = []
            for sub in frontier:
                for e in elems:
                    if e in sub:
                        continue
                    gens = [Permutation(list(t)) for t in sub] + [Permutation(e)]
                    key = frozenset(closure_elements(gens, 4))
                    if key not in subgroups:
                        subgroups.add(key)
                        new.append(key)
            frontier = new
        assert len(subgroups) == 30

    def test_maximal_flags_s4(self):
        lat = subgroup_lattice(construct("symmetric(4)"))
        maxima = sorted(sub.order() for sub, mx in lat if mx)
        assert maxima == [6, 6, 6, 6, 8, 8, 8, 12]


class TestClosureElements:
    def test_m11_closure_count(self, m11):
        assert len(closure_elements(m11.generators, 11)) == 7920

    def test_cap(self, m12):
        with pytest.raises(OracleCapError):
            closure_elements(m12.generators, 12, cap=1000)
