import pytest

from grouprank.bounds import (
    GroupTable,
    SubgroupClassRecord,
    SubgroupFamily,
    TableFormatError,
    flatness_verdict,
    gen_pos_inequality_check,
    general_position,
    intersection,
    max_dim,
    parse_table,
    propagate_bounds,
    rad,
    rad_characterization_check,
    replacement_property,
)
from grouprank.catalog import shipped_certificates, shipped_table
from grouprank.genset import GeneratingSequence
from grouprank.oracle import brute_i, brute_m, construct, subgroup_lattice
from grouprank.permcore import PermGroup, parse_cycles
from grouprank.search import maximal_overgroup


def cert_of(name):
    return next(c for c in shipped_certificates() if c.group_name == name)


def overgroup_family(group, seq):
    members = [maximal_overgroup(group, seq.deleted(i))
               for i in range(len(seq))]
    return SubgroupFamily(parent=group, members=tuple(members))


class TestIntersectionAndRad:
    def test_single_member(self):
        s4 = construct("symmetric(4)")
        a4 = PermGroup([parse_cycles("(1,2,3)", 4),
                        parse_cycles("(2,3,4)", 4)])
        fam = SubgroupFamily(s4, (a4,))
        assert rad(fam).order() == 12

    def test_klein_four_index_two_subgroups(self):
        klein = construct("dihedral(4)")
        h1 = PermGroup([parse_cycles("(1,2)", 4)], degree=4)
        h2 = PermGroup([parse_cycles("(3,4)", 4)], degree=4)
        fam = SubgroupFamily(klein, (h1, h2))
        assert rad(fam).order() == 1

    def test_intersection_symmetric(self):
        s4 = construct("symmetric(4)")
        d8 = PermGroup([parse_cycles("(1,2,3,4)", 4),
                        parse_cycles("(1,3)", 4)])
        s3 = PermGroup([parse_cycles("(1,2)", 4), parse_cycles("(2,3)", 4)])
        a = intersection(d8, s3)
        b = intersection(s3, d8)
        assert a.order() == b.order() == 2


class TestGeneralPosition:
    def test_repeated_member_fails(self):
        s4 = construct("symmetric(4)")
        a4 = PermGroup([parse_cycles("(1,2,3)", 4),
                        parse_cycles("(2,3,4)", 4)])
        fam = SubgroupFamily(s4, (a4, a4))
        assert not general_position(fam)

    def test_single_proper_subgroup(self):
        s4 = construct("symmetric(4)")
        a4 = PermGroup([parse_cycles("(1,2,3)", 4),
                        parse_cycles("(2,3,4)", 4)])
        assert general_position(SubgroupFamily(s4, (a4,)))

    def test_m11_certificate_family(self, m11):
        seq = cert_of("M11").sequence()
        fam = overgroup_family(m11, seq)
        assert general_position(fam)

    def test_m12_certificate_family_radical_trivial(self, m12):
        seq = cert_of("M12").sequence()
        fam = overgroup_family(m12, seq)
        assert sorted(m.order() for m in fam.members) == [7920] * 6
        assert rad(fam).order() == 1


class TestReplacementProperty:
    def test_elementary_abelian_pair(self):
        klein = construct("product(cyclic(2),cyclic(2))")
        seq = GeneratingSequence(klein, list(klein.generators))
        assert replacement_property(seq)

    def test_redundant_input_rejected(self):
        s4 = construct("symmetric(4)")
        g = parse_cycles("(1,2)", 4)
        with pytest.raises(ValueError):
            replacement_property(GeneratingSequence(s4, [g, g]))

    def test_m11_certificate_verdict_consistent_with_rads(self, m11):
        seq = cert_of("M11").sequence()
        fam = overgroup_family(m11, seq)
        assert rad_characterization_check(seq, [fam])

    def test_checker_flags_bad_family(self, m11):
        seq = cert_of("M11").sequence()
        fam = overgroup_family(m11, seq)
        with pytest.raises(ValueError):
            rad_characterization_check(seq, [
                SubgroupFamily(m11, fam.members[:4] + (fam.members[0],))])

    def test_vacuous_family_list(self):
        s3 = construct("symmetric(3)")
        seq = GeneratingSequence(
            s3, [parse_cycles("(1,2)", 3), parse_cycles("(2,3)", 3)])
        assert rad_characterization_check(seq, [])


class TestGenPosInequalities:
    def _oracle(self):
        cache = {}

        def i_of(subgroup):
            key = subgroup.order()
            if key not in cache:
                cache[key] = brute_i(subgroup)[0]
            return cache[key]

        return i_of

    def test_s4_maximal_family(self):
        import itertools
        s4 = construct("symmetric(4)")
        maximals = [sub for sub, mx in subgroup_lattice(s4) if mx]
        fam = None
        for triple in itertools.combinations(maximals, 3):
            candidate = SubgroupFamily(s4, triple)
            if general_position(candidate):
                fam = candidate
                break
        assert fam is not None  # MaxDim(S4) = 3, so a triple exists
        assert gen_pos_inequality_check(fam, lambda sub: brute_i(sub)[0])

    def test_singleton_always_holds(self):
        s4 = construct("symmetric(4)")
        a4 = PermGroup([parse_cycles("(1,2,3)", 4),
                        parse_cycles("(2,3,4)", 4)])
        fam = SubgroupFamily(s4, (a4,))
        assert gen_pos_inequality_check(fam, lambda sub: brute_i(sub)[0])

    def test_full_index_set(self, m11):
        seq = cert_of("M11").sequence()
        fam = overgroup_family(m11, seq)
        k = len(fam.members)
        # I = full index set: k <= i(rad(F)) + k holds for any i >= 0
        r = rad(fam)
        assert k <= brute_i(r)[0] + k

    def test_missing_oracle_value_names_subset(self):
        s4 = construct("symmetric(4)")
        a4 = PermGroup([parse_cycles("(1,2,3)", 4),
                        parse_cycles("(2,3,4)", 4)])
        fam = SubgroupFamily(s4, (a4,))
        with pytest.raises(ValueError) as exc:
            gen_pos_inequality_check(fam, lambda sub: None)
        assert "()" in str(exc.value)


class TestMaxDim:
    def test_s4(self):
        s4 = construct("symmetric(4)")
        maximals = [sub for sub, mx in subgroup_lattice(s4) if mx]
        md = max_dim(s4, maximals)
        m = brute_m(s4)[0]
        i = brute_i(s4)[0]
        assert m <= md <= i
        assert md == 3

    def test_z6(self):
        z6 = construct("cyclic(6)")
        maximals = [sub for sub, mx in subgroup_lattice(z6) if mx]
        assert len(maximals) == 2
        assert max_dim(z6, maximals) == 2

    def test_z4(self):
        z4 = construct("cyclic(4)")
        maximals = [sub for sub, mx in subgroup_lattice(z4) if mx]
        assert max_dim(z4, maximals) == 1


class TestTableParsing:
    def test_shipped_tables_roundtrip(self):
        for name in ("M11", "M12", "Aut(S6)", "A6:2", "M10"):
            table = shipped_table(name)
            again = parse_table(table.to_text())
            assert again == table

    def test_m12_counts(self):
        table = shipped_table("M12")
        assert len(table.records) == 8
        assert tuple(r.count for r in table.records) == (
            24, 132, 144, 440, 396, 495, 495, 1320)

    def test_m11_shape(self):
        table = shipped_table("M11")
        assert len(table.records) == 5
        assert tuple(r.i for r in table.records) == (4, 4, 4, 4, 3)
        assert not any(r.count_listed for r in table.records)

    def test_m10_i_values(self):
        assert tuple(r.i for r in shipped_table("M10").records) == (2, 2, 3, 4)

    @pytest.mark.parametrize("text,fragment", [
        ("row X order=2 count=1 solvable=yes m=- i=1\n", "before table"),
        ("table G order 10\n", "no rows"),
        ("table G order 10\nrow X order=3 count=1 solvable=yes m=- i=1\n",
         "does not divide"),
        ("table G order 10\nrow X order=2 count=1 solvable=maybe m=- i=1\n",
         "solvable"),
        ("table G order 10\nrow X order=2 count=1 solvable=yes m=2 i=1\n",
         "m exceeds i"),
    ])
    def test_format_errors(self, text, fragment):
        with pytest.raises((TableFormatError, ValueError)) as exc:
            parse_table(text)
        assert fragment in str(exc.value)


class TestPropagateBounds:
    def test_m11(self):
        ledger = propagate_bounds(shipped_table("M11"), m_lower=5)
        assert ledger.m_upper == 5
        assert ledger.i_exact == 5
        assert ledger.verdict == "strongly-flat"

    def test_m12(self):
        ledger = propagate_bounds(shipped_table("M12"), m_lower=6)
        assert ledger.m_upper == 6
        assert ledger.i_exact == 6
        assert ledger.verdict == "strongly-flat"

    def test_auts6_without_m_lower(self):
        ledger = propagate_bounds(shipped_table("Aut(S6)"))
        assert ledger.m_upper == 5
        assert ledger.i_exact == 5

    def test_m10_and_a6z2(self):
        assert propagate_bounds(shipped_table("M10")).i_exact == 4
        assert propagate_bounds(shipped_table("A6:2")).i_exact == 4

    def test_monotone_in_i_values(self):
        base = shipped_table("M12")
        ledger = propagate_bounds(base)
        for pos in range(len(base.records)):
            records = list(base.records)
            r = records[pos]
            records[pos] = SubgroupClassRecord(
                name=r.name, order=r.order, count=r.count,
                count_listed=r.count_listed, solvable=r.solvable,
                m=None, i=r.i + 1)
            weaker = propagate_bounds(
                GroupTable(base.group_name, base.group_order, tuple(records)))
            assert weaker.m_upper >= ledger.m_upper
            assert weaker.i_upper >= ledger.i_upper

    def test_conflicting_m_lower_rejected(self):
        with pytest.raises(ValueError):
            propagate_bounds(shipped_table("M10"), m_lower=6)

    def test_trace_carries_rules(self):
        ledger = propagate_bounds(shipped_table("M11"), m_lower=5)
        joined = "\n".join(ledger.trace)
        for rule in ("max-i-plus-one", "distinct-maximal-count",
                     "i-recursion", "flatness"):
            assert rule in joined


class TestFlatness:
    def test_m11_strongly_flat(self):
        assert flatness_verdict(shipped_table("M11"), 5) == "strongly-flat"

    def test_m12_strongly_flat(self):
        assert flatness_verdict(shipped_table("M12"), 6) == "strongly-flat"

    def test_equal_case_flat(self):
        table = GroupTable("G", 16, (
            SubgroupClassRecord(name="H", order=8, i=3),))
        assert flatness_verdict(table, 3) == "flat"

    def test_larger_case_undetermined(self):
        table = GroupTable("G", 16, (
            SubgroupClassRecord(name="H", order=8, i=3),))
        assert flatness_verdict(table, 2) == "undetermined"


class TestRecursionLaw:
    @pytest.mark.parametrize("spec", [
        "cyclic(12)", "cyclic(30)", "symmetric(3)", "symmetric(4)",
        "alternating(4)", "dihedral(8)", "dihedral(12)", "dihedral(20)",
        "product(cyclic(2),cyclic(2))", "product(cyclic(2),symmetric(3))",
        "product(cyclic(4),cyclic(2))", "cyclic(36)", "dihedral(16)",
        "product(cyclic(3),cyclic(3))",
    ])
    def test_i_recursion_on_small_groups(self, spec):
        g = construct(spec)
        assert g.order() <= 100
        m = brute_m(g)[0]
        i = brute_i(g)[0]
        maximal_i = [brute_i(sub)[0]
                     for sub, mx in subgroup_lattice(g) if mx]
        assert i == max([m] + maximal_i)
