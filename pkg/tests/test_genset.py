import itertools

import pytest

from grouprank.catalog import shipped_certificates
from grouprank.genset import (
    Certificate,
    CertificateFormatError,
    GeneratingSequence,
    deleted_subset_report,
    generated_subgroup,
    is_generating,
    is_irredundant,
    parse_certificates,
    verify_certificate,
)
from grouprank.oracle import closure_elements
from grouprank.permcore import identity, parse_cycles


def m11_cert():
    return next(c for c in shipped_certificates() if c.group_name == "M11")


def m12_cert():
    return next(c for c in shipped_certificates() if c.group_name == "M12")


class TestGeneratedSubgroup:
    def test_m11_certificate_generates(self, m11):
        seq = m11_cert().sequence()
        assert generated_subgroup(m11, seq.elements).order() == 7920

    def test_empty_is_trivial(self, m11):
        assert generated_subgroup(m11, []).order() == 1

    def test_first_four_certificate_elements(self, m11):
        # deleted orders are pinned below; here the subgroup of the first
        # four is cross-checked against plain closure
        elems = m11_cert().sequence().elements[:4]
        sub = generated_subgroup(m11, elems)
        assert sub.order() == len(closure_elements(elems, 11, cap=10_000))
        assert sub.order() == 360

    def test_outside_parent_names_index(self, m11):
        outside = parse_cycles("(1,2)", 11)
        assert not m11.contains(outside)
        with pytest.raises(ValueError) as exc:
            generated_subgroup(m11, [m11.generators[0], outside])
        assert "element 2" in str(exc.value)


class TestPredicates:
    def test_m12_certificate_generating(self, m12):
        assert is_generating(m12_cert().sequence())

    def test_single_element_never_generates_m11(self, m11):
        seq = GeneratingSequence(m11, [m11.generators[0]])
        assert not is_generating(seq)

    def test_defining_generators_generate(self, m11):
        assert is_generating(GeneratingSequence(m11, m11.generators))

    def test_m11_certificate_irredundant(self, m11):
        assert is_irredundant(m11_cert().sequence())

    def test_duplicate_is_redundant(self, m11):
        g = m11.generators[1]
        assert not is_irredundant(GeneratingSequence(m11, [g, g]))

    def test_singleton_is_irredundant(self, m11):
        assert is_irredundant(GeneratingSequence(m11, [m11.generators[0]]))

    def test_identity_rejected(self, m11):
        with pytest.raises(ValueError):
            GeneratingSequence(m11, [identity(11)])

    def test_subset_heredity(self, m11):
        # every subset of an irredundant set is irredundant
        elems = m11_cert().sequence().elements
        for r in range(len(elems) + 1):
            for subset in itertools.combinations(elems, r):
                if subset:
                    assert is_irredundant(GeneratingSequence(m11, subset))

    def test_order_insensitive(self, m11):
        elems = list(m11_cert().sequence().elements)
        perms = [elems, elems[::-1], elems[2:] + elems[:2]]
        verdicts = {is_irredundant(GeneratingSequence(m11, e)) for e in perms}
        assert verdicts == {True}

    def test_append_monotonicity(self, m11):
        elems = m11_cert().sequence().elements
        prev = 1
        for r in range(1, len(elems) + 1):
            cur = generated_subgroup(m11, elems[:r]).order()
            assert cur >= prev
            prev = cur


class TestDeletedSubsetReport:
    def test_m12_all_point_stabilizer_order(self, m12):
        report = deleted_subset_report(m12_cert().sequence())
        assert report.orders() == (7920,) * 6
        assert report.irredundant

    def test_m11_orders(self, m11):
        # computed orders; the published isomorphism-class list would give
        # 660/660/660/360/360 and the closure oracle above confirms 360
        report = deleted_subset_report(m11_cert().sequence())
        assert report.orders() == (660, 660, 660, 360, 360)

    def test_singleton(self, m11):
        report = deleted_subset_report(
            GeneratingSequence(m11, [m11.generators[0]]))
        assert report.orders() == (1,)

    def test_m12_maximality_flags(self, m12):
        report = deleted_subset_report(m12_cert().sequence(),
                                       check_maximal=True)
        assert all(e.maximal for e in report.entries)


class TestCertificateFormat:
    def test_roundtrip(self):
        cert = m11_cert()
        again = parse_certificates(cert.to_text())
        assert len(again) == 1 and again[0] == cert

    def test_serialize_is_stable(self):
        for cert in shipped_certificates():
            text = cert.to_text()
            assert parse_certificates(text)[0].to_text() == text

    def test_multiple_certificates_per_file(self):
        text = m11_cert().to_text() + m12_cert().to_text()
        certs = parse_certificates(text)
        assert [c.group_name for c in certs] == ["M11", "M12"]

    def test_comments_ignored(self):
        text = "# leading comment\n" + m11_cert().to_text()
        assert parse_certificates(text)[0] == m11_cert()

    @pytest.mark.parametrize("text,fragment", [
        ("degree 5\n", "before any group"),
        ("group X\nclaim irredundant\nelt (1,2)\n", "no degree"),
        ("group X\ndegree 5\nclaim nonsense\nelt (1,2)\n", "unknown claim"),
        ("group X\ndegree 5\nclaim irredundant\n", "no elt"),
        ("junk line\n", "before any group"),
        ("", "no certificates"),
    ])
    def test_format_errors(self, text, fragment):
        with pytest.raises(CertificateFormatError) as exc:
            parse_certificates(text)
        assert fragment in str(exc.value)


class TestVerifyCertificate:
    def test_shipped_pass(self):
        for cert in shipped_certificates():
            report = verify_certificate(cert)
            assert report.passed
            assert report.class_consistent

    def test_duplicate_element_fails_irredundancy(self):
        cert = m11_cert()
        broken = Certificate(
            group_name=cert.group_name, degree=cert.degree,
            group_gens=cert.group_gens, claim=cert.claim,
            elements=cert.elements[:4] + (cert.elements[0],),
            class_label=None)
        report = verify_certificate(broken)
        assert report.irredundant is False
        assert not report.passed

    def test_dropped_element_fails_generating(self):
        cert = m11_cert()
        short = Certificate(
            group_name=cert.group_name, degree=cert.degree,
            group_gens=cert.group_gens, claim=cert.claim,
            elements=cert.elements[:4], class_label=cert.class_label)
        report = verify_certificate(short)
        assert report.irredundant is True
        assert report.generating is False
        assert not report.passed
        assert any("generating" in m for m in report.messages)

    def test_wrong_class_label_fails(self):
        cert = m12_cert()
        relabelled = Certificate(
            group_name=cert.group_name, degree=cert.degree,
            group_gens=cert.group_gens, claim=cert.claim,
            elements=cert.elements, class_label="2A")
        report = verify_certificate(relabelled)
        assert report.class_consistent is False
        assert report.computed_class == "2B"
        assert not report.passed

    def test_membership_failure_reported_not_raised(self):
        cert = Certificate(
            group_name="A3", degree=3, group_gens=("(1,2,3)",),
            claim="irredundant-generating", elements=("(1,2)",))
        report = verify_certificate(cert)
        assert report.parse_ok and not report.membership_ok
        assert not report.passed

    def test_parse_failure_reported_not_raised(self):
        cert = Certificate(
            group_name="X", degree=4, group_gens=("(1,99)",),
            claim="irredundant", elements=("(1,2)",))
        report = verify_certificate(cert)
        assert not report.parse_ok and not report.passed


class TestSizeBoundCrossCheck:
    def test_certificate_size_within_table_bound(self, m11):
        # a verified size-k irredundant generating sequence never exceeds the
        # propagated upper bound for the group
        from grouprank.bounds import propagate_bounds
        from grouprank.catalog import shipped_table
        k = len(m11_cert().elements)
        ledger = propagate_bounds(shipped_table("M11"))
        assert k <= ledger.m_upper
