import pytest

from grouprank.catalog import (
    SHIPPED_DIHEDRAL_ORDERS,
    data_dir,
    group_by_name,
    mathieu,
    shipped_certificates,
    shipped_table,
    shipped_tables,
    stabilizer,
)
from grouprank.genset import parse_certificates, verify_certificate
from grouprank.permcore import parse_cycles


class TestMathieu:
    def test_orders(self):
        assert mathieu(11).order() == 7920
        assert mathieu(12).order() == 95040

    def test_unsupported_index(self):
        with pytest.raises(ValueError):
            mathieu(22)

    def test_m11_inside_m12_as_point_stabilizer(self, m11, m12):
        # the degree-12 extensions of the degree-11 generators lie in M12
        for text in ("(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"):
            assert m12.contains(parse_cycles(text, 12))
        stab = stabilizer(m12, 12)
        assert stab.order() == 95040 // 12 == 7920

    def test_two_point_stabilizer_order(self, m12):
        inner = stabilizer(stabilizer(m12, 12), 11)
        assert inner.order() == 720


class TestShippedCertificates:
    def test_count_and_claims(self):
        certs = shipped_certificates()
        assert [c.group_name for c in certs] == ["M11", "M12"]
        assert [c.class_label for c in certs] == ["2A", "2B"]
        assert all(c.claim == "irredundant-generating" for c in certs)

    def test_element_counts_and_orders(self):
        certs = {c.group_name: c for c in shipped_certificates()}
        m11_elems = [parse_cycles(e, 11) for e in certs["M11"].elements]
        m12_elems = [parse_cycles(e, 12) for e in certs["M12"].elements]
        assert len(m11_elems) == 5
        assert len(m12_elems) == 6
        assert all(p.order() == 2 for p in m11_elems + m12_elems)

    def test_elements_are_canonical_text(self):
        for cert in shipped_certificates():
            for text in cert.elements + cert.group_gens:
                assert str(parse_cycles(text, cert.degree)) == text

    def test_both_pass_verification(self):
        for cert in shipped_certificates():
            assert verify_certificate(cert).passed

    def test_file_roundtrip(self):
        for name in ("m11-2a.cert", "m12-2b.cert"):
            path = data_dir() / name
            text = path.read_text()
            cert = parse_certificates(text)[0]
            stripped = "".join(
                line + "\n" for line in text.splitlines()
                if line.strip() and not line.startswith("#"))
            assert cert.to_text() == stripped


class TestShippedTables:
    def test_all_present(self):
        names = [t.group_name for t in shipped_tables()]
        assert names == ["M11", "M12", "Aut(S6)", "A6:2", "M10"]

    def test_m12_row_shape(self):
        table = shipped_table("M12")
        assert len(table.records) == 8
        assert tuple(r.count for r in table.records) == (
            24, 132, 144, 440, 396, 495, 495, 1320)

    def test_m11_i_values(self):
        assert tuple(r.i for r in shipped_table("M11").records) == (
            4, 4, 4, 4, 3)

    def test_m10_i_values(self):
        assert tuple(r.i for r in shipped_table("M10").records) == (2, 2, 3, 4)

    def test_counts_positive(self):
        for table in shipped_tables():
            for r in table.records:
                assert r.count >= 1
                assert table.group_order % r.order == 0

    def test_lookup_unknown(self):
        with pytest.raises(KeyError):
            shipped_table("M24")


class TestGroupByName:
    def test_catalog_names(self):
        assert group_by_name("M11").order() == 7920

    def test_construct_spec_fallback(self):
        assert group_by_name("symmetric(4)").order() == 24

    def test_dihedral_order_table_keys(self):
        assert set(SHIPPED_DIHEDRAL_ORDERS) == {"M11", "M12"}
