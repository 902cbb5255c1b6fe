"""Generation and irredundancy predicates, deleted-subset reports, and
certificate verification.

A sequence (g_1, ..., g_k) in a group G is *generating* when it generates all
of G and *irredundant* when removing any one member strictly shrinks the
generated subgroup.  Certificates package such sequences with the group they
live in, so they can be re-checked from a text file alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .permcore import DEFAULT_ENUM_CAP, PermGroup, parse_cycles


class CertificateFormatError(ValueError):
    """Raised for malformed certificate files; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GeneratingSequence:
    """An ordered list of nonidentity group elements with a fixed parent."""

    def __init__(self, parent: PermGroup, elements):
        elems = tuple(elements)
        for i, e in enumerate(elems):
            if e.degree != parent.degree:
                raise ValueError(
                    f"element {i + 1} has degree {e.degree}, "
                    f"parent has degree {parent.degree}")
            if e.is_identity():
                raise ValueError(
                    f"element {i + 1} is the identity, which is always redundant")
            if not parent.contains(e):
                raise ValueError(f"element {i + 1} is not in the parent group")
        self.parent = parent
        self.elements = elems

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def subgroup(self) -> PermGroup:
        return generated_subgroup(self.parent, self.elements)

    def deleted(self, i: int) -> PermGroup:
        """Subgroup generated with element i (0-based) skipped."""
        rest = self.elements[:i] + self.elements[i + 1:]
        return generated_subgroup(self.parent, rest)

    def __repr__(self) -> str:
        return (f"GeneratingSequence[{len(self.elements)} elements in "
                f"{self.parent!r}]")


def generated_subgroup(parent: PermGroup, elements) -> PermGroup:
    """Subgroup of `parent` generated by `elements`, with its own chain."""
    elems = tuple(elements)
    for i, e in enumerate(elems):
        if not parent.contains(e):
            raise ValueError(f"element {i + 1} is not in the parent group")
    return PermGroup(elems, degree=parent.degree)


def is_generating(seq: GeneratingSequence) -> bool:
    return seq.subgroup().order() == seq.parent.order()


def is_irredundant(seq: GeneratingSequence) -> bool:
    """Every member lies outside the subgroup generated by the others.

    Works whether or not the sequence generates its parent: deleted subgroup
    orders are compared against the order of the full generated subgroup.
    """
    full = seq.subgroup().order()
    for i in range(len(seq)):
        if seq.deleted(i).order() == full:
            return False
    return True


@dataclass(frozen=True)
class DeletedSubsetEntry:
    index: int                 # 1-based position of the skipped element
    order: int                 # order of the subgroup without it
    proper: bool               # proper in the full generated subgroup
    maximal: bool | None = None  # maximal in the parent, when requested


@dataclass(frozen=True)
class DeletedSubsetReport:
    full_order: int
    entries: tuple[DeletedSubsetEntry, ...]

    @property
    def irredundant(self) -> bool:
        return all(e.proper for e in self.entries)

    def orders(self) -> tuple[int, ...]:
        return tuple(e.order for e in self.entries)


def deleted_subset_report(seq: GeneratingSequence,
                          check_maximal: bool = False) -> DeletedSubsetReport:
    """Orders of all one-element-deleted subgroups, one chain build each."""
    full = seq.subgroup().order()
    entries = []
    for i in range(len(seq)):
        h = seq.deleted(i)
        o = h.order()
        maximal = None
        if check_maximal:
            from .search import is_maximal  # deferred: search builds on genset
            maximal = (o < seq.parent.order()
                       and not h.is_trivial()
                       and is_maximal(seq.parent, h))
        entries.append(DeletedSubsetEntry(
            index=i + 1, order=o, proper=o < full, maximal=maximal))
    return DeletedSubsetReport(full_order=full, entries=tuple(entries))


# ---------------------------------------------------------------------------
# certificates

CLAIM_IRREDUNDANT_GENERATING = "irredundant-generating"
CLAIM_IRREDUNDANT = "irredundant"
_CLAIMS = (CLAIM_IRREDUNDANT_GENERATING, CLAIM_IRREDUNDANT)


@dataclass(frozen=True)
class Certificate:
    """A claimed irredundant (or irredundant generating) sequence, stored as
    text so verification never depends on any catalog being present."""

    group_name: str
    degree: int
    group_gens: tuple[str, ...]
    claim: str
    elements: tuple[str, ...]
    class_label: str | None = None

    def to_text(self) -> str:
        lines = [f"group {self.group_name}", f"degree {self.degree}"]
        lines += [f"gen {g}" for g in self.group_gens]
        lines.append(f"claim {self.claim}")
        if self.class_label is not None:
            lines.append(f"class {self.class_label}")
        lines += [f"elt {e}" for e in self.elements]
        return "\n".join(lines) + "\n"

    def group(self) -> PermGroup:
        gens = [parse_cycles(g, self.degree) for g in self.group_gens]
        return PermGroup(gens, degree=self.degree, name=self.group_name)

    def sequence(self) -> GeneratingSequence:
        parent = self.group()
        elems = [parse_cycles(e, self.degree) for e in self.elements]
        return GeneratingSequence(parent, elems)


def parse_certificates(text: str) -> list[Certificate]:
    """Parse one or more certificates from the line-oriented format.

    A `group` line starts a new certificate; `#` lines are ignored; the order
    of `gen` and `elt` lines is significant.
    """
    certs: list[Certificate] = []
    cur: dict | None = None

    def flush(line_no):
        nonlocal cur
        if cur is None:
            return
        for key in ("degree", "claim"):
            if cur[key] is None:
                raise CertificateFormatError(
                    f"certificate '{cur['name']}' has no {key} line", line_no)
        if not cur["elts"]:
            raise CertificateFormatError(
                f"certificate '{cur['name']}' has no elt lines", line_no)
        certs.append(Certificate(
            group_name=cur["name"],
            degree=cur["degree"],
            group_gens=tuple(cur["gens"]),
            claim=cur["claim"],
            elements=tuple(cur["elts"]),
            class_label=cur["class"],
        ))
        cur = None

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 1)
        key = parts[0]
        value = parts[1].strip() if len(parts) > 1 else ""
        if key == "group":
            flush(ln)
            if not value:
                raise CertificateFormatError("group line needs a name", ln)
            cur = {"name": value, "degree": None, "gens": [],
                   "claim": None, "class": None, "elts": []}
            continue
        if cur is None:
            raise CertificateFormatError(
                f"'{key}' line before any group line", ln)
        if key == "degree":
            try:
                cur["degree"] = int(value)
            except ValueError:
                raise CertificateFormatError(
                    f"bad degree {value!r}", ln) from None
        elif key == "gen":
            cur["gens"].append(value)
        elif key == "claim":
            if value not in _CLAIMS:
                raise CertificateFormatError(
                    f"unknown claim {value!r} (expected one of {_CLAIMS})", ln)
            cur["claim"] = value
        elif key == "class":
            cur["class"] = value
        elif key == "elt":
            cur["elts"].append(value)
        else:
            raise CertificateFormatError(f"unknown line key {key!r}", ln)
    flush(None)
    if not certs:
        raise CertificateFormatError("no certificates found")
    return certs


def load_certificates(path) -> list[Certificate]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_certificates(fh.read())


@dataclass
class VerificationReport:
    certificate: Certificate
    parse_ok: bool = False
    membership_ok: bool = False
    irredundant: bool | None = None
    generating: bool | None = None
    class_consistent: bool | None = None
    computed_class: str | None = None
    deleted_orders: tuple[int, ...] = ()
    messages: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if not (self.parse_ok and self.membership_ok):
            return False
        if self.irredundant is not True:
            return False
        if (self.certificate.claim == CLAIM_IRREDUNDANT_GENERATING
                and self.generating is not True):
            return False
        if self.certificate.class_label is not None and not self.class_consistent:
            return False
        return True


def verify_certificate(cert: Certificate,
                       cap: int = DEFAULT_ENUM_CAP) -> VerificationReport:
    """Check every claim a certificate makes; failures are reported, not
    raised."""
    report = VerificationReport(certificate=cert)
    try:
        parent = cert.group()
        elems = [parse_cycles(e, cert.degree) for e in cert.elements]
    except ValueError as exc:
        report.messages.append(f"parse: {exc}")
        return report
    report.parse_ok = True

    bad = [i + 1 for i, e in enumerate(elems)
           if e.is_identity() or not parent.contains(e)]
    if bad:
        report.messages.append(
            f"membership: elements {bad} are not usable members of "
            f"{cert.group_name}")
        return report
    report.membership_ok = True

    seq = GeneratingSequence(parent, elems)
    sub = deleted_subset_report(seq)
    report.deleted_orders = sub.orders()
    report.irredundant = sub.irredundant
    if not sub.irredundant:
        redundant = [e.index for e in sub.entries if not e.proper]
        report.messages.append(f"irredundant: FAIL at positions {redundant}")
    if cert.claim == CLAIM_IRREDUNDANT_GENERATING:
        report.generating = sub.full_order == parent.order()
        if not report.generating:
            report.messages.append(
                f"generating: FAIL, sequence generates order {sub.full_order:,} "
                f"of {parent.order():,}")
    if cert.class_label is not None:
        try:
            classes = {c.label: c for c in parent.conjugacy_classes(cap)}
        except Exception as exc:  # enumeration cap, degree issues
            report.class_consistent = False
            report.messages.append(f"class: could not compute classes ({exc})")
            return report
        cls = classes.get(cert.class_label)
        if cls is None:
            report.class_consistent = False
            report.messages.append(
                f"class: no class labelled {cert.class_label}")
        else:
            outside = [i + 1 for i, e in enumerate(elems) if e not in cls]
            report.class_consistent = not outside
            if outside:
                report.messages.append(
                    f"class: elements {outside} are not in class "
                    f"{cert.class_label}")
        if elems:
            try:
                report.computed_class = parent.class_of(elems[0]).label
            except ValueError:
                pass
    return report
