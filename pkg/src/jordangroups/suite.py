"""Corpus of classified groups with expected Jordan constants, the
verification runner and its report formats."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .constructors import Certificate, build, parse_expr
from .errors import CertificateFailed, CorpusError, GroupError, ParseError
from .jordan import jordan_constant, normal_abelian_profile, parse_invariants

SECTIONS = ("noniso", "ordinary", "supersingular", "simple")
_PREFIX = {"Thm2.6": "noniso", "Thm2.7": "ordinary", "Thm2.8": "supersingular", "Thm3.1": "simple"}
TAGS = ("2", "3", "5", "generic", "n/a")

# value sets each section must reproduce
NONISO_SETS = {"2": [1, 12, 144], "3": [1, 2, 4], ">=5": [1]}
ORDINARY_SET = [2, 12, 24]
SUPERSINGULAR_SET = [12, 24, 60, 120, 360, 960]
SUPERSINGULAR_ATTAINED = [120, 360, 960]
SUPERSINGULAR_GENERIC = [2, 12, 24, 60]
SIMPLE_SET = [1, 2, 12, 24, 60]


@dataclass(frozen=True)
class CorpusEntry:
    label: str
    expr: str
    order: int
    expected_j: int | None
    profile: tuple[str, ...] | None
    tag: str
    citation: str

    @property
    def section(self) -> str:
        return _PREFIX[self.label.split("(", 1)[0]]


def _corpus_text(path: str | Path | None) -> str:
    if path is not None:
        return Path(path).read_text(encoding="utf-8")
    return resources.files("jordangroups").joinpath("data/corpus.tsv").read_text(encoding="utf-8")


def load_corpus(path: str | Path | None = None) -> list[CorpusEntry]:
    """Parse and sanity-check the corpus table."""
    entries = []
    for lineno, line in enumerate(_corpus_text(path).splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 7:
            raise CorpusError(f"line {lineno}: expected 7 tab-separated columns, got {len(cols)}")
        label, expr, order, jval, profile, tag, citation = (c.strip() for c in cols)
        if label.split("(", 1)[0] not in _PREFIX:
            raise CorpusError(f"line {lineno}: unknown section in label {label!r}")
        try:
            parse_expr(expr)
        except ParseError as exc:
            raise CorpusError(f"line {lineno}: {exc}") from exc
        if tag not in TAGS:
            raise CorpusError(f"line {lineno}: unknown characteristic tag {tag!r}")
        try:
            order_i = int(order)
            j_i = None if jval == "-" else int(jval)
        except ValueError as exc:
            raise CorpusError(f"line {lineno}: {exc}") from exc
        if j_i is not None and order_i % j_i:
            raise CorpusError(f"line {lineno}: expected J {j_i} does not divide order {order_i}")
        prof = None if profile == "-" else tuple(p.strip() for p in profile.split(";"))
        entries.append(CorpusEntry(label, expr, order_i, j_i, prof, tag, citation))
    labels = [e.label for e in entries]
    if len(set(labels)) != len(labels):
        raise CorpusError("duplicate labels in corpus")
    return entries


def corpus_section(section: str, entries: list[CorpusEntry] | None = None) -> list[CorpusEntry]:
    entries = load_corpus() if entries is None else entries
    if section == "all":
        return list(entries)
    if section not in SECTIONS:
        raise CorpusError(f"unknown section {section!r}")
    return [e for e in entries if e.section == section]


# --------------------------------------------------------------------------
# report model


@dataclass
class ReportRow:
    label: str
    expr: str
    order: int
    i: int
    J: int
    expectedJ: int | None
    passed: bool
    millis: float
    profile: list[str] = field(default_factory=list)
    expectedProfile: list[str] | None = None
    tag: str = "generic"
    note: str = ""

    def to_json(self, timing: bool = True) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        if not timing:
            d["millis"] = 0.0
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ReportRow":
        d = dict(d)
        d["passed"] = d.pop("pass")
        return cls(**d)


@dataclass
class SetCheck:
    name: str
    computed: list[int]
    expected: list[int]
    relation: str  # "equal" or "subset"

    @property
    def passed(self) -> bool:
        if self.relation == "equal":
            return sorted(self.computed) == sorted(self.expected)
        return set(self.computed) <= set(self.expected)


@dataclass
class VerificationReport:
    section: str
    rows: list[ReportRow]
    checks: list[SetCheck]
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        ok = all(r.passed for r in self.rows) and all(c.passed for c in self.checks)
        return "pass" if ok else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "section": self.section,
            "rows": [r.to_json(timing) for r in self.rows],
            "sets": {
                "computed": {c.name: sorted(c.computed) for c in self.checks},
                "expected": {c.name: sorted(c.expected) for c in self.checks},
                "relation": {c.name: c.relation for c in self.checks},
            },
            "notes": list(self.notes),
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        sets = d["sets"]
        checks = [SetCheck(name, list(sets["computed"][name]), list(sets["expected"][name]), rel)
                  for name, rel in sets["relation"].items()]
        report = cls(d["section"], [ReportRow.from_json(r) for r in d["rows"]], checks, list(d.get("notes", [])))
        if report.status != d["status"]:
            raise CorpusError("report status is inconsistent with its rows")
        return report


def emit_json(report: VerificationReport, timing: bool = True) -> str:
    return json.dumps(report.to_dict(timing), indent=2, sort_keys=True)


def parse_json(text: str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(text))


def emit_csv(report: VerificationReport, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "expr", "order", "i", "J", "expectedJ", "pass", "millis", "profile", "tag"])
    for r in report.rows:
        w.writerow([
            r.label, r.expr, r.order, r.i, r.J,
            "" if r.expectedJ is None else r.expectedJ,
            "pass" if r.passed else "fail",
            f"{r.millis:.1f}" if timing else "0.0",
            ";".join(r.profile), r.tag,
        ])
    for c in report.checks:
        w.writerow([f"set:{c.name}", c.relation, "", "", " ".join(map(str, sorted(c.computed))),
                    " ".join(map(str, sorted(c.expected))), "pass" if c.passed else "fail", "", "", ""])
    w.writerow(["status", report.status, "", "", "", "", "", "", "", ""])
    return buf.getvalue()


def emit_markdown(report: VerificationReport, timing: bool = True) -> str:
    lines = [f"## Verification: {report.section}", "",
             "| label | group | order | i(G) | J | expected | result | ms |",
             "|---|---|---:|---:|---:|---:|---|---:|"]
    for r in report.rows:
        exp = "-" if r.expectedJ is None else str(r.expectedJ)
        ms = f"{r.millis:.0f}" if timing else "-"
        lines.append(f"| {r.label} | `{r.expr}` | {r.order} | {r.i} | {r.J} | {exp} | "
                     f"{'pass' if r.passed else 'FAIL'} | {ms} |")
    lines += ["", "| value set | computed | expected | relation | result |", "|---|---|---|---|---|"]
    for c in report.checks:
        lines.append(f"| {c.name} | {{{', '.join(map(str, sorted(c.computed)))}}} | "
                     f"{{{', '.join(map(str, sorted(c.expected)))}}} | {c.relation} | "
                     f"{'pass' if c.passed else 'FAIL'} |")
    if report.notes:
        lines += ["", "Notes:"] + [f"- {n}" for n in report.notes]
    lines += ["", f"**Status: {report.status}**", ""]
    return "\n".join(lines)


FORMATS = {"md": emit_markdown, "json": emit_json, "csv": emit_csv}


# --------------------------------------------------------------------------
# runner


def entry_certificate(entry: CorpusEntry) -> Certificate | None:
    """The stated normal-abelian profile, used to select among candidate actions."""
    if entry.profile is None:
        return None
    return Certificate(order=entry.order, profile=frozenset(parse_invariants(p) for p in entry.profile))


def verify_entry(entry: CorpusEntry) -> ReportRow:
    start = time.perf_counter()
    try:
        G = build(entry.expr, entry_certificate(entry))
    except CertificateFailed as exc:
        G = build(entry.expr)
        cert_note = f"certificate failed: {exc}"
    else:
        cert_note = ""
    rep = jordan_constant(G)
    profile = normal_abelian_profile(G).render() if entry.profile is not None else []
    millis = (time.perf_counter() - start) * 1000.0
    ok = G.order == entry.order
    if entry.expected_j is not None:
        ok = ok and rep.jordan == entry.expected_j
    if entry.profile is not None:
        ok = ok and set(profile) == set(entry.profile)
    notes = [cert_note] if cert_note else []
    if rep.whole_group_index != rep.jordan:
        notes.append(f"i(G) = {rep.whole_group_index} differs from J = {rep.jordan}")
    selection = getattr(G, "meta", {}).get("selection")
    if selection and selection["distinct"] > 1:
        notes.append(f"{selection['distinct']} non-isomorphic candidate actions pass the certificate")
    note = "; ".join(notes)
    return ReportRow(
        entry.label, entry.expr, G.order, rep.whole_group_index, rep.jordan, entry.expected_j,
        ok, millis, profile, list(entry.profile) if entry.profile is not None else None, entry.tag, note,
    )


def _noniso_checks(rows: list[ReportRow]) -> list[SetCheck]:
    # p=2 and p=3 see the rows built from their quaternion unit groups plus the
    # products of commutative cases; p>=5 sees only the latter
    buckets = {"2": ("2", "generic"), "3": ("3", "generic"), ">=5": ("generic",)}
    return [SetCheck(f"p{p}", sorted({r.J for r in rows if r.tag in tags}), NONISO_SETS[p], "equal")
            for p, tags in buckets.items()]


def _supersingular_checks(rows: list[ReportRow]) -> list[SetCheck]:
    maxima = {}
    for p in ("2", "3", "5"):
        vals = [r.J for r in rows if r.tag in (p, "generic")]
        if vals:
            maxima[p] = max(vals)
    generic = [r.J for r in rows if r.tag == "generic"]
    if generic:
        maxima[">=7"] = max(generic)
    max_set = sorted(set(maxima.values()))
    return [
        SetCheck("maxima", max_set, SUPERSINGULAR_SET, "subset"),
        SetCheck("attained", sorted(set(max_set) & set(SUPERSINGULAR_ATTAINED)), SUPERSINGULAR_ATTAINED, "equal"),
        SetCheck("generic", sorted(set(generic)), SUPERSINGULAR_GENERIC, "equal"),
    ]


def section_checks(section: str, rows: list[ReportRow]) -> list[SetCheck]:
    if section == "noniso":
        return _noniso_checks(rows)
    if section == "ordinary":
        return [SetCheck("J", sorted({r.J for r in rows}), ORDINARY_SET, "equal")]
    if section == "supersingular":
        return _supersingular_checks(rows)
    if section == "simple":
        return [SetCheck("J", sorted({r.J for r in rows}), SIMPLE_SET, "equal")]
    raise CorpusError(f"unknown section {section!r}")


def run_verification(section: str = "all", workers: int = 1, corpus: list[CorpusEntry] | None = None
                     ) -> VerificationReport:
    """Verify a corpus section.  Rows may run on several threads; the report
    lists them in corpus order and is otherwise independent of ``workers``."""
    entries = corpus_section(section, corpus)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(verify_entry, entries))
    else:
        rows = [verify_entry(e) for e in entries]
    sections = SECTIONS if section == "all" else (section,)
    checks: list[SetCheck] = []
    for s in sections:
        sub = [r for r, e in zip(rows, entries) if e.section == s]
        if not sub:
            continue
        for c in section_checks(s, sub):
            if section == "all":
                c.name = f"{s}:{c.name}"
            checks.append(c)
    notes = [f"{r.label}: {r.note}" for r in rows if r.note]
    return VerificationReport(section, rows, checks, notes)


__all__ = [
    "CorpusEntry",
    "ReportRow",
    "SetCheck",
    "VerificationReport",
    "SECTIONS",
    "load_corpus",
    "corpus_section",
    "verify_entry",
    "run_verification",
    "emit_json",
    "parse_json",
    "emit_csv",
    "emit_markdown",
    "GroupError",
]
