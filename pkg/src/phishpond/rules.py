"""Heuristic phishing rules with span-localized findings.

Each rule inspects a parsed URL and incriminates concrete components, so a
finding always points at the exact bytes that triggered it. The findings
double as the answer key for the locate-the-bad-part game phase and carry
the teaching text shown to the player.

Rule ids are stable; hints are the short tips the in-game mentor gives.
``paper_anchored`` marks the three indicators taken directly from the
security-education literature this ruleset started from; the rest are
added so harder levels have more material.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator

from phishpond.urls import ComponentId, ComponentKind, HostKind, ParsedUrl, Span


class NotPhishing(ValueError):
    """Raised when a component pick is graded against a legitimate report."""


class Verdict(str, Enum):
    PHISHING = "phishing"
    LEGITIMATE = "legitimate"


class PickGrade(str, Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"


@dataclass(frozen=True)
class Rule:
    id: str
    severity: int
    description: str
    hint: str
    paper_anchored: bool = False

    def __post_init__(self) -> None:
        if self.severity not in (1, 2, 3):
            raise ValueError(f"severity must be 1..3, got {self.severity}")


@dataclass(frozen=True)
class Finding:
    rule_id: str
    component: ComponentId
    span: Span
    explanation: str

    def to_json(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "component": self.component.to_json(),
            "span": self.span.to_json(),
            "explanation": self.explanation,
        }


@dataclass(frozen=True)
class AnalysisReport:
    verdict: Verdict
    findings: tuple[Finding, ...]

    @property
    def primary_finding(self) -> Finding | None:
        return self.findings[0] if self.findings else None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "findings": [f.to_json() for f in self.findings],
            "primary_finding": self.primary_finding.to_json() if self.findings else None,
        }


class RuleSet:
    """Ordered, id-unique collection of rules."""

    def __init__(self, rules: Iterable[Rule]):
        self._rules: dict[str, Rule] = {}
        for rule in rules:
            if rule.id in self._rules:
                raise ValueError(f"duplicate rule id {rule.id!r}")
            self._rules[rule.id] = rule

    def __iter__(self) -> Iterator[Rule]:
        return iter(self._rules.values())

    def __contains__(self, rule_id: str) -> bool:
        return rule_id in self._rules

    def __len__(self) -> int:
        return len(self._rules)

    def __getitem__(self, rule_id: str) -> Rule:
        return self._rules[rule_id]

    def subset(self, rule_ids: Iterable[str]) -> "RuleSet":
        keep = set(rule_ids)
        return RuleSet(rule for rule in self if rule.id in keep)


# The numbers-in-front sentence is the one shown as real-time feedback for
# the IP-host example URL, so both IP rules teach with it.
_NUMBERS_SENTENCE = "Legitimate websites usually do not have numbers at the beginning of their URLs"

_BUILTIN_RULES = (
    Rule(
        id="ip_address_host",
        severity=3,
        description=(
            _NUMBERS_SENTENCE
            + ". This address replaces the site name with the raw IP number"
            " '{text}', which is how scammers hide who they really are."
        ),
        hint="website addresses associated with numbers in the front are generally scams",
        paper_anchored=True,
    ),
    Rule(
        id="numeric_host_prefix",
        severity=2,
        description=(
            _NUMBERS_SENTENCE + ". This one starts with '{text}'."
        ),
        hint="legitimate websites usually do not have numbers at the beginning of their URLs",
        paper_anchored=True,
    ),
    Rule(
        id="brand_hyphen",
        severity=2,
        description=(
            "A company name followed by a hyphen in a URL is generally a scam:"
            " '{text}' is not the same site as the real {brand} website."
        ),
        hint="a company name followed by a hyphen in a URL is generally a scam",
        paper_anchored=True,
    ),
    Rule(
        id="userinfo_present",
        severity=3,
        description=(
            "Everything before the '@' sign is ignored by the browser. Here"
            " '{text}' is bait; the real destination is what comes after the '@'."
        ),
        hint="anything written before an '@' sign in a web address is a decoy",
    ),
    Rule(
        id="brand_in_subdomain",
        severity=2,
        description=(
            "The owner of this address is '{registered_domain}', not {brand}."
            " Putting '{text}' in front is a disguise anyone can rent."
        ),
        hint="a familiar company name stuck in front of a stranger's address is a disguise",
    ),
    Rule(
        id="excessive_subdomains",
        severity=1,
        description=(
            "This address piles {extra} extra parts in front of"
            " '{registered_domain}' to look official; real sites keep it short."
        ),
        hint="the more dots piled in front of the real site name, the less you should trust it",
    ),
    Rule(
        id="brand_misspelled",
        severity=2,
        description=(
            "'{text}' is one letter away from '{brand}'. Look-alike names are"
            " registered by scammers hoping you will not notice the difference."
        ),
        hint="read the site name letter by letter; one changed letter means a different owner",
    ),
)


def builtin_ruleset() -> RuleSet:
    return RuleSet(_BUILTIN_RULES)


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _render(rule: Rule, **context: object) -> str:
    return rule.description.format(**context)


def _find_ip_host(p: ParsedUrl, rule: Rule, brands: list[str]) -> list[Finding]:
    if p.host_kind is not HostKind.IPV4_LITERAL:
        return []
    comp = p.host_component()
    assert comp is not None
    return [Finding(rule.id, comp.id, comp.span, _render(rule, text=comp.text))]


def _find_numeric_prefix(p: ParsedUrl, rule: Rule, brands: list[str]) -> list[Finding]:
    comp = p.host_component()
    if comp is None or comp.text[0] not in "0123456789":
        return []
    return [Finding(rule.id, comp.id, comp.span, _render(rule, text=comp.text))]


def _find_brand_hyphen(p: ParsedUrl, rule: Rule, brands: list[str]) -> list[Finding]:
    reg_start = p.registered_label_start()
    if reg_start is None:
        return []
    findings = []
    for comp in p.host_labels()[reg_start:]:
        lowered = comp.text.lower()
        for brand in brands:
            if f"{brand}-" in lowered or f"-{brand}" in lowered:
                findings.append(
                    Finding(rule.id, comp.id, comp.span,
                            _render(rule, text=comp.text, brand=brand))
                )
                break
    return findings


def _find_userinfo(p: ParsedUrl, rule: Rule, brands: list[str]) -> list[Finding]:
    for comp in p.components:
        if comp.id.kind is ComponentKind.USERINFO:
            return [Finding(rule.id, comp.id, comp.span, _render(rule, text=comp.text))]
    return []


def _find_brand_in_subdomain(p: ParsedUrl, rule: Rule, brands: list[str]) -> list[Finding]:
    reg_start = p.registered_label_start()
    if reg_start is None:
        return []
    findings = []
    for comp in p.host_labels()[:reg_start]:
        lowered = comp.text.lower()
        for brand in brands:
            if brand in lowered:
                findings.append(
                    Finding(rule.id, comp.id, comp.span,
                            _render(rule, text=comp.text, brand=brand,
                                    registered_domain=p.registered_domain))
                )
                break
    return findings


def _find_excessive_subdomains(p: ParsedUrl, rule: Rule, brands: list[str]) -> list[Finding]:
    reg_start = p.registered_label_start()
    if reg_start is None or reg_start <= 3:
        return []
    comp = p.host_labels()[0]
    return [Finding(rule.id, comp.id, comp.span,
                    _render(rule, extra=reg_start, registered_domain=p.registered_domain))]


def _find_brand_misspelled(p: ParsedUrl, rule: Rule, brands: list[str]) -> list[Finding]:
    findings = []
    for comp in p.host_labels():
        lowered = comp.text.lower()
        for brand in brands:
            if lowered != brand and levenshtein(lowered, brand) == 1:
                findings.append(
                    Finding(rule.id, comp.id, comp.span,
                            _render(rule, text=comp.text, brand=brand))
                )
                break
    return findings


_EVALUATORS: dict[str, Callable[[ParsedUrl, Rule, list[str]], list[Finding]]] = {
    "ip_address_host": _find_ip_host,
    "numeric_host_prefix": _find_numeric_prefix,
    "brand_hyphen": _find_brand_hyphen,
    "userinfo_present": _find_userinfo,
    "brand_in_subdomain": _find_brand_in_subdomain,
    "excessive_subdomains": _find_excessive_subdomains,
    "brand_misspelled": _find_brand_misspelled,
}


def analyze(p: ParsedUrl, rules: RuleSet, brands: list[str]) -> AnalysisReport:
    """Evaluate every rule independently and order findings for teaching.

    Pure and deterministic: findings sort by severity (high first), then
    span start, then rule id. Verdict is phishing iff anything fired.
    """
    findings: list[Finding] = []
    for rule in rules:
        evaluator = _EVALUATORS.get(rule.id)
        if evaluator is None:
            continue
        findings.extend(evaluator(p, rule, brands))
    findings.sort(key=lambda f: (-rules[f.rule_id].severity, f.span.start, f.rule_id))
    verdict = Verdict.PHISHING if findings else Verdict.LEGITIMATE
    return AnalysisReport(verdict=verdict, findings=tuple(findings))


def grade_component_pick(report: AnalysisReport, pick: ComponentId) -> PickGrade:
    """Grade a player's which-part-is-phishing pick against a report."""
    if report.verdict is not Verdict.PHISHING:
        raise NotPhishing("component picks are only graded on phishing reports")
    if any(f.component == pick for f in report.findings):
        return PickGrade.CORRECT
    return PickGrade.INCORRECT


def catalog(rules: RuleSet) -> list[dict]:
    """Rule catalog for the UI and docs."""
    return [
        {
            "id": rule.id,
            "severity": rule.severity,
            "description": rule.description,
            "hint": rule.hint,
            "paper_anchored": rule.paper_anchored,
        }
        for rule in rules
    ]


def catalog_json(rules: RuleSet) -> str:
    return json.dumps(catalog(rules), indent=2)
