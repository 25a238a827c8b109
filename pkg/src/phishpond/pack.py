"""Worm packs: the labeled URL corpus that drives game sessions.

A pack is UTF-8 JSON Lines: one header object (name, version, brands)
followed by one item object per line. Items carry the ground-truth label,
the components that give a phishing URL away, a difficulty tier, and the
mentor hint. The pack's label is authoritative at play time; the rule
engine is the explainer, so ``validate_pack`` only warns when the two
disagree.

``generate_item`` builds worms from the rule engine itself, so generated
packs always validate cleanly and every seed reproduces the same corpus.
"""
from __future__ import annotations

import json
import random
import string
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable

from phishpond import rules as rules_mod
from phishpond.rules import RuleSet, Verdict, analyze
from phishpond.urls import ComponentId, ComponentKind, MalformedUrl, parse_url


class Label(str, Enum):
    PHISHING = "phishing"
    LEGITIMATE = "legitimate"


class UnknownRule(ValueError):
    pass


@dataclass(frozen=True)
class PackItem:
    url: str
    label: Label
    phish_components: tuple[ComponentId, ...]
    difficulty: int
    brand: str | None
    hint: str

    def to_json(self) -> dict:
        return {
            "url": self.url,
            "label": self.label.value,
            "phish_components": [c.to_json() for c in self.phish_components],
            "difficulty": self.difficulty,
            "brand": self.brand,
            "hint": self.hint,
        }


@dataclass(frozen=True)
class ContentPack:
    name: str
    version: str
    brands: tuple[str, ...]
    items: tuple[PackItem, ...]

    def tier(self, difficulty: int, label: Label) -> tuple[PackItem, ...]:
        return tuple(
            item for item in self.items
            if item.difficulty == difficulty and item.label is label
        )


@dataclass(frozen=True)
class PackIssue:
    """One load-time problem; ``line`` is 1-based (header is line 1)."""

    line: int | None
    code: str  # parse_error | invariant_violation | empty_tier
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}" if self.line is not None else "pack"
        return f"{where}: {self.code}: {self.message}"


class PackLoadError(ValueError):
    def __init__(self, issues: list[PackIssue]):
        super().__init__("; ".join(str(issue) for issue in issues))
        self.issues = tuple(issues)


@dataclass(frozen=True)
class PackWarning:
    item_index: int
    url: str
    code: str  # diverges_from_rules
    message: str


@dataclass(frozen=True)
class ValidationReport:
    warnings: tuple[PackWarning, ...]

    @property
    def clean(self) -> bool:
        return not self.warnings


_HEADER_KEYS = {"name", "version", "brands"}
_ITEM_KEYS = {"url", "label", "phish_components", "difficulty", "brand", "hint"}


def _parse_component_list(value: object) -> tuple[ComponentId, ...]:
    if not isinstance(value, list):
        raise ValueError("phish_components must be a list")
    out = []
    for entry in value:
        if not isinstance(entry, dict) or set(entry) != {"kind", "index"}:
            raise ValueError("component must be an object with exactly kind and index")
        try:
            kind = ComponentKind(entry["kind"])
        except ValueError:
            raise ValueError(f"unknown component kind {entry['kind']!r}")
        index = entry["index"]
        if isinstance(index, bool) or not isinstance(index, int) or index < 0:
            raise ValueError("component index must be a non-negative integer")
        out.append(ComponentId(kind, index))
    return tuple(out)


def _parse_item(obj: dict) -> PackItem:
    if set(obj) != _ITEM_KEYS:
        unknown = sorted(set(obj) - _ITEM_KEYS)
        missing = sorted(_ITEM_KEYS - set(obj))
        parts = []
        if unknown:
            parts.append(f"unknown fields {unknown}")
        if missing:
            parts.append(f"missing fields {missing}")
        raise ValueError("; ".join(parts))
    if not isinstance(obj["url"], str):
        raise ValueError("url must be a string")
    try:
        label = Label(obj["label"])
    except ValueError:
        raise ValueError(f"label must be phishing or legitimate, got {obj['label']!r}")
    difficulty = obj["difficulty"]
    if isinstance(difficulty, bool) or not isinstance(difficulty, int):
        raise ValueError("difficulty must be an integer")
    brand = obj["brand"]
    if brand is not None and not isinstance(brand, str):
        raise ValueError("brand must be a string or null")
    if not isinstance(obj["hint"], str):
        raise ValueError("hint must be a string")
    return PackItem(
        url=obj["url"],
        label=label,
        phish_components=_parse_component_list(obj["phish_components"]),
        difficulty=difficulty,
        brand=brand,
        hint=obj["hint"],
    )


def _check_item_invariants(item: PackItem) -> list[str]:
    problems = []
    if item.difficulty not in (1, 2, 3):
        problems.append(f"difficulty must be 1..3, got {item.difficulty}")
    try:
        parsed = parse_url(item.url)
    except MalformedUrl as exc:
        problems.append(f"url does not parse: {exc}")
        return problems
    ids = {comp.id for comp in parsed.components}
    for cid in item.phish_components:
        if cid not in ids:
            problems.append(
                f"phish component {cid.kind.value}[{cid.index}] not present in url"
            )
    if item.label is Label.LEGITIMATE and item.phish_components:
        problems.append("legitimate item must have empty phish_components")
    if item.label is Label.PHISHING and not item.phish_components:
        problems.append("phishing item must name at least one phish component")
    return problems


def load_pack(source: IO[str] | Iterable[str]) -> ContentPack:
    """Load and fully check a pack; collects every problem before raising.

    Raises :class:`PackLoadError` carrying all issues, each tagged with its
    line number.
    """
    issues: list[PackIssue] = []
    header: dict | None = None
    items: list[PackItem] = []
    seen_urls: dict[str, int] = {}

    line_no = 0
    for line_no, line in enumerate(source, start=1):
        text = line.strip()
        if not text:
            issues.append(PackIssue(line_no, "parse_error", "blank line"))
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            issues.append(PackIssue(line_no, "parse_error", f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            issues.append(PackIssue(line_no, "parse_error", "line is not an object"))
            continue
        if line_no == 1:
            if set(obj) != _HEADER_KEYS:
                issues.append(PackIssue(1, "parse_error",
                                        f"header must have exactly fields {sorted(_HEADER_KEYS)}"))
                continue
            if (not isinstance(obj["name"], str) or not isinstance(obj["version"], str)
                    or not isinstance(obj["brands"], list)
                    or not all(isinstance(b, str) for b in obj["brands"])):
                issues.append(PackIssue(1, "parse_error", "header field types invalid"))
                continue
            header = obj
            continue
        try:
            item = _parse_item(obj)
        except ValueError as exc:
            issues.append(PackIssue(line_no, "parse_error", str(exc)))
            continue
        problems = _check_item_invariants(item)
        if item.url in seen_urls:
            problems.append(f"duplicate url (first seen on line {seen_urls[item.url]})")
        else:
            seen_urls[item.url] = line_no
        for problem in problems:
            issues.append(PackIssue(line_no, "invariant_violation", problem))
        if not problems:
            items.append(item)

    if line_no == 0:
        issues.append(PackIssue(1, "parse_error", "empty pack"))
    if header is None and not any(issue.line == 1 for issue in issues):
        issues.append(PackIssue(1, "parse_error", "missing header line"))

    for difficulty in (1, 2, 3):
        for label in Label:
            if not any(i.difficulty == difficulty and i.label is label for i in items):
                issues.append(PackIssue(
                    None, "empty_tier",
                    f"no {label.value} items at difficulty {difficulty}",
                ))

    if issues:
        raise PackLoadError(issues)
    assert header is not None
    return ContentPack(
        name=header["name"],
        version=header["version"],
        brands=tuple(header["brands"]),
        items=tuple(items),
    )


def write_pack(pack: ContentPack, sink: IO[str]) -> None:
    header = {"name": pack.name, "version": pack.version, "brands": list(pack.brands)}
    sink.write(json.dumps(header, ensure_ascii=False) + "\n")
    for item in pack.items:
        sink.write(json.dumps(item.to_json(), ensure_ascii=False) + "\n")


def validate_pack(pack: ContentPack, rules: RuleSet) -> ValidationReport:
    """Cross-check pack labels against the rule engine. Warnings only.

    The pack label stays authoritative; a warning means the analyzer and
    the pack author disagree and the item's teaching may confuse players.
    """
    brands = [b.lower() for b in pack.brands]
    warnings = []
    for index, item in enumerate(pack.items):
        report = analyze(parse_url(item.url), rules, brands)
        if item.label is Label.PHISHING:
            hit = any(f.component in item.phish_components for f in report.findings)
            if not hit:
                warnings.append(PackWarning(
                    index, item.url, "diverges_from_rules",
                    "no rule finding targets any declared phish component",
                ))
        else:
            if report.verdict is Verdict.PHISHING:
                fired = ",".join(sorted({f.rule_id for f in report.findings}))
                warnings.append(PackWarning(
                    index, item.url, "diverges_from_rules",
                    f"rules fire on item labeled legitimate: {fired}",
                ))
    return ValidationReport(warnings=tuple(warnings))


# Host/path filler vocabulary. Host words are chosen to stay clear of brand
# names (no dictionary word here is within one edit of a realistic brand).
_SAFE_WORDS = (
    "river", "meadow", "harbor", "lantern", "willow", "orchard",
    "summit", "prairie", "cobalt", "falcon", "ember", "quartz",
)
_SUBDOMAIN_WORDS = ("mail", "files", "static", "portal", "data", "img", "web", "app")
_LURE_WORDS = (
    "login", "secure", "account", "verify", "update", "billing",
    "signin", "webscr", "confirm", "session",
)
_LEGIT_WORDS = ("home", "about", "products", "news", "careers", "support", "contact", "help")
_QUERY_KEYS = ("id", "ref", "session", "token", "q")
_SUFFIXES = ("com", "org", "net", "co.uk")

LEGIT_HINT = "look for the company's own name right before the ending, with nothing odd around it"


def _lure_path(rng: random.Random, difficulty: int, brand: str) -> str:
    segments = rng.sample(_LURE_WORDS, difficulty)
    if difficulty >= 3:
        segments.insert(rng.randrange(len(segments) + 1), f"{brand}.co.uk".replace(".", "-"))
        key = rng.choice(_QUERY_KEYS)
        token = "".join(rng.choices(string.ascii_lowercase + string.digits, k=8))
        return "/" + "/".join(segments) + f"?{key}={token}"
    return "/" + "/".join(segments)


def _legit_path(rng: random.Random, difficulty: int) -> str:
    if difficulty == 1 and rng.random() < 0.5:
        return "/"
    segments = rng.sample(_LEGIT_WORDS, difficulty)
    path = "/" + "/".join(segments)
    if difficulty >= 3:
        path += f"?{rng.choice(_QUERY_KEYS)}={rng.randrange(100, 9999)}"
    return path


def _misspell(rng: random.Random, brand: str) -> str:
    letters = string.ascii_lowercase
    while True:
        op = rng.choice(("delete", "substitute", "insert"))
        i = rng.randrange(len(brand))
        if op == "delete" and len(brand) > 2:
            candidate = brand[:i] + brand[i + 1:]
        elif op == "substitute":
            candidate = brand[:i] + rng.choice(letters) + brand[i + 1:]
        else:
            candidate = brand[:i] + rng.choice(letters) + brand[i:]
        if candidate != brand:
            return candidate


def _phishing_host(rng: random.Random, brand: str, rule_id: str, difficulty: int) -> tuple[str, str]:
    """Returns (userinfo-or-empty, host) arranged to fire rule_id.

    Difficulty 3 composes a second indicator on another component.
    """
    word = rng.choice(_SAFE_WORDS)
    suffix = rng.choice(_SUFFIXES)
    compose = difficulty >= 3
    userinfo = ""
    if rule_id == "ip_address_host":
        host = ".".join(str(rng.randint(1, 254)) for _ in range(4))
        if compose:
            userinfo = f"www.{brand}.{rng.choice(('com', 'co.uk'))}"
    elif rule_id == "numeric_host_prefix":
        host = f"{rng.randint(10, 999)}{word}.{suffix}"
        if compose:
            userinfo = f"{brand}.com"
    elif rule_id == "brand_hyphen":
        flip = rng.random() < 0.5
        label = f"{brand}-{word}" if flip else f"{word}-{brand}"
        host = f"{label}.{suffix}"
        if compose:
            host = f"{brand}.{host}"
    elif rule_id == "userinfo_present":
        userinfo = f"www.{brand}.{rng.choice(('com', 'co.uk'))}"
        host = f"{word}.{suffix}"
        if compose:
            host = ".".join(str(rng.randint(1, 254)) for _ in range(4))
    elif rule_id == "brand_in_subdomain":
        host = f"{brand}.{word}.{suffix}"
        if compose:
            fillers = rng.sample(_SUBDOMAIN_WORDS, 3)
            host = f"{brand}." + ".".join(fillers) + f".{word}.{suffix}"
    elif rule_id == "excessive_subdomains":
        fillers = rng.sample(_SUBDOMAIN_WORDS, 4)
        if compose:
            fillers[rng.randrange(4)] = brand
        host = ".".join(fillers) + f".{word}.{suffix}"
    elif rule_id == "brand_misspelled":
        host = f"{_misspell(rng, brand)}.{suffix}"
        if compose:
            host = f"{brand}.{host}"
    else:
        raise UnknownRule(f"unknown rule id {rule_id!r}")
    return userinfo, host


def generate_item(
    rng: random.Random,
    brand: str,
    rule_id: str,
    difficulty: int,
    rules: RuleSet | None = None,
) -> PackItem:
    """Build one worm deterministically from (rng state, arguments).

    The produced URL is checked against the rule engine: the requested rule
    must fire, and the declared phish components are exactly the fired
    components. ``rule_id="none"`` produces a legitimate worm verified to
    fire nothing.
    """
    if difficulty not in (1, 2, 3):
        raise ValueError(f"difficulty must be 1..3, got {difficulty}")
    brand = brand.lower()
    if not brand:
        raise ValueError("brand must be non-empty")
    ruleset = rules if rules is not None else rules_mod.builtin_ruleset()

    if rule_id == "none":
        suffix = rng.choice(_SUFFIXES)
        host = f"www.{brand}.{suffix}"
        url = f"https://{host}{_legit_path(rng, difficulty)}"
        report = analyze(parse_url(url), ruleset, [brand])
        if report.findings:
            raise ValueError(f"generated legitimate url fires rules: {url}")
        return PackItem(
            url=url, label=Label.LEGITIMATE, phish_components=(),
            difficulty=difficulty, brand=brand, hint=LEGIT_HINT,
        )

    if rule_id not in ruleset:
        raise UnknownRule(f"unknown rule id {rule_id!r}")
    userinfo, host = _phishing_host(rng, brand, rule_id, difficulty)
    auth = f"{userinfo}@{host}" if userinfo else host
    url = f"http://{auth}{_lure_path(rng, difficulty, brand)}"
    report = analyze(parse_url(url), ruleset, [brand])
    fired = {f.rule_id for f in report.findings}
    if rule_id not in fired:
        raise ValueError(f"generated url does not fire {rule_id}: {url}")
    components = tuple(dict.fromkeys(f.component for f in report.findings))
    return PackItem(
        url=url, label=Label.PHISHING, phish_components=components,
        difficulty=difficulty, brand=brand, hint=ruleset[rule_id].hint,
    )


#: Which rules each difficulty tier draws from when generating a pack:
#: tier 1 blatant, tier 2 subtle, tier 3 composed.
TIER_RULES = {
    1: ("ip_address_host", "brand_hyphen", "userinfo_present", "numeric_host_prefix"),
    2: ("brand_in_subdomain", "brand_misspelled", "brand_hyphen", "excessive_subdomains"),
    3: ("ip_address_host", "brand_in_subdomain", "brand_misspelled",
        "userinfo_present", "excessive_subdomains", "brand_hyphen"),
}


def generate_pack(
    seed: int,
    name: str = "starter",
    version: str = "1",
    brands: tuple[str, ...] = ("hsbc", "paypal", "google"),
    per_tier: int = 6,
) -> ContentPack:
    """Generate a full pack: per_tier phishing + per_tier legitimate worms
    in each difficulty tier, cycling brands and tier-appropriate rules."""
    rng = random.Random(seed)
    brands = tuple(b.lower() for b in brands)
    items: list[PackItem] = []
    used_urls: set[str] = set()
    for difficulty in (1, 2, 3):
        pool = TIER_RULES[difficulty]
        for i in range(per_tier):
            brand = brands[i % len(brands)]
            rule_id = pool[i % len(pool)]
            item = generate_item(rng, brand, rule_id, difficulty)
            while item.url in used_urls:
                item = generate_item(rng, brand, rule_id, difficulty)
            used_urls.add(item.url)
            items.append(item)
        for i in range(per_tier):
            brand = brands[i % len(brands)]
            item = generate_item(rng, brand, "none", difficulty)
            while item.url in used_urls:
                item = generate_item(rng, brand, "none", difficulty)
            used_urls.add(item.url)
            items.append(item)
    return ContentPack(name=name, version=version, brands=brands, items=tuple(items))
