"""Pack loading, validation, serialization round-trip, seeded generation."""
from __future__ import annotations

import io
import json
import random

import pytest

from phishpond.pack import (
    ContentPack,
    Label,
    PackItem,
    PackLoadError,
    UnknownRule,
    generate_item,
    generate_pack,
    load_pack,
    validate_pack,
    write_pack,
)
from phishpond.rules import Verdict, analyze, builtin_ruleset
from phishpond.urls import ComponentId, ComponentKind, parse_url

PAPER_URL = "http://187.52.91.111/.www.hsbc.co.uk"
RULES = builtin_ruleset()


def item_line(url, label, components, difficulty, brand="hsbc", hint="tip"):
    return json.dumps({
        "url": url,
        "label": label,
        "phish_components": components,
        "difficulty": difficulty,
        "brand": brand,
        "hint": hint,
    })


def minimal_pack_lines():
    lines = [json.dumps({"name": "mini", "version": "1", "brands": ["hsbc"]})]
    ip = [{"kind": "ipv4_host", "index": 0}]
    label0 = [{"kind": "host_label", "index": 0}]
    lines.append(item_line("http://187.52.91.111/x", "phishing", ip, 1))
    lines.append(item_line("http://hsbc-login.com/x", "phishing", label0, 2))
    lines.append(item_line("http://hsbc.files.portal.data.evil.com/x", "phishing", label0, 3))
    for d, path in ((1, "/"), (2, "/about"), (3, "/about/news")):
        lines.append(item_line(f"https://www.hsbc.co.uk{path}", "legitimate", [], d))
    return lines


def test_load_minimal_pack():
    pack = load_pack(minimal_pack_lines())
    assert pack.name == "mini" and pack.version == "1"
    assert pack.brands == ("hsbc",)
    assert len(pack.items) == 6
    for d in (1, 2, 3):
        for label in Label:
            assert pack.tier(d, label), (d, label)


def test_absent_component_is_invariant_violation():
    lines = minimal_pack_lines()
    lines.append(item_line("http://187.52.91.112/x", "phishing",
                           [{"kind": "host_label", "index": 9}], 1))
    with pytest.raises(PackLoadError) as exc:
        load_pack(lines)
    issue = next(i for i in exc.value.issues if i.line == len(lines))
    assert issue.code == "invariant_violation"
    assert "host_label[9]" in issue.message


def test_duplicate_url_reported_on_second_line():
    lines = minimal_pack_lines()
    lines.append(lines[1])  # re-add line 2's item as line 8
    with pytest.raises(PackLoadError) as exc:
        load_pack(lines)
    issue = next(i for i in exc.value.issues if "duplicate" in i.message)
    assert issue.line == len(lines)
    assert "line 2" in issue.message


def test_errors_are_collected_not_fail_fast():
    lines = minimal_pack_lines()
    lines[3] = "{not json"
    lines.append(item_line("notaurl", "phishing", [{"kind": "query", "index": 0}], 9))
    with pytest.raises(PackLoadError) as exc:
        load_pack(lines)
    codes = {(i.line, i.code) for i in exc.value.issues}
    assert (4, "parse_error") in codes
    assert (8, "invariant_violation") in codes
    # losing the difficulty-3 phishing item also empties that tier
    assert any(i.code == "empty_tier" for i in exc.value.issues)


def test_empty_tier_reported():
    lines = [line for line in minimal_pack_lines()
             if '"difficulty": 3' not in line or '"legitimate"' not in line]
    with pytest.raises(PackLoadError) as exc:
        load_pack(lines)
    tiers = [i for i in exc.value.issues if i.code == "empty_tier"]
    assert len(tiers) == 1
    assert "legitimate items at difficulty 3" in tiers[0].message


def test_unknown_fields_rejected():
    lines = minimal_pack_lines()
    obj = json.loads(lines[1])
    obj["bonus"] = True
    lines[1] = json.dumps(obj)
    with pytest.raises(PackLoadError) as exc:
        load_pack(lines)
    assert any(i.code == "parse_error" and "bonus" in i.message for i in exc.value.issues)


def test_write_then_load_round_trip():
    pack = load_pack(minimal_pack_lines())
    buf = io.StringIO()
    write_pack(pack, buf)
    buf.seek(0)
    assert load_pack(buf) == pack


def test_validate_paper_item_is_clean():
    lines = [json.dumps({"name": "p", "version": "1", "brands": ["hsbc"]})]
    lines.append(item_line(PAPER_URL, "phishing", [{"kind": "ipv4_host", "index": 0}], 1))
    lines += minimal_pack_lines()[2:]
    report = validate_pack(load_pack(lines), RULES)
    assert report.clean


def test_validate_warns_on_divergent_legitimate_item():
    lines = minimal_pack_lines()
    lines.append(item_line("http://hsbc-offers.com", "legitimate", [], 1))
    report = validate_pack(load_pack(lines), RULES)
    assert not report.clean
    warning = report.warnings[0]
    assert warning.url == "http://hsbc-offers.com"
    assert "brand_hyphen" in warning.message


def test_validate_warns_when_no_finding_matches_declared_component():
    lines = minimal_pack_lines()
    # declared phish component is the path, but rules incriminate the host
    lines[1] = item_line("http://187.52.91.111/x", "phishing",
                         [{"kind": "path_segment", "index": 0}], 1)
    report = validate_pack(load_pack(lines), RULES)
    assert any(w.code == "diverges_from_rules" for w in report.warnings)


def test_generate_item_deterministic():
    a = generate_item(random.Random(42), "hsbc", "ip_address_host", 1)
    b = generate_item(random.Random(42), "hsbc", "ip_address_host", 1)
    assert a == b


def test_generated_item_fires_requested_rule():
    item = generate_item(random.Random(42), "hsbc", "ip_address_host", 1)
    report = analyze(parse_url(item.url), RULES, ["hsbc"])
    assert "ip_address_host" in {f.rule_id for f in report.findings}
    assert item.label is Label.PHISHING
    assert item.phish_components


def test_generated_legitimate_item_fires_nothing():
    item = generate_item(random.Random(7), "hsbc", "none", 1)
    assert item.label is Label.LEGITIMATE
    assert item.phish_components == ()
    report = analyze(parse_url(item.url), RULES, ["hsbc"])
    assert report.verdict is Verdict.LEGITIMATE


@pytest.mark.parametrize("rule_id", [r.id for r in RULES])
@pytest.mark.parametrize("difficulty", [1, 2, 3])
def test_generate_every_rule_and_tier(rule_id, difficulty):
    item = generate_item(random.Random(1234), "paypal", rule_id, difficulty)
    report = analyze(parse_url(item.url), RULES, ["paypal"])
    fired = {f.rule_id for f in report.findings}
    assert rule_id in fired
    if difficulty == 1:
        assert len(item.phish_components) == 1
    if difficulty == 3:
        assert len(fired) >= 2


def test_generate_unknown_rule():
    with pytest.raises(UnknownRule):
        generate_item(random.Random(1), "hsbc", "no_such_rule", 1)


def test_generated_pack_validates_clean():
    pack = generate_pack(seed=3)
    assert len(pack.items) == 36
    assert validate_pack(pack, RULES).clean


def test_generated_pack_deterministic_and_round_trips():
    a, b = generate_pack(seed=3), generate_pack(seed=3)
    assert a == b
    buf_a, buf_b = io.StringIO(), io.StringIO()
    write_pack(a, buf_a)
    write_pack(b, buf_b)
    assert buf_a.getvalue() == buf_b.getvalue()
    buf_a.seek(0)
    assert load_pack(buf_a) == a


def test_generated_pack_loads_through_literal_format():
    buf = io.StringIO()
    write_pack(generate_pack(seed=11), buf)
    first = json.loads(buf.getvalue().splitlines()[0])
    assert set(first) == {"name", "version", "brands"}
    second = json.loads(buf.getvalue().splitlines()[1])
    assert set(second) == {"url", "label", "phish_components", "difficulty", "brand", "hint"}
    for comp in second["phish_components"]:
        assert set(comp) == {"kind", "index"}
