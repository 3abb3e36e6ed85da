#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Reference regex-engine run for the query-rewrite fixture suite.

Applies the six deletion patterns with Python's `re` (lowercase first, every
match deleted, rules in order, leading whitespace trimmed) and prints the
expected outputs as a C++ initializer list. When no rule fires the question
is returned verbatim.
"""
import json
import re
import sys
from pathlib import Path

RULES = [
    r"^does( the)? document (\S)+ (you)? ",
    r"^does it (\S)+ ",
    r"^what does( the)? document (\S)+ (you)? ",
    r"according to( the)? document(\s,\s|,\s|\s)",
    r"in( the)? document ",
    r"^assistant, ",
]

CASES = [
    "Assistant, summarize section 2",
    "in the document what is the budget",
    "who is the CEO",
    "does the document mention the budget",
    "does the document mention  the budget",
    "does the document tell you the budget",
    "Does the document state who is teaching the course?",
    "Does the document state  who is teaching the course?",
    "does document list you the sponsors",
    "does it mention the deadline",
    "does it say anything about funding",
    "Does it  mention the deadline",
    "what does the document say about growth",
    "what does the document say  about growth",
    "What does document tell you about hiring?",
    "according to the document, who approves grants",
    "according to document , who approves grants",
    "according to the document who approves grants",
    "according to the documents who approves grants",
    "where in the document is the timeline",
    "what is said in document about safety",
    "within the document find the summary",
    "assistant, read the summary of risks",
    "assistant,what is the scope",
    "is the budget in the document and in the document appendix",
    "tell me according to the document , the total",
    "in the doc what is the budget",
    "",
    "ASSISTANT, IN THE DOCUMENT WHO SIGNS",
    "does the document, mention the budget",
]


def rewrite(q):
    s = q.lower()
    applied = []
    for i, pat in enumerate(RULES, start=1):
        if re.search(pat, s):
            applied.append(i)
            s = re.sub(pat, "", s)
    if not applied:
        return q, applied
    return s.lstrip(), applied


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parents[1] / "acceptance" / "rewrite_cases.inc"
    lines = ["// Generated by tests/oracles/rewrite_oracle.py; do not edit."]
    for q in CASES:
        result, applied = rewrite(q)
        again, _ = rewrite(result)
        assert again == result, q
        lines.append("{%s, %s, {%s}}," % (
            json.dumps(q), json.dumps(result), ", ".join(map(str, applied))))
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
