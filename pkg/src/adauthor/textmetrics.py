"""Word-level diffs and the edit-distance / similarity metrics.

Diff display works on whitespace tokens (punctuation stays attached);
edit distance is character-level with unit costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError


class DimensionMismatch(DomainError):
    code = "DimensionMismatch"


class ZeroVector(DomainError):
    code = "ZeroVector"


@dataclass
class DiffOp:
    op: str  # "equal" | "insert" | "delete"
    tokens: list

    def to_dict(self):
        return {"op": self.op, "tokens": list(self.tokens)}


@dataclass
class WordDiff:
    ops: list = field(default_factory=list)

    def new_tokens(self):
        out = []
        for op in self.ops:
            if op.op in ("equal", "insert"):
                out.extend(op.tokens)
        return out

    def old_tokens(self):
        out = []
        for op in self.ops:
            if op.op in ("equal", "delete"):
                out.extend(op.tokens)
        return out


@dataclass
class EditDistanceBreakdown:
    distance: int
    insertions: int
    deletions: int
    substitutions: int

    def to_dict(self):
        return {
            "distance": self.distance,
            "insertions": self.insertions,
            "deletions": self.deletions,
            "substitutions": self.substitutions,
        }


@dataclass
class SimilarityReport:
    lexical_ratio: float
    semantic_cosine: Optional[float] = None
    stylistic_cosine: Optional[float] = None

    def to_dict(self):
        return {
            "lexical_ratio": self.lexical_ratio,
            "semantic_cosine": self.semantic_cosine,
            "stylistic_cosine": self.stylistic_cosine,
        }


def tokenize(text: str):
    return text.split()


def _lcs_table(a, b):
    n, m = len(a), len(b)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row, nxt = dp[i], dp[i + 1]
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                row[j] = nxt[j + 1] + 1
            else:
                row[j] = nxt[j] if nxt[j] >= row[j + 1] else row[j + 1]
    return dp


def word_diff(old_text: str, new_text: str) -> WordDiff:
    """LCS-based token diff with a deterministic earliest-match tie-break."""
    a, b = tokenize(old_text), tokenize(new_text)
    dp = _lcs_table(a, b)
    ops = []

    def push(op, token):
        if ops and ops[-1].op == op:
            ops[-1].tokens.append(token)
        else:
            ops.append(DiffOp(op, [token]))

    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j] and dp[i][j] == dp[i + 1][j + 1] + 1:
            push("equal", a[i])
            i += 1
            j += 1
        elif dp[i + 1][j] >= dp[i][j + 1]:
            push("delete", a[i])
            i += 1
        else:
            push("insert", b[j])
            j += 1
    for token in a[i:]:
        push("delete", token)
    for token in b[j:]:
        push("insert", token)
    return WordDiff(ops)


def levenshtein_breakdown(a: str, b: str) -> EditDistanceBreakdown:
    """Unit-cost edit distance with an operation breakdown.

    Ties during backtracking resolve substitution > deletion > insertion.
    """
    n, m = len(a), len(b)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = i
    for j in range(m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            dp[i][j] = min(dp[i - 1][j - 1] + cost, dp[i - 1][j] + 1, dp[i][j - 1] + 1)
    ins = dele = sub = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + (
            0 if a[i - 1] == b[j - 1] else 1
        ):
            if a[i - 1] != b[j - 1]:
                sub += 1
            i -= 1
            j -= 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            dele += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return EditDistanceBreakdown(
        distance=dp[n][m], insertions=ins, deletions=dele, substitutions=sub
    )


def lexical_ratio(a: str, b: str) -> float:
    """2*|LCS(tokens)| / (|tokens(a)| + |tokens(b)|); 1.0 for two empty inputs."""
    ta, tb = tokenize(a), tokenize(b)
    if not ta and not tb:
        return 1.0
    lcs = _lcs_table(ta, tb)[0][0]
    return 2.0 * lcs / (len(ta) + len(tb))


def cosine_similarity(u, v) -> float:
    u = [float(x) for x in u]
    v = [float(x) for x in v]
    if len(u) != len(v) or not u:
        raise DimensionMismatch(f"dimensions differ: {len(u)} vs {len(v)}")
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine undefined for a zero vector")
    return sum(x * y for x, y in zip(u, v)) / (nu * nv)
