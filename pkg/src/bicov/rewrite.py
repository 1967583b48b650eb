"""Degree-truncated rewriting and completion for finitely presented algebras.

Words are compared by a degree-compatible order (degree first, then
lexicographically by generator precedence), so rewriting never raises the
degree.  :func:`complete` runs a noncommutative Buchberger procedure that
resolves every overlap ambiguity of degree at most ``D``; if afterwards every
ambiguity of *any* degree resolves, the system is flagged globally confluent
(Bergman's diamond lemma) and no truncation limit applies.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence

from .freealg import Alphabet, NCPoly, Word, add_into

__all__ = [
    "MonomialOrder",
    "RewriteRule",
    "RewriteSystem",
    "ConfluenceReport",
    "TruncationExceeded",
    "CoefficientBlowup",
    "normal_form",
    "complete",
    "enumerate_normal_words",
    "certify_confluence",
    "overlaps",
]


class TruncationExceeded(ValueError):
    pass


class CoefficientBlowup(RuntimeError):
    pass


class MonomialOrder:
    """Degree-lexicographic order given by a generator precedence."""

    def __init__(self, rank: Sequence[int]):
        self.rank = tuple(rank)
        if sorted(self.rank) != list(range(len(self.rank))):
            raise ValueError("rank must be a permutation")

    @classmethod
    def natural(cls, n: int) -> "MonomialOrder":
        return cls(range(n))

    @classmethod
    def from_precedence(cls, alphabet: Alphabet, names: Sequence[str]) -> "MonomialOrder":
        """``names`` lists the generators from smallest to largest."""
        rank = [0] * len(alphabet)
        if sorted(names) != sorted(alphabet.names):
            raise ValueError("precedence must list every generator once")
        for pos, name in enumerate(names):
            rank[alphabet.index(name)] = pos
        return cls(rank)

    def key(self, w: Word):
        r = self.rank
        return (len(w), tuple(r[x] for x in w))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.rank == self.rank

    def __hash__(self):
        return hash(self.rank)

    def __repr__(self):
        return f"MonomialOrder({self.rank})"


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: Dict[Word, object]


def _contains(word: Word, sub: Word) -> bool:
    n, k = len(word), len(sub)
    return any(word[i:i + k] == sub for i in range(n - k + 1))


def overlaps(u: Word, v: Word):
    """Offsets k with u = A.B, v = B.C, |B| = k, proper on both sides."""
    limit = min(len(u), len(v))
    for k in range(1, limit):
        if u[len(u) - k:] == v[:k]:
            yield k


class _Reducer:
    """Leftmost-redex normal forms with a per-word memo."""

    def __init__(self, rules: Dict[Word, Dict[Word, object]]):
        self.rules = rules
        self.cache: Dict[Word, Dict[Word, object]] = {}
        self.refresh()

    def refresh(self):
        self.lengths = sorted({len(l) for l in self.rules})
        self.cache.clear()

    def redex(self, word: Word):
        rules = self.rules
        n = len(word)
        for i in range(n):
            for L in self.lengths:
                if i + L > n:
                    break
                sub = word[i:i + L]
                if sub in rules:
                    return i, sub
        return None

    def word(self, word: Word) -> Dict[Word, object]:
        hit = self.cache.get(word)
        if hit is not None:
            return hit
        found = self.redex(word)
        if found is None:
            out = {word: None}  # marker: coefficient one, filled by caller
        else:
            i, lhs = found
            prefix, suffix = word[:i], word[i + len(lhs):]
            out = {}
            for w, c in self.rules[lhs].items():
                sub = self.word(prefix + w + suffix)
                for w2, c2 in sub.items():
                    add_into(out, {w2: c if c2 is None else c * c2})
        self.cache[word] = out
        return out

    def reduce(self, terms: Dict[Word, object]) -> Dict[Word, object]:
        out: Dict[Word, object] = {}
        for w, c in terms.items():
            nf = self.word(w)
            for w2, c2 in nf.items():
                add_into(out, {w2: c if c2 is None else c * c2})
        return out


class RewriteSystem:
    """Oriented relations over an alphabet, with the degree up to which they are confluent.

    ``completed_degree is None`` means every ambiguity resolves, so normal
    forms are valid in all degrees.
    """

    def __init__(self, field, alphabet: Alphabet, order: MonomialOrder,
                 rules: Dict[Word, Dict[Word, object]], completed_degree: Optional[int],
                 relations: Sequence[NCPoly] = ()):
        self.field = field
        self.alphabet = alphabet
        self.order = order
        self.completed_degree = completed_degree
        self.relations = tuple(relations)
        key = order.key
        for lhs, rhs in rules.items():
            for w in rhs:
                if not key(w) < key(lhs):
                    raise ValueError(f"rule {alphabet.format_word(lhs)} -> ... has rhs word "
                                     f"{alphabet.format_word(w)} not smaller than lhs")
        self.rules = {l: dict(r) for l, r in sorted(rules.items(), key=lambda kv: key(kv[0]))}
        self._reducer = _Reducer(self.rules)
        self._normal_words: Dict[int, List[Word]] = {0: [()]}

    @classmethod
    def from_rules(cls, field, alphabet: Alphabet, order: MonomialOrder,
                   rules: Dict, completed_degree: Optional[int] = None) -> "RewriteSystem":
        """Rules given as {word or name string: {word or string: coeff}}."""
        def w(x):
            return alphabet.word(x) if isinstance(x, str) else tuple(x)
        parsed = {w(l): {w(k): field(c) for k, c in r.items()} for l, r in rules.items()}
        return cls(field, alphabet, order, parsed, completed_degree)

    @property
    def globally_confluent(self) -> bool:
        return self.completed_degree is None

    def rule_list(self) -> List[RewriteRule]:
        return [RewriteRule(l, r) for l, r in self.rules.items()]

    def check_degree(self, d: int):
        if self.completed_degree is not None and d > self.completed_degree:
            raise TruncationExceeded(
                f"degree {d} exceeds completed degree {self.completed_degree} of {self.alphabet.label}")

    def reduce_terms(self, terms: Dict[Word, object], check: bool = True) -> Dict[Word, object]:
        if check and terms:
            self.check_degree(max(len(w) for w in terms))
        return self._reducer.reduce(terms)

    def nf_word(self, word: Word) -> Dict[Word, object]:
        one = self.field.one
        return {w: one if c is None else c for w, c in self._reducer.word(word).items()}

    def is_normal(self, word: Word) -> bool:
        return self._reducer.redex(word) is None

    def format_rules(self) -> List[str]:
        a = self.alphabet
        out = []
        for l, r in self.rules.items():
            rhs = NCPoly.from_words(self.field, a, r)
            out.append(f"{a.format_word(l)} -> {rhs}")
        return out

    def __len__(self):
        return len(self.rules)

    def __repr__(self):
        return (f"RewriteSystem({self.alphabet.label or self.alphabet.names}, {len(self.rules)} rules, "
                f"completed_degree={self.completed_degree})")


def normal_form(sys: RewriteSystem, p: NCPoly) -> NCPoly:
    if p.arity != 1 or p.alphabets[0] != sys.alphabet:
        raise ValueError("normal_form needs an arity-1 polynomial over the system alphabet")
    terms = sys.reduce_terms(p.words())
    return NCPoly.from_words(sys.field, sys.alphabet, terms)


def enumerate_normal_words(sys: RewriteSystem, d: int) -> List[Word]:
    """All normal words of degree exactly ``d``, in increasing order."""
    sys.check_degree(d)
    cache = sys._normal_words
    top = max(cache)
    lengths = sys._reducer.lengths
    rules = sys.rules
    n = len(sys.alphabet)
    while top < d:
        nxt = []
        for w in cache[top]:
            for x in range(n):
                cand = w + (x,)
                L = len(cand)
                if any(cand[L - l:] in rules for l in lengths if l <= L):
                    continue
                nxt.append(cand)
        top += 1
        nxt.sort(key=sys.order.key)
        cache[top] = nxt
    return list(cache[d])


@dataclass
class ConfluenceReport:
    passed: bool
    degree: int
    checked: int
    failures: List[dict] = dc_field(default_factory=list)


def _overlap_difference(reducer: _Reducer, rules, u: Word, v: Word, k: int) -> Dict[Word, object]:
    a = u[:len(u) - k]
    c = v[k:]
    left = {w + c: coef for w, coef in rules[u].items()}
    right = {a + w: coef for w, coef in rules[v].items()}
    diff = reducer.reduce(left)
    r = reducer.reduce(right)
    for w, coef in r.items():
        add_into(diff, {w: -coef})
    return diff


def _all_ambiguities(rules, order, max_degree: Optional[int]):
    amb = []
    for u in rules:
        for v in rules:
            for k in overlaps(u, v):
                deg = len(u) + len(v) - k
                if max_degree is None or deg <= max_degree:
                    amb.append((deg, order.key(u), order.key(v), k, u, v))
    amb.sort()
    return amb


def certify_confluence(sys: RewriteSystem, D: int) -> ConfluenceReport:
    """Reduce every overlap ambiguity of degree <= D both ways."""
    reducer = _Reducer(sys.rules)
    fails = []
    amb = _all_ambiguities(sys.rules, sys.order, D)
    a = sys.alphabet
    for deg, _, _, k, u, v in amb:
        diff = _overlap_difference(reducer, sys.rules, u, v, k)
        if diff:
            word = u + v[k:]
            fails.append({
                "overlap": a.format_word(word),
                "rules": (a.format_word(u), a.format_word(v)),
                "offset": k,
                "difference": str(NCPoly.from_words(sys.field, a, diff)),
            })
    # inclusion ambiguities (a left side inside another) break inter-reduction
    for u in sys.rules:
        for v in sys.rules:
            if u != v and _contains(u, v):
                fails.append({"overlap": a.format_word(u),
                              "rules": (a.format_word(u), a.format_word(v)),
                              "offset": None, "difference": "inclusion"})
    return ConfluenceReport(passed=not fails, degree=D, checked=len(amb), failures=fails)


def complete(relations: Sequence[NCPoly], order: MonomialOrder, D: int, *,
             field=None, alphabet: Optional[Alphabet] = None, max_rules: int = 20000,
             max_coeff_size: Optional[int] = None, check_global: bool = True) -> RewriteSystem:
    """Truncated completion of the two-sided ideal generated by ``relations``.

    Ambiguities are processed in increasing (degree, lhs1, lhs2, offset)
    order, so the output is deterministic.  Raises :class:`CoefficientBlowup`
    when ``max_rules`` rules or a coefficient of size above
    ``max_coeff_size`` appear.
    """
    relations = list(relations)
    if relations:
        field = relations[0].field
        alphabet = relations[0].alphabets[0]
    if field is None or alphabet is None:
        raise ValueError("empty relation list needs explicit field and alphabet")
    for r in relations:
        if r.arity != 1 or r.alphabets[0] != alphabet:
            raise ValueError("relations must be arity-1 polynomials over one alphabet")
        if r.degree() > D:
            raise TruncationExceeded(f"relation of degree {r.degree()} exceeds D={D}")
    key = order.key
    rules: Dict[Word, Dict[Word, object]] = {}
    reducer = _Reducer(rules)
    pending = deque(r.words() for r in relations)
    pairs: list = []

    def guard(terms):
        if max_coeff_size is None:
            return
        for c in terms.values():
            if c.size()[0] > max_coeff_size:
                raise CoefficientBlowup(f"coefficient {c} exceeds size {max_coeff_size}")

    def push_pairs(new: Word):
        for other in list(rules):
            cands = [(new, other), (other, new)] if other != new else [(new, new)]
            for u, v in cands:
                for k in overlaps(u, v):
                    deg = len(u) + len(v) - k
                    if deg <= D:
                        heapq.heappush(pairs, (deg, key(u), key(v), k, u, v))

    def insert(poly: Dict[Word, object]):
        r = reducer.reduce(poly)
        if not r:
            return
        lead = max(r, key=key)
        c = r[lead]
        inv = -(c.inverse())
        rhs = {w: v * inv for w, v in r.items() if w != lead}
        guard(rhs)
        for l in [l for l in rules if l != lead and _contains(l, lead)]:
            old = rules.pop(l)
            back = dict(old)
            add_into(back, {l: field(-1)})
            pending.append(back)
        rules[lead] = rhs
        reducer.refresh()
        for l in list(rules):
            if l != lead:
                rules[l] = reducer.reduce(rules[l])
        reducer.refresh()
        if len(rules) > max_rules:
            raise CoefficientBlowup(f"more than {max_rules} rules")
        push_pairs(lead)

    while pending or pairs:
        if pending:
            insert(pending.popleft())
            continue
        deg, _, _, k, u, v = heapq.heappop(pairs)
        if u not in rules or v not in rules:
            continue
        diff = _overlap_difference(reducer, rules, u, v, k)
        if diff:
            insert(diff)

    completed: Optional[int] = D
    if check_global:
        ok = True
        for deg, _, _, k, u, v in _all_ambiguities(rules, order, None):
            if _overlap_difference(reducer, rules, u, v, k):
                ok = False
                break
        if ok:
            completed = None
    return RewriteSystem(field, alphabet, order, rules, completed, relations)
