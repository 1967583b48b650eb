"""Free associative algebras, their tensor powers, and morphisms given on generators.

A word is a tuple of generator indices.  An :class:`NCPoly` of arity ``t`` is
a finitely supported map from ``t``-tuples of words to scalars, i.e. an
element of ``A_1 (x) ... (x) A_t`` where each leg carries its own
:class:`Alphabet`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, Optional, Sequence, Tuple

Word = Tuple[int, ...]
Key = Tuple[Word, ...]

__all__ = [
    "Word",
    "Alphabet",
    "NCPoly",
    "GenMorphism",
    "AlphabetMismatch",
    "MissingImage",
    "multiply",
    "apply_morphism",
    "add_into",
    "mul_terms",
]


class AlphabetMismatch(ValueError):
    pass


class MissingImage(KeyError):
    pass


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names; grid alphabets map ``a_ij`` to index ``i*cols + j``."""

    names: Tuple[str, ...]
    shape: Optional[Tuple[int, int]] = None
    label: str = ""

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names in {self.names}")
        if self.shape is not None and self.shape[0] * self.shape[1] != len(self.names):
            raise ValueError("grid shape does not match number of generators")

    @classmethod
    def grid(cls, rows: int, cols: int, label: str = "", names: Optional[Sequence[str]] = None):
        if names is None:
            sep = "" if rows < 10 and cols < 10 else "_"
            names = [f"a{i + 1}{sep}{j + 1}" for i in range(rows) for j in range(cols)]
        return cls(tuple(names), (rows, cols), label)

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def at(self, i: int, j: int) -> int:
        rows, cols = self.shape
        if not (0 <= i < rows and 0 <= j < cols):
            raise IndexError(f"grid index ({i}, {j}) outside {self.shape}")
        return i * cols + j

    def position(self, idx: int) -> Tuple[int, int]:
        return divmod(idx, self.shape[1])

    def word(self, text: str) -> Word:
        """Parse juxtaposed generator names, longest match first."""
        names = sorted(self.names, key=len, reverse=True)
        out = []
        pos = 0
        text = text.replace(" ", "").replace("*", "")
        while pos < len(text):
            for n in names:
                if text.startswith(n, pos):
                    out.append(self.names.index(n))
                    pos += len(n)
                    break
            else:
                raise ValueError(f"cannot parse word {text!r} at {pos}")
        return tuple(out)

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        out = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = self.names[w[i]]
            out.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        sep = "" if all(len(n) == 1 for n in self.names) else "*"
        return sep.join(out)


def add_into(acc: dict, terms: dict, coef=None) -> dict:
    """acc += coef * terms (in place), dropping cancelled keys."""
    if coef is None:
        for k, c in terms.items():
            v = acc.get(k)
            if v is None:
                acc[k] = c
            else:
                v = v + c
                if v:
                    acc[k] = v
                else:
                    del acc[k]
    else:
        for k, c in terms.items():
            c = coef * c
            v = acc.get(k)
            if v is None:
                if c:
                    acc[k] = c
            else:
                v = v + c
                if v:
                    acc[k] = v
                else:
                    del acc[k]
    return acc


def mul_terms(left: dict, right: dict) -> dict:
    """Product of tensor term dicts: componentwise word concatenation."""
    out: dict = {}
    for k1, c1 in left.items():
        for k2, c2 in right.items():
            key = tuple(a + b for a, b in zip(k1, k2))
            c = c1 * c2
            v = out.get(key)
            if v is None:
                out[key] = c
            else:
                v = v + c
                if v:
                    out[key] = v
                else:
                    del out[key]
    return out


class NCPoly:
    """Element of a tensor product of free algebras over a scalar field."""

    __slots__ = ("field", "alphabets", "terms")

    def __init__(self, field, alphabets, terms: Optional[Dict[Key, object]] = None):
        if isinstance(alphabets, Alphabet):
            alphabets = (alphabets,)
        self.field = field
        self.alphabets = tuple(alphabets)
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field, alphabets):
        return cls(field, alphabets)

    @classmethod
    def constant(cls, field, alphabets, c=1):
        if isinstance(alphabets, Alphabet):
            alphabets = (alphabets,)
        return cls(field, alphabets, {tuple(() for _ in alphabets): field(c)})

    @classmethod
    def one(cls, field, alphabets):
        return cls.constant(field, alphabets, 1)

    @classmethod
    def gen(cls, field, alphabet: Alphabet, name_or_index, coef=1):
        idx = alphabet.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return cls(field, (alphabet,), {((idx,),): field(coef)})

    @classmethod
    def from_word(cls, field, alphabet: Alphabet, word, coef=1):
        if isinstance(word, str):
            word = alphabet.word(word)
        return cls(field, (alphabet,), {(tuple(word),): field(coef)})

    @classmethod
    def from_words(cls, field, alphabet: Alphabet, terms: Dict[Word, object]):
        return cls(field, (alphabet,), {(w,): c for w, c in terms.items()})

    # basic protocol -----------------------------------------------------
    @property
    def arity(self) -> int:
        return len(self.alphabets)

    def words(self) -> Dict[Word, object]:
        """Arity-1 view as a dict word -> coefficient."""
        if self.arity != 1:
            raise AlphabetMismatch("words() needs an arity-1 polynomial")
        return {k[0]: c for k, c in self.terms.items()}

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(len(w) for w in k) for k in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "NCPoly"):
        if self.alphabets != other.alphabets:
            raise AlphabetMismatch(f"alphabets differ: {self._labels()} vs {other._labels()}")

    def _labels(self):
        return tuple(a.label or a.names for a in self.alphabets)

    def _wrap(self, other):
        if isinstance(other, NCPoly):
            self._check(other)
            return other
        return NCPoly.constant(self.field, self.alphabets, other)

    def __add__(self, other):
        other = self._wrap(other)
        return NCPoly(self.field, self.alphabets, add_into(dict(self.terms), other.terms))

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.field, self.alphabets, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._wrap(other)
        return NCPoly(self.field, self.alphabets,
                      add_into(dict(self.terms), other.terms, self.field(-1)))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "NCPoly":
        c = c if _is_scalar(c) else self.field(c)
        if not c:
            return NCPoly(self.field, self.alphabets)
        return NCPoly(self.field, self.alphabets, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.alphabets == other.alphabets and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self == self._wrap(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, *words) -> object:
        key = tuple(tuple(w) for w in words)
        return self.terms.get(key, self.field.zero)

    def __repr__(self):
        return f"NCPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: (tuple(len(w) for w in k), k)):
            c = self.terms[key]
            mono = " (x) ".join(a.format_word(w) for a, w in zip(self.alphabets, key))
            is_one = all(len(w) == 0 for w in key)
            cs = str(c)
            if is_one:
                body = cs
            elif cs == "1":
                body = mono
            elif cs == "-1":
                body = "-" + mono
            elif any(ch in cs for ch in "+ "):
                body = f"({cs})*{mono}"
            else:
                body = f"{cs}*{mono}"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _is_scalar(c) -> bool:
    return hasattr(c, "size") and hasattr(c, "inverse")


def multiply(p: NCPoly, r: NCPoly) -> NCPoly:
    """Bilinear extension of (componentwise) word concatenation."""
    if p.alphabets != r.alphabets:
        raise AlphabetMismatch("cannot multiply polynomials over different alphabets or arities")
    return NCPoly(p.field, p.alphabets, mul_terms(p.terms, r.terms))


@dataclass
class GenMorphism:
    """An algebra (or anti-algebra) morphism given by generator images.

    ``images[i]`` is the image of generator ``i`` of ``source``; all images
    live over ``targets``.  With ``antimultiplicative`` set, the image of a
    word is the product of the generator images in reverse order.
    """

    source: Alphabet
    targets: Tuple[Alphabet, ...]
    images: Tuple[NCPoly, ...]
    antimultiplicative: bool = False
    name: str = ""
    _word_cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.targets = tuple(self.targets)
        for idx, img in enumerate(self.images):
            if img is None:
                continue
            if img.alphabets != self.targets:
                raise AlphabetMismatch(
                    f"image of {self.source.names[idx]} has arity/alphabets "
                    f"{img._labels()} instead of {tuple(a.label for a in self.targets)}")

    def image_terms(self, gen: int) -> dict:
        if gen >= len(self.images) or self.images[gen] is None:
            raise MissingImage(f"{self.name or 'morphism'}: no image for generator "
                               f"{self.source.names[gen]}")
        return self.images[gen].terms

    def word_terms(self, word: Word, reducer: Optional[Callable[[dict], dict]] = None) -> dict:
        """Image of a single word as raw tensor terms (optionally reduced after each step)."""
        cache_key = (word, reducer)
        hit = self._word_cache.get(cache_key)
        if hit is not None:
            return hit
        if not word:
            one = self.images[0].field.one if self.images else 1
            out = {tuple(() for _ in self.targets): one}
        elif len(word) == 1:
            out = self.image_terms(word[0])
            if reducer is not None:
                out = reducer(out)
        else:
            head = self.word_terms(word[:-1], reducer)
            tail = self.image_terms(word[-1])
            out = mul_terms(tail, head) if self.antimultiplicative else mul_terms(head, tail)
            if reducer is not None:
                out = reducer(out)
        self._word_cache[cache_key] = out
        return out


def apply_morphism(f: GenMorphism, p: NCPoly, reducer=None) -> NCPoly:
    """Multiplicative (or antimultiplicative) linear extension of ``f`` to ``p``.

    ``reducer`` maps raw tensor terms to an equivalent (e.g. normal-form)
    representative and is applied after every multiplication step.
    """
    if p.arity != 1 or p.alphabets[0] != f.source:
        raise AlphabetMismatch("apply_morphism needs an arity-1 polynomial over the source alphabet")
    field = p.field
    out: dict = {}
    for (word,), c in p.terms.items():
        add_into(out, f.word_terms(word, reducer), c)
    return NCPoly(field, f.targets, out)
