"""Non-commutative polynomials over an indexed generator alphabet.

Generators come in copies of the SU_q(2) alphabet.  A copy has a
*first* letter (alpha-type: ``x``, ``a``) and a *second* letter
(gamma-type: ``y``, ``c``), each optionally starred.  Words are tuples of
generators and an :class:`NCPoly` is a finite map from words to
:class:`~braidedsuq.coeff.LaurentPoly` coefficients.

Canonical form
--------------
A :class:`RelationSystem` fixes a global copy sequence and a table of
rewrite rules on adjacent letter pairs.  Normal words have later copies
strictly to the left, and inside one copy the letters read
``y^m y*^n x^k`` or ``y^m y*^n x*^l``.  Termination is enforced by a
lexicographic measure checked when each rule is registered and,
optionally, on every rewrite step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Union

from .coeff import ONE, ZERO, EpsSeries, GaussRational, LaurentPoly, lp_expand_eps

__all__ = [
    "CopyId",
    "Generator",
    "Word",
    "NCPoly",
    "RelationSystem",
    "RewriteError",
    "UnknownGeneratorError",
    "RewriteTrace",
    "nc_mul",
    "star",
    "normalize",
    "is_zero",
    "abelianize",
    "expand_terms_eps",
    "render_word",
    "render_poly",
    "critical_pairs",
]

FIRST, SECOND = 0, 1

SPIN, SG, ROT = "spin", "sg", "rot"
_LETTERS = {SPIN: ("x", "y"), SG: ("a", "c")}


class CopyId(NamedTuple):
    kind: str
    index: int

    def __str__(self):
        label = {SPIN: "S", SG: "SG", ROT: "R"}.get(self.kind, self.kind)
        return f"{label}{self.index}"


class Generator(NamedTuple):
    copy: CopyId
    letter: int
    starred: bool = False

    @property
    def rank(self) -> int:
        """Canonical intra-copy rank: y < y* < x < x*."""
        return (2 if self.letter == FIRST else 0) + int(self.starred)

    def toggled(self) -> "Generator":
        return Generator(self.copy, self.letter, not self.starred)

    def __str__(self):
        star_ = "*" if self.starred else ""
        if self.copy.kind == ROT:
            return f"r{self.letter + 1}{star_}"
        name = _LETTERS[self.copy.kind][self.letter]
        return f"{name}{self.copy.index}{star_}"

    def __repr__(self):
        return f"Generator({self})"


Word = tuple  # tuple[Generator, ...]


def render_word(word: Word) -> str:
    return " ".join(str(g) for g in word) if word else "1"


def _word_key(word: Word):
    return (len(word), [(g.copy.kind, g.copy.index, g.letter, g.starred) for g in word])


Scalar = Union[int, GaussRational, LaurentPoly]


class NCPoly:
    """Immutable formal sum of words with Laurent-polynomial coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        clean = {}
        if terms:
            for w, c in terms.items():
                lp = LaurentPoly.coerce(c)
                if lp:
                    clean[tuple(w)] = lp
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "NCPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def gen(cls, g: Generator) -> "NCPoly":
        return cls._raw({(g,): ONE})

    @classmethod
    def word(cls, word: Iterable[Generator], coeff: Scalar = 1) -> "NCPoly":
        return cls({tuple(word): coeff})

    @classmethod
    def scalar(cls, c: Scalar) -> "NCPoly":
        return cls({(): c})

    @classmethod
    def coerce(cls, v) -> "NCPoly":
        if isinstance(v, NCPoly):
            return v
        if isinstance(v, Generator):
            return cls.gen(v)
        return cls.scalar(v)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _word_key(kv[0]))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def generators(self) -> set:
        return {g for w in self._terms for g in w}

    def coeff(self, word: Word) -> LaurentPoly:
        return self._terms.get(tuple(word), ZERO)

    def __add__(self, other):
        o = NCPoly.coerce(other)
        out = dict(self._terms)
        for w, c in o._terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-NCPoly.coerce(other))

    def __rsub__(self, other):
        return NCPoly.coerce(other) - self

    def scale(self, c: Scalar) -> "NCPoly":
        lp = LaurentPoly.coerce(c)
        if not lp:
            return NCPoly()
        return NCPoly._raw({w: v * lp for w, v in self._terms.items() if v * lp})

    def __mul__(self, other):
        if isinstance(other, (int, GaussRational, LaurentPoly)):
            return self.scale(other)
        return nc_mul(self, NCPoly.coerce(other))

    def __rmul__(self, other):
        if isinstance(other, (int, GaussRational, LaurentPoly)):
            return self.scale(other)
        return nc_mul(NCPoly.coerce(other), self)

    def star(self) -> "NCPoly":
        return star(self)

    def map_coeffs(self, f: Callable[[LaurentPoly], LaurentPoly]) -> "NCPoly":
        return NCPoly({w: f(c) for w, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"NCPoly({self})"

    def __str__(self):
        return render_poly(self)


def render_poly(p: NCPoly) -> str:
    """Canonical text ``coeff * word +/- ...`` with deterministic term order."""
    if not p._terms:
        return "0"
    chunks = []
    for w, c in p.items():
        neg = False
        if c.is_monomial():
            (_, g), = c._terms.items()
            if not g.im and g.re < 0:
                neg, c = True, -c
        body = str(c)
        if not c.is_monomial() or "i" in body:
            body = f"({body})"
        if w:
            term = render_word(w) if c == ONE else f"{body} * {render_word(w)}"
        else:
            term = body
        chunks.append((neg, term))
    neg, first = chunks[0]
    out = f"-{first}" if neg else first
    for neg, term in chunks[1:]:
        out += f" {'-' if neg else '+'} {term}"
    return out


def nc_mul(a: NCPoly, b: NCPoly) -> NCPoly:
    """Bilinear concatenation; the result is not normalized."""
    out: dict = {}
    for w1, c1 in a._terms.items():
        for w2, c2 in b._terms.items():
            w = w1 + w2
            p = c1 * c2
            s = out.get(w)
            out[w] = p if s is None else s + p
    return NCPoly._raw({w: c for w, c in out.items() if c})


def star(a: NCPoly) -> NCPoly:
    """The * anti-involution: reverse words, toggle stars, conjugate coefficients."""
    return NCPoly._raw(
        {tuple(g.toggled() for g in reversed(w)): c.conj() for w, c in a._terms.items()}
    )


class RewriteError(RuntimeError):
    """The rule table violates the termination measure."""


class UnknownGeneratorError(KeyError):
    pass


@dataclass
class RewriteTrace:
    """Counters filled in by an instrumented normalization."""

    steps: int = 0
    checked: int = 0
    max_depth: int = 0


@dataclass
class RelationSystem:
    """A copy sequence plus a table of directed rules on adjacent pairs.

    Copies later in ``copies`` sort to the left of earlier ones.  Rules are
    registered with :meth:`register`, which rejects any rule whose
    right-hand words do not strictly decrease the termination measure.
    """

    copies: tuple
    rules: dict = field(default_factory=dict)
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.copies = tuple(self.copies)
        if len(set(self.copies)) != len(self.copies):
            raise ValueError("duplicate copy in sequence")
        self.position = {c: k for k, c in enumerate(self.copies)}

    # -- alphabet ---------------------------------------------------------
    def generators(self, copy: CopyId | None = None) -> list:
        copies = self.copies if copy is None else (copy,)
        return [Generator(c, l, s) for c in copies for l in (FIRST, SECOND) for s in (False, True)]

    def has(self, g: Generator) -> bool:
        return g.copy in self.position

    def check_generators(self, a: NCPoly) -> None:
        for g in a.generators():
            if g.copy not in self.position:
                raise UnknownGeneratorError(f"generator {g} is not in this relation system")

    def copies_of(self, kind: str) -> list:
        return [c for c in self.copies if c.kind == kind]

    # -- ordering ---------------------------------------------------------
    def is_reducible(self, g1: Generator, g2: Generator) -> bool:
        p1, p2 = self.position[g1.copy], self.position[g2.copy]
        if p1 != p2:
            return p1 < p2
        r1, r2 = g1.rank, g2.rank
        return r1 > r2 or {r1, r2} == {2, 3}

    def is_normal_word(self, word: Word) -> bool:
        return not any(self.is_reducible(word[k], word[k + 1]) for k in range(len(word) - 1))

    def measure(self, word: Word) -> tuple:
        """(cross-copy inversions, weighted degree, intra-copy inversions)."""
        pos = [self.position[g.copy] for g in word]
        cross = intra = 0
        n = len(word)
        for s in range(n):
            for t in range(s + 1, n):
                if pos[s] < pos[t]:
                    cross += 1
                elif pos[s] == pos[t] and word[s].rank > word[t].rank:
                    intra += 1
        degree = sum(2 if g.letter == FIRST else 1 for g in word)
        return (cross, degree, intra)

    # -- rules ------------------------------------------------------------
    def register(self, g1: Generator, g2: Generator, rhs: NCPoly) -> None:
        if not (self.has(g1) and self.has(g2)):
            raise UnknownGeneratorError(f"rule on unknown generators {g1} {g2}")
        self.check_generators(rhs)
        if not self.is_reducible(g1, g2):
            raise RewriteError(f"{g1} {g2} is already in canonical order")
        lhs_m = self.measure((g1, g2))
        for w in rhs._terms:
            if not self.measure(w) < lhs_m:
                raise RewriteError(
                    f"rule {g1} {g2} -> {rhs}: word {render_word(w)} does not decrease the measure"
                )
        self.rules[(g1, g2)] = rhs
        self._cache.clear()

    def rule(self, g1: Generator, g2: Generator) -> NCPoly | None:
        return self.rules.get((g1, g2))

    def missing_rules(self) -> list:
        gens = self.generators()
        return [
            (g1, g2)
            for g1 in gens
            for g2 in gens
            if self.is_reducible(g1, g2) and (g1, g2) not in self.rules
        ]

    def dump_rules(self) -> list[str]:
        """One line per rule, ``lhs -> rhs`` in canonical rendering."""
        order = {c: k for k, c in enumerate(self.copies)}

        def key(item):
            (g1, g2), _ = item
            return (order[g1.copy], order[g2.copy], g1.letter, g1.starred, g2.letter, g2.starred)

        return [f"{g1} {g2} -> {rhs}" for (g1, g2), rhs in sorted(self.rules.items(), key=key)]


def _find_redex(word: Word, sys: RelationSystem, strategy: str) -> int | None:
    rng = range(len(word) - 1)
    if strategy == "rightmost":
        rng = reversed(rng)
    elif strategy != "leftmost":
        raise ValueError(f"unknown strategy {strategy!r}")
    for k in rng:
        if sys.is_reducible(word[k], word[k + 1]):
            return k
    return None


def _normal_word(word: Word, sys: RelationSystem, strategy: str, memo: dict, trace) -> dict:
    hit = memo.get(word)
    if hit is not None:
        return hit
    k = _find_redex(word, sys, strategy)
    if k is None:
        out = {word: ONE}
        memo[word] = out
        return out
    g1, g2 = word[k], word[k + 1]
    rhs = sys.rules.get((g1, g2))
    if rhs is None:
        raise RewriteError(f"no rule for reducible pair {g1} {g2}")
    pre, post = word[:k], word[k + 2:]
    if trace is not None:
        trace.steps += 1
        m0 = sys.measure(word)
    acc: dict = {}
    for w, c in rhs._terms.items():
        new = pre + w + post
        if trace is not None:
            trace.checked += 1
            if not sys.measure(new) < m0:
                raise RewriteError(
                    f"measure did not decrease: {render_word(word)} -> {render_word(new)}"
                )
        for w2, c2 in _normal_word(new, sys, strategy, memo, trace).items():
            p = c * c2
            s = acc.get(w2)
            acc[w2] = p if s is None else s + p
    out = {w: c for w, c in acc.items() if c}
    memo[word] = out
    return out


def normalize(
    a: NCPoly,
    sys: RelationSystem,
    strategy: str = "leftmost",
    trace: RewriteTrace | None = None,
) -> NCPoly:
    """Canonical form of ``a`` under the rules of ``sys``.

    ``strategy`` picks which reducible pair is rewritten first.  Passing a
    :class:`RewriteTrace` disables the shared memo and checks that every
    single rewrite strictly lowers :meth:`RelationSystem.measure`.
    """
    sys.check_generators(a)
    if trace is None:
        memo = sys._cache.setdefault(strategy, {})
    else:
        memo = {}
    out: dict = {}
    for w, c in a._terms.items():
        for w2, c2 in _normal_word(w, sys, strategy, memo, trace).items():
            p = c * c2
            s = out.get(w2)
            out[w2] = p if s is None else s + p
    return NCPoly._raw({w: c for w, c in out.items() if c})


def critical_pairs(sys: RelationSystem, strategy: str = "leftmost") -> list[tuple]:
    """Overlaps ``g1 g2 g3`` whose two one-step reducts normalize differently.

    Rule left-hand sides all have length two, so these three-letter
    overlaps are the only critical pairs; with the measure guaranteeing
    termination, an empty result proves confluence.
    """
    gens = sys.generators()
    bad = []
    for g1 in gens:
        for g2 in gens:
            if not sys.is_reducible(g1, g2):
                continue
            for g3 in gens:
                if not sys.is_reducible(g2, g3):
                    continue
                left = nc_mul(sys.rules[(g1, g2)], NCPoly.gen(g3))
                right = nc_mul(NCPoly.gen(g1), sys.rules[(g2, g3)])
                diff = normalize(left, sys, strategy) - normalize(right, sys, strategy)
                if diff:
                    bad.append(((g1, g2, g3), diff))
    return bad


def is_zero(a: NCPoly, sys: RelationSystem) -> bool:
    return not normalize(a, sys)


def _gen_key(g: Generator):
    return (g.copy.kind, g.copy.index, g.letter, g.starred)


def abelianize(a: NCPoly) -> NCPoly:
    """Commutative image: each word becomes its sorted multiset of letters."""
    out: dict = {}
    for w, c in a._terms.items():
        key = tuple(sorted(w, key=_gen_key))
        s = out.get(key)
        out[key] = c if s is None else s + c
    return NCPoly._raw({w: c for w, c in out.items() if c})


def expand_terms_eps(a: NCPoly, order: int) -> dict[Word, EpsSeries]:
    return {w: lp_expand_eps(c, order) for w, c in a.items()}
