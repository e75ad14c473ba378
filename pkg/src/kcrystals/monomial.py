"""Nakajima monomials and the two crystal structures on them.

``ORIGINAL`` uses ``A_i(n) = Y_i(n-1) Y_i(n+1) prod_{k != i} Y_k(n)^{<h_k, alpha_i>}``
and is *not* a crystal in general: ``f_i b = b'`` does not imply
``e_i b' = b``.  ``variant(c)`` uses
``A_i(n) = Y_i(n) Y_i(n+1) prod_{j != i} Y_j(n + c_ji)^{<h_j, alpha_i>}`` and
is a semi-normal crystal whenever ``c_ij + c_ji = 1``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .cartan import CartanSpec, Weight
from .core import Crystal


def _natkey(label: str):
    return (0, int(label), "") if label.lstrip("-").isdigit() else (1, 0, label)


class Monomial:
    """Laurent monomial in the ``Y_i(n)``, stored as sorted nonzero exponents."""

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, exps=None):
        if isinstance(exps, dict):
            exps = exps.items()
        clean = {}
        for (i, n), y in (exps or ()):
            key = (str(i), int(n))
            clean[key] = clean.get(key, 0) + int(y)
        self._items = tuple(sorted(((k, y) for k, y in clean.items() if y),
                                   key=lambda kv: (_natkey(kv[0][0]), kv[0][1])))
        self._map = dict(self._items)
        self._hash = hash(self._items)

    @classmethod
    def Y(cls, i, n, y=1) -> "Monomial":
        return cls({(i, n): y})

    @property
    def items(self) -> tuple:
        return self._items

    def __getitem__(self, key) -> int:
        i, n = key
        return self._map.get((str(i), int(n)), 0)

    def terms(self, i) -> list:
        """``[(n, y_i(n))]`` for label ``i``, increasing in ``n``."""
        i = str(i)
        return [(n, y) for (j, n), y in self._items if j == i]

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = dict(self._map)
        for k, y in other._items:
            d[k] = d.get(k, 0) + y
        return Monomial(d)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial({key: y * k for key, y in self._items})

    def inverse(self) -> "Monomial":
        return self ** -1

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inverse()

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return True

    def is_identity(self) -> bool:
        return not self._items

    def is_positive(self) -> bool:
        return all(y > 0 for _, y in self._items)

    def __str__(self):
        if not self._items:
            return "1"
        return " ".join(f"Y{i}({n})" + ("" if y == 1 else f"^{y}") for (i, n), y in self._items)

    def __repr__(self):
        return f"Monomial({str(self)!r})"


ONE = Monomial()

_FACTOR = re.compile(r"Y([A-Za-z0-9_]*)\(\s*(-?\d+)\s*\)(?:\^\{?\s*(-?\d+)\s*\}?)?")


def parse_monomial(text: str, spec: CartanSpec | None = None) -> Monomial:
    """Parse ``"Y1(0)^2 Y2(3)^-1"``.  ``"1"`` is the identity.

    A bare ``Y(n)`` is accepted when ``spec`` has a single label.
    """
    s = text.strip()
    if s in ("", "1"):
        return ONE
    exps = {}
    pos = 0
    for m in _FACTOR.finditer(s):
        gap = s[pos:m.start()].replace("*", "").strip()
        if gap:
            raise ValueError(f"cannot parse monomial {text!r} near {gap!r}")
        label = m.group(1)
        if not label:
            if spec is None or spec.rank != 1:
                raise ValueError(f"factor {m.group(0)!r} needs an index label")
            label = spec.labels[0]
        if spec is not None:
            spec.index(label)
        key = (label, int(m.group(2)))
        exps[key] = exps.get(key, 0) + int(m.group(3) or 1)
        pos = m.end()
    if s[pos:].replace("*", "").strip():
        raise ValueError(f"cannot parse monomial {text!r} near {s[pos:]!r}")
    return Monomial(exps)


def hw_monomial(spec: CartanSpec, lam: Weight) -> Monomial:
    """``prod_i Y_i(0)^{lam_i}``."""
    return Monomial({(i, 0): k for i, k in zip(spec.labels, lam)})


def wt_mon(spec: CartanSpec, M: Monomial) -> Weight:
    w = [0] * spec.rank
    for (i, _), y in M.items:
        w[spec.index(i)] += y
    return tuple(w)


def _phi_nf(terms):
    """``(phi, n_f)`` from ``[(n, y)]``; ``n_f`` is ``None`` when ``phi == 0``."""
    best, arg, s = 0, None, 0
    for n, y in terms:
        s += y
        if s > best:
            best, arg = s, n
    return best, arg


def _eps_top(terms):
    """``(eps, m)``: ``eps = max_n -sum_{k>=n} y`` and the largest maximising support point."""
    best, arg, s = 0, None, 0
    for n, y in reversed(terms):
        s += y
        if -s > best:
            best, arg = -s, n
    return best, arg


def phi_eps_mon(M: Monomial, i) -> tuple:
    """``(phi_i(M), eps_i(M))``; both finite and nonnegative."""
    t = M.terms(i)
    return _phi_nf(t)[0], _eps_top(t)[0]


# ---------------------------------------------------------------------------
# The c-matrix and the two rules

@dataclass(frozen=True)
class CMatrix:
    """Integers ``c_ij`` for ``i != j``; standard mode needs ``c_ij + c_ji = 1``."""

    entries: tuple
    relaxed: bool = False

    def __post_init__(self):
        ent = self.entries.items() if isinstance(self.entries, dict) else self.entries
        norm = tuple(sorted(((str(i), str(j)), int(v)) for (i, j), v in ent))
        object.__setattr__(self, "entries", norm)
        d = dict(norm)
        object.__setattr__(self, "_d", d)
        for (i, j), v in norm:
            if i == j:
                raise ValueError("c has no diagonal entries")
            if (j, i) not in d:
                raise ValueError(f"c_{{{j},{i}}} missing")
            s = v + d[(j, i)]
            if (s != 1 and not self.relaxed) or s < 1:
                mode = "relaxed" if self.relaxed else "standard"
                raise ValueError(f"c_{{{i},{j}}} + c_{{{j},{i}}} = {s} not allowed in {mode} mode")

    def __getitem__(self, key) -> int:
        i, j = key
        return self._d[(str(i), str(j))]

    def as_dict(self) -> dict:
        return dict(self.entries)

    def validate_for(self, spec: CartanSpec):
        d = self.as_dict()
        for i in spec.labels:
            for j in spec.labels:
                if i != j and (i, j) not in d:
                    raise ValueError(f"c_{{{i},{j}}} missing for {spec}")

    def transpose(self) -> "CMatrix":
        return CMatrix({(j, i): v for (i, j), v in self.entries}, self.relaxed)

    def shifted(self, m: dict) -> "CMatrix":
        """``c'_ij = c_ij + m_i - m_j``."""
        m = {str(k): v for k, v in m.items()}
        return CMatrix({(i, j): v + m.get(i, 0) - m.get(j, 0) for (i, j), v in self.entries}, self.relaxed)

    def to_json(self) -> dict:
        return {"c": {f"{i},{j}": v for (i, j), v in self.entries}}

    def __str__(self):
        return ";".join(f"{i},{j}:{v}" for (i, j), v in self.entries)

    @classmethod
    def standard(cls, spec: CartanSpec) -> "CMatrix":
        """``c_ij = 0`` and ``c_ji = 1`` whenever ``i`` precedes ``j``."""
        L = spec.labels
        return cls({(L[a], L[b]): int(a > b) for a in range(len(L)) for b in range(len(L)) if a != b})

    @classmethod
    def parse(cls, text: str, spec: CartanSpec | None = None, relaxed: bool = False) -> "CMatrix":
        """Parse ``"1,2:0;2,1:1"`` or ``{"c": {"1,2": 0, "2,1": 1}}``.

        In standard mode a missing ``c_ji`` is filled in as ``1 - c_ij``.
        """
        s = text.strip()
        if s.startswith("{"):
            obj = json.loads(s)
            raw = obj.get("c", obj)
            pairs = {tuple(k.split(",")): int(v) for k, v in raw.items()}
        else:
            pairs = {}
            for part in filter(None, (p.strip() for p in s.split(";"))):
                key, _, val = part.partition(":")
                i, j = (x.strip() for x in key.split(","))
                pairs[(i, j)] = int(val)
        if not relaxed:
            for (i, j), v in list(pairs.items()):
                pairs.setdefault((j, i), 1 - v)
        c = cls(pairs, relaxed)
        if spec is not None:
            c.validate_for(spec)
        return c


def all_cmatrices(spec: CartanSpec, lo: int = 0, hi: int = 1, total: int | None = None) -> list:
    """Every c with entries in ``[lo, hi]`` and ``c_ij + c_ji == total`` (default 1)."""
    L = spec.labels
    pairs = [(L[a], L[b]) for a in range(len(L)) for b in range(a + 1, len(L))]
    total = 1 if total is None else total
    choices = [v for v in range(lo, hi + 1) if lo <= total - v <= hi]
    out = []
    for vals in product(choices, repeat=len(pairs)):
        ent = {}
        for (i, j), v in zip(pairs, vals):
            ent[(i, j)] = v
            ent[(j, i)] = total - v
        out.append(CMatrix(ent, relaxed=total != 1))
    return out


@dataclass(frozen=True)
class MonomialRule:
    tag: str
    c: CMatrix | None = None

    def __post_init__(self):
        if self.tag not in ("original", "variant"):
            raise ValueError(f"unknown rule {self.tag!r}")
        if self.tag == "variant" and self.c is None:
            raise ValueError("the variant rule needs a c-matrix")

    @classmethod
    def variant(cls, c: CMatrix) -> "MonomialRule":
        return cls("variant", c)

    def __str__(self):
        return "original" if self.tag == "original" else f"variant[{self.c}]"


ORIGINAL = MonomialRule("original")


@lru_cache(maxsize=65536)
def A_original(spec: CartanSpec, i: str, n: int) -> Monomial:
    exps = {(i, n - 1): 1, (i, n + 1): 1}
    for k in spec.labels:
        if k != i and spec.pair(k, i):
            exps[(k, n)] = spec.pair(k, i)
    return Monomial(exps)


@lru_cache(maxsize=65536)
def A_variant(spec: CartanSpec, c: CMatrix, i: str, n: int) -> Monomial:
    exps = {(i, n): 1, (i, n + 1): 1}
    for j in spec.labels:
        if j != i and spec.pair(j, i):
            key = (j, n + c[(j, i)])
            exps[key] = exps.get(key, 0) + spec.pair(j, i)
    return Monomial(exps)


def step_original(spec: CartanSpec, M: Monomial, i, direction: str):
    """Apply ``f_i`` (``"F"``) or ``e_i`` (``"E"``) with the original rule."""
    i = str(i)
    t = M.terms(i)
    if direction == "F":
        phi, nf = _phi_nf(t)
        if phi == 0:
            return None
        assert M[(i, nf)] > 0 and M[(i, nf + 1)] <= 0, (str(M), i, nf)
        return M / A_original(spec, i, nf + 1)
    if direction == "E":
        eps, ne = _eps_top(t)
        if eps == 0:
            return None
        assert M[(i, ne)] < 0 and M[(i, ne - 1)] >= 0, (str(M), i, ne)
        return M * A_original(spec, i, ne - 1)
    raise ValueError(f"direction must be 'E' or 'F', got {direction!r}")


def step_variant(spec: CartanSpec, M: Monomial, i, c: CMatrix, direction: str):
    """Apply ``f_i`` (``"F"``) or ``e_i`` (``"E"``) with the c-dependent rule."""
    i = str(i)
    t = M.terms(i)
    if direction == "F":
        phi, nf = _phi_nf(t)
        if phi == 0:
            return None
        assert M[(i, nf)] > 0 and M[(i, nf + 1)] <= 0, (str(M), i, nf)
        return M / A_variant(spec, c, i, nf)
    if direction == "E":
        eps, m = _eps_top(t)
        if eps == 0:
            return None
        # eps = -sum_{k>n} y is attained for the largest n at n = m - 1
        ne = m - 1
        assert M[(i, ne + 1)] < 0 and M[(i, ne)] >= 0, (str(M), i, ne)
        return M * A_variant(spec, c, i, ne)
    raise ValueError(f"direction must be 'E' or 'F', got {direction!r}")


class MonomialCrystal(Crystal):
    """Crystal handle on monomials for a given rule."""

    def __init__(self, spec: CartanSpec, rule: MonomialRule = ORIGINAL):
        super().__init__(spec)
        if rule.tag == "variant":
            rule.c.validate_for(spec)
        self.rule = rule
        self.axiom_unsafe = rule.tag == "original"

    @property
    def c(self):
        return self.rule.c

    def wt(self, b):
        return wt_mon(self.spec, b)

    def phi(self, i, b):
        return _phi_nf(b.terms(i))[0]

    def eps(self, i, b):
        return _eps_top(b.terms(i))[0]

    def e(self, i, b):
        if self.rule.tag == "original":
            return step_original(self.spec, b, i, "E")
        return step_variant(self.spec, b, i, self.rule.c, "E")

    def f(self, i, b):
        if self.rule.tag == "original":
            return step_original(self.spec, b, i, "F")
        return step_variant(self.spec, b, i, self.rule.c, "F")

    def render(self, b):
        return str(b)


def make_handle(spec: CartanSpec, rule: MonomialRule = ORIGINAL) -> MonomialCrystal:
    return MonomialCrystal(spec, rule)


def psi_map(M: Monomial) -> Monomial:
    """``Y_i(n) -> Y_i(-n)^{-1}``."""
    return Monomial({(i, -n): -y for (i, n), y in M.items})


def shift_map(M: Monomial, m: dict) -> Monomial:
    """``Y_i(n) -> Y_i(n + m_i)``; pairs with ``CMatrix.shifted(m)``."""
    m = {str(k): v for k, v in m.items()}
    return Monomial({(i, n + m.get(i, 0)): y for (i, n), y in M.items})


def good_monomial_violation(G):
    """First ``(M, i, n)`` in the graph with ``y_i(n) > 0`` and ``y_i(n+1) < 0``."""
    for M in G.nodes:
        if not isinstance(M, Monomial):
            continue
        for (i, n), y in M.items:
            if y > 0 and M[(i, n + 1)] < 0:
                return (M, i, n)
    return None
