"""The lattice crystal ``B_l`` on the root lattice, and truncated ``B(infinity)``.

``B(infinity)`` is never built abstractly.  It is modelled as the component
of ``b(0) x ... x b(0)`` inside a finite product ``B_{i_N} x ... x B_{i_1}``
of elementary crystals, with the leftmost full cycle of factors acting as a
stand-in for the infinite tail.  Those factors must never be touched by an
``f_i``; if one is, the truncation was too short and ``TruncationError`` is
raised.  An ``e_i`` that would act on them gives zero, which is what
``B(infinity)`` does when ``eps_i = 0``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .cartan import CartanSpec, RootVector, positive_roots
from .core import Crystal, ElementaryB, TensorProduct
from .graph import CrystalGraph, explore


class TruncationError(RuntimeError):
    pass


@dataclass(frozen=True)
class LatticeFunctionals:
    """``L[i][j] = l_i(alpha_j)`` in label order, with ``l_i(alpha_i) = -1``."""

    L: tuple

    def __post_init__(self):
        L = tuple(tuple(int(a) for a in row) for row in self.L)
        object.__setattr__(self, "L", L)
        n = len(L)
        if any(len(row) != n for row in L):
            raise ValueError("L must be square")
        for i in range(n):
            if L[i][i] != -1:
                raise ValueError(f"l_{i}(alpha_{i}) = {L[i][i]}, must be -1")

    @classmethod
    def parse(cls, text: str) -> "LatticeFunctionals":
        obj = json.loads(text)
        return cls(obj["L"] if isinstance(obj, dict) else obj)

    def to_json(self) -> dict:
        return {"L": [list(r) for r in self.L]}

    def __call__(self, i: int, x: RootVector) -> int:
        return sum(a * b for a, b in zip(self.L[i], x))


def cyclic_functionals(spec: CartanSpec) -> LatticeFunctionals:
    """``l_i(alpha_j) = -delta_ij + delta_{i+1,j}`` with labels read cyclically."""
    n = spec.rank
    return LatticeFunctionals([[-(i == j) + ((i + 1) % n == j) for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class V:
    x: tuple

    def __str__(self):
        return "v(" + ",".join(map(str, self.x)) + ")"


class LatticeCrystal(Crystal):
    """``B_l = {v(x)}``: ``wt = x``, ``eps_i = l_i(x)``, ``e_i``/``f_i`` shift by ``+-alpha_i``."""

    def __init__(self, spec: CartanSpec, L: LatticeFunctionals):
        super().__init__(spec)
        if len(L.L) != spec.rank:
            raise ValueError("L and the Cartan matrix have different sizes")
        self.L = L

    def origin(self) -> V:
        return V((0,) * self.spec.rank)

    def wt(self, b):
        return self.spec.root_to_weight(b.x)

    def eps(self, i, b):
        return self.L(self.spec.index(i), b.x)

    def phi(self, i, b):
        k = self.spec.index(i)
        return self.wt(b)[k] + self.L(k, b.x)

    def _shift(self, i, b, s):
        k = self.spec.index(i)
        return V(tuple(a + s * (j == k) for j, a in enumerate(b.x)))

    def e(self, i, b):
        return self._shift(i, b, 1)

    def f(self, i, b):
        return self._shift(i, b, -1)


def lattice_handle(spec: CartanSpec, L: LatticeFunctionals) -> LatticeCrystal:
    return LatticeCrystal(spec, L)


def check_ell_condition(L: LatticeFunctionals, spec: CartanSpec):
    """Per unordered pair, which of the two admissible patterns holds.

    Pattern ``"i"``: ``l_i(alpha_j) = -<h_i, alpha_j>`` and ``l_j(alpha_i) = 0``;
    pattern ``"ii"``: the same with ``i`` and ``j`` swapped.  Returns
    ``(ok, report)`` with ``report[(i, j)]`` a list of the patterns that hold.
    """
    A, M = spec.gcm, L.L
    report = {}
    for a in range(spec.rank):
        for b in range(a + 1, spec.rank):
            hits = []
            if M[a][b] == -A[a][b] and M[b][a] == 0:
                hits.append("i")
            if M[a][b] == 0 and M[b][a] == -A[b][a]:
                hits.append("ii")
            report[(spec.labels[a], spec.labels[b])] = hits
    return all(report.values()), report


# ---------------------------------------------------------------------------
# Truncated B(infinity)

class TruncatedBInfinity(TensorProduct):
    """``B_{i_N} x ... x B_{i_1}``; elements are tuples of ints, leftmost first."""

    def __init__(self, spec: CartanSpec, seq, guard: int | None = None):
        seq = [str(i) for i in seq]
        self.seq = tuple(seq)
        # seq is given i_1, i_2, ...; the product is written right to left
        super().__init__(*(ElementaryB(spec, i) for i in reversed(seq)))
        self._labels = tuple(reversed(seq))
        # the guard stands in for the infinite tail; a full cycle by default
        self.guard = len(spec.labels) if guard is None else guard
        if self.guard < 1 or self.guard > len(seq):
            raise ValueError("guard must cover between 1 and N factors")

    def zero(self) -> tuple:
        return (0,) * len(self.factors)

    def _wrap(self, b):
        return tuple(B.elem(n) for B, n in zip(self.factors, b))

    def wt(self, b):
        return super().wt(self._wrap(b))

    def eps(self, i, b):
        return super().eps(i, self._wrap(b))

    def phi(self, i, b):
        return super().phi(i, self._wrap(b))

    def e(self, i, b):
        w = self._wrap(b)
        k = self.e_position(i, w)
        if k < self.guard:
            return None
        return b[:k] + (b[k] + 1,) + b[k + 1:]

    def f(self, i, b):
        w = self._wrap(b)
        k = self.f_position(i, w)
        if k < self.guard:
            raise TruncationError(
                f"f_{i} reached the leftmost factors of a {len(b)}-fold product; increase N")
        return b[:k] + (b[k] - 1,) + b[k + 1:]

    def render(self, b):
        return " ".join(f"b{i}({n})" for i, n in zip(self._labels, b))


def min_length(spec: CartanSpec, depth: int) -> int:
    """Shortest product for which the guard cannot trip at ``depth``.

    Boundary nodes are expanded too, so ``depth + 1`` applications of ``f``
    are evaluated, on top of the guard cycle.
    """
    return (depth + 2) * spec.rank


def default_sequence(spec: CartanSpec, depth: int) -> list:
    """Cyclic repetition of the labels, ``min_length`` terms."""
    return [spec.labels[k % spec.rank] for k in range(min_length(spec, depth))]


def binfty_truncated(spec: CartanSpec, seq=None, depth: int = 3) -> CrystalGraph:
    """f-closure of the zero element to ``depth``, a model of ``B(infinity)``."""
    seq = default_sequence(spec, depth) if seq is None else list(seq)
    if len(seq) < min_length(spec, depth):
        raise ValueError(f"sequence of length {len(seq)} too short for depth {depth}")
    B = TruncatedBInfinity(spec, seq)
    G = explore(B, [B.zero()], depth=depth, direction="f")
    for (b, i), t in G.e_edges.items():
        if t is not None and t not in G.nodes:
            raise TruncationError(f"e_{i} leaves the f-closure at {B.render(b)}")
    return G


def kostant_counts(spec: CartanSpec, max_height: int) -> dict:
    """Partition counts of every ``beta`` of height ``<= max_height``.

    Brute force over multisets of positive roots; keys are root vectors.
    """
    pos = [b for b in positive_roots(spec) if sum(b) <= max_height]
    counts = {}

    def rec(start, total, height):
        counts[total] = counts.get(total, 0) + 1
        for k in range(start, len(pos)):
            h = height + sum(pos[k])
            if h <= max_height:
                rec(k, tuple(a + b for a, b in zip(total, pos[k])), h)

    rec(0, (0,) * spec.rank, 0)
    return counts


# ---------------------------------------------------------------------------
# Embedding B(infinity) -> B(infinity) x B_l

@dataclass
class EmbeddingReport:
    depth: int
    checks: dict
    witnesses: dict
    per_depth: list
    nodes: int

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"depth": self.depth, "passed": self.passed, "checks": self.checks,
                "witnesses": {k: [str(w) for w in v] for k, v in self.witnesses.items()},
                "per_depth": self.per_depth, "nodes": self.nodes}


def verify_lattice_embedding(spec: CartanSpec, L: LatticeFunctionals, depth: int = 3) -> EmbeddingReport:
    """Follow f-words from ``u_inf`` and ``u_inf x v(0)`` in parallel.

    Checks ``path_independence`` (the images are well defined),
    ``injectivity`` and ``strictness`` (``wt``, ``eps``, ``phi`` agree and
    ``e_i`` commutes with the map, zero matching zero).
    """
    seq = default_sequence(spec, depth)
    src = TruncatedBInfinity(spec, seq)
    lat = LatticeCrystal(spec, L)
    tgt = TensorProduct(TruncatedBInfinity(spec, seq), lat)
    G = binfty_truncated(spec, seq, depth)

    image = {src.zero(): (src.zero(), lat.origin())}
    level = {src.zero(): 0}
    wit = {"path_independence": [], "injectivity": [], "strictness": []}
    bad_depth = {}

    def flag(name, d, w):
        wit[name].append(w)
        bad_depth[d] = True

    for b in G.nodes:
        d = level[b]
        for i in spec.labels:
            t = G.f_edges[(b, i)]
            if t is None or t not in G.nodes:
                continue
            ft = tgt.f(i, image[b])
            if t in image:
                if image[t] != ft:
                    flag("path_independence", level[t], (b, i, t))
            else:
                image[t] = ft
                level[t] = d + 1

    seen = {}
    for b, y in image.items():
        if y in seen:
            flag("injectivity", max(level[b], level[seen[y]]), (seen[y], b))
        else:
            seen[y] = b

    for b in G.nodes:
        y = image[b]
        if tgt.wt(y) != src.wt(b):
            flag("strictness", level[b], (b, "wt"))
        for i in spec.labels:
            if tgt.eps(i, y) != src.eps(i, b) or tgt.phi(i, y) != src.phi(i, b):
                flag("strictness", level[b], (b, i, "eps/phi"))
            eb = G.e_edges[(b, i)]
            ey = tgt.e(i, y)
            if eb is None:
                if ey is not None:
                    flag("strictness", level[b], (b, i, "e"))
            elif eb not in image or image[eb] != ey:
                flag("strictness", level[b], (b, i, "e"))

    first_bad = min(bad_depth) if bad_depth else None
    per_depth = [first_bad is None or k < first_bad for k in range(depth + 1)]
    checks = {k: not v for k, v in wit.items()}
    return EmbeddingReport(depth, checks, wit, per_depth, len(G.nodes))


def bl_factorization_witness(spec: CartanSpec, L: LatticeFunctionals, window: int = 5):
    """First ``(x, what)`` where ``v(x) -> b x b'`` fails to intertwine, else ``None``.

    The factor order follows the pattern of the pair: pattern ``"ii"`` gives
    ``b_1(x_1) x b_2(x_2)``, pattern ``"i"`` gives ``b_2(x_2) x b_1(x_1)``.
    Without either pattern the first order is tried.
    """
    if spec.rank != 2:
        raise ValueError("factorization check needs rank 2")
    _, rep = check_ell_condition(L, spec)
    hits = next(iter(rep.values()))
    order = (1, 0) if hits == ["i"] else (0, 1)
    lab = spec.labels
    Bl = LatticeCrystal(spec, L)
    T = TensorProduct(ElementaryB(spec, lab[order[0]]), ElementaryB(spec, lab[order[1]]))

    def phi_map(v):
        return (T.factors[0].elem(v.x[order[0]]), T.factors[1].elem(v.x[order[1]]))

    for x in product(range(-window, window + 1), repeat=2):
        v = V(x)
        b = phi_map(v)
        if Bl.wt(v) != T.wt(b):
            return (x, "wt")
        for i in lab:
            if Bl.eps(i, v) != T.eps(i, b) or Bl.phi(i, v) != T.phi(i, b):
                return (x, f"eps/phi_{i}")
            if phi_map(Bl.e(i, v)) != T.e(i, b):
                return (x, f"e_{i}")
            if phi_map(Bl.f(i, v)) != T.f(i, b):
                return (x, f"f_{i}")
    return None


def bl_factorization_check(spec: CartanSpec, L: LatticeFunctionals, window: int = 5) -> bool:
    """Whether ``B_l`` is isomorphic to ``B_1 x B_2`` on the test window."""
    return bl_factorization_witness(spec, L, window) is None
