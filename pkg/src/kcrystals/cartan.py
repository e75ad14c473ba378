"""Cartan data, root and weight arithmetic, and finite-type oracles.

Weights are stored in pairing coordinates only: a weight ``lam`` is the
integer tuple ``(<h_i, lam>)_{i in I}`` in label order.  In affine types this
forgets the null root (``<h_i, delta> = 0`` for every ``i``), so two distinct
weights of the full weight lattice can have the same tuple.  Everything the
crystal maps need (``wt``, ``eps``, ``phi``, the tensor rule) only looks at
pairings, so nothing is lost there, but do not use these tuples to tell apart
weights that differ by a multiple of ``delta``.

Root-lattice elements are integer tuples of coefficients on the simple roots,
also in label order.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm

import numpy as np

Weight = tuple  # tuple[int, ...], pairings <h_i, lam>
RootVector = tuple  # tuple[int, ...], coefficients on alpha_i


class CartanError(ValueError):
    pass


@dataclass(frozen=True)
class CartanSpec:
    """Index set plus generalized Cartan matrix ``gcm[i][j] = <h_i, alpha_j>``."""

    labels: tuple
    gcm: tuple
    type_tag: str = field(default="", compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        gcm = tuple(tuple(int(a) for a in row) for row in self.gcm)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "gcm", gcm)
        n = len(labels)
        if len(set(labels)) != n:
            raise CartanError(f"duplicate labels in {labels}")
        if len(gcm) != n or any(len(row) != n for row in gcm):
            raise CartanError("gcm must be square with one row per label")
        for i in range(n):
            if gcm[i][i] != 2:
                raise CartanError(f"diagonal entry {i} is {gcm[i][i]}, expected 2")
            for j in range(n):
                if i == j:
                    continue
                if gcm[i][j] > 0:
                    raise CartanError(f"off-diagonal entry ({i},{j}) is positive")
                if (gcm[i][j] == 0) != (gcm[j][i] == 0):
                    raise CartanError(f"entries ({i},{j}) and ({j},{i}) must vanish together")
        # raises for non-symmetrizable input
        d = self.symmetrizer
        if not self.type_tag:
            object.__setattr__(self, "type_tag", _classify(gcm, d))

    @property
    def rank(self) -> int:
        return len(self.labels)

    @cached_property
    def _pos(self) -> dict:
        return {lab: k for k, lab in enumerate(self.labels)}

    def index(self, i) -> int:
        try:
            return self._pos[str(i)]
        except KeyError:
            raise CartanError(f"unknown index {i!r}; labels are {self.labels}") from None

    def pair(self, i, j) -> int:
        """``<h_i, alpha_j>`` for labels ``i``, ``j``."""
        return self.gcm[self.index(i)][self.index(j)]

    @cached_property
    def symmetrizer(self) -> tuple:
        return _symmetrizer(self.gcm)

    @property
    def is_finite(self) -> bool:
        return self.type_tag == "finite"

    @property
    def is_affine(self) -> bool:
        return self.type_tag == "affine"

    @property
    def is_simply_laced(self) -> bool:
        return all(a in (0, -1) for r, row in enumerate(self.gcm) for c, a in enumerate(row) if r != c)

    def sub(self, J) -> "CartanSpec":
        """Cartan data of the subset ``J`` of labels, in label order."""
        J = [lab for lab in self.labels if lab in {str(j) for j in J}]
        idx = [self.index(j) for j in J]
        return CartanSpec(tuple(J), tuple(tuple(self.gcm[a][b] for b in idx) for a in idx))

    def zero(self) -> Weight:
        return (0,) * self.rank

    def fundamental(self, i) -> Weight:
        k = self.index(i)
        return tuple(int(a == k) for a in range(self.rank))

    def weight(self, coeffs) -> Weight:
        """``sum_i coeffs[i] * Lambda_i`` given coefficients in label order."""
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.rank:
            raise CartanError(f"expected {self.rank} coefficients, got {len(coeffs)}")
        return coeffs

    def root_to_weight(self, x: RootVector) -> Weight:
        """Pairing coordinates of ``sum_j x[j] alpha_j``."""
        n = self.rank
        return tuple(sum(self.gcm[r][c] * x[c] for c in range(n)) for r in range(n))

    def __str__(self):
        return self.name or json.dumps({"labels": list(self.labels), "gcm": [list(r) for r in self.gcm]})


def add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a: Weight) -> Weight:
    return tuple(k * x for x in a)


def is_dominant(lam: Weight) -> bool:
    return all(x >= 0 for x in lam)


def simple_root_as_weight(spec: CartanSpec, i) -> Weight:
    """``alpha_i`` in pairing coordinates: column ``i`` of the Cartan matrix."""
    k = spec.index(i)
    return tuple(row[k] for row in spec.gcm)


def _symmetrizer(gcm) -> tuple:
    n = len(gcm)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or gcm[i][j] == 0:
                    continue
                # d_i a_ij = d_j a_ji
                want = d[i] * gcm[i][j] / gcm[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    raise CartanError("matrix is not symmetrizable")
    den = lcm(*(x.denominator for x in d))
    ints = [int(x * den) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def symmetrized(spec: CartanSpec) -> np.ndarray:
    d = np.array(spec.symmetrizer)
    return d[:, None] * np.array(spec.gcm)


def _classify(gcm, d) -> str:
    s = np.array(d, dtype=float)[:, None] * np.array(gcm, dtype=float)
    eig = np.linalg.eigvalsh(s)
    tol = 1e-9
    if eig.min() > tol:
        return "finite"
    if eig.min() > -tol and int(np.sum(np.abs(eig) <= tol)) == 1 and _connected(gcm):
        return "affine"
    return "other"


def _connected(gcm) -> bool:
    n = len(gcm)
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if gcm[i][j] and j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


# ---------------------------------------------------------------------------
# Named types

def _chain(n):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def _finite_gcm(letter: str, n: int):
    if letter == "A" and n >= 1:
        return _chain(n)
    if letter == "B" and n >= 2:
        a = _chain(n)
        a[n - 1][n - 2] = -2
        return a
    if letter == "C" and n >= 2:
        a = _chain(n)
        a[n - 2][n - 1] = -2
        return a
    if letter == "D" and n >= 3:
        a = _chain(n)
        if n >= 4:
            a[n - 2][n - 1] = a[n - 1][n - 2] = 0
            a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        else:
            # D3 = A3 with the middle node first
            a = [[2, -1, -1], [-1, 2, 0], [-1, 0, 2]]
        return a
    if letter == "E" and n in (6, 7, 8):
        a = [[0] * n for _ in range(n)]
        edges = [(0, 2), (1, 3), (2, 3)] + [(k, k + 1) for k in range(3, n - 1)]
        for i in range(n):
            a[i][i] = 2
        for i, j in edges:
            a[i][j] = a[j][i] = -1
        return a
    if letter == "F" and n == 4:
        a = _chain(4)
        a[2][1] = -2
        return a
    if letter == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise CartanError(f"unknown finite type {letter}{n}")


def _affine_extension(fin: CartanSpec) -> CartanSpec:
    """Untwisted affinization: prepend node 0 with ``alpha_0 = delta - theta``."""
    theta = highest_root(fin)
    d = fin.symmetrizer
    n = fin.rank
    norm = sum(theta[i] * theta[k] * d[i] * fin.gcm[i][k] for i in range(n) for k in range(n))
    # <theta^vee, alpha_j> = (2/(theta,theta)) sum_i theta_i d_i a_ij
    row0 = [Fraction(2 * sum(theta[i] * d[i] * fin.gcm[i][j] for i in range(n)), norm) for j in range(n)]
    col0 = fin.root_to_weight(theta)
    a = [[2] + [-int(x) for x in row0]]
    for i in range(n):
        a.append([-col0[i]] + list(fin.gcm[i]))
    return CartanSpec(("0",) + fin.labels, tuple(map(tuple, a)))


_NAME = re.compile(r"^\s*([A-Ga-g])(\d+)\s*(~?)\s*$")


def parse_cartan(spec_string: str) -> CartanSpec:
    """Parse ``"A2"``, ``"G2"``, ``"A1~"`` or inline JSON into a ``CartanSpec``.

    Inline JSON is either ``{"labels": [...], "gcm": [[...]]}`` or a bare
    matrix, in which case labels are ``1..n``.
    """
    s = spec_string.strip()
    m = _NAME.match(s)
    if m:
        letter, n, tilde = m.group(1).upper(), int(m.group(2)), m.group(3)
        fin = CartanSpec(tuple(str(k) for k in range(1, n + 1)), tuple(map(tuple, _finite_gcm(letter, n))))
        if fin.type_tag != "finite":
            raise CartanError(f"internal error: {letter}{n} not recognized as finite")
        if not tilde:
            return CartanSpec(fin.labels, fin.gcm, "finite", f"{letter}{n}")
        aff = _affine_extension(fin)
        return CartanSpec(aff.labels, aff.gcm, aff.type_tag, f"{letter}{n}~")
    try:
        obj = json.loads(s)
    except json.JSONDecodeError:
        raise CartanError(f"cannot parse Cartan type {spec_string!r}") from None
    if isinstance(obj, dict):
        if "gcm" not in obj:
            raise CartanError("inline Cartan JSON needs a 'gcm' field")
        gcm = obj["gcm"]
        labels = obj.get("labels") or [str(k) for k in range(1, len(gcm) + 1)]
    elif isinstance(obj, list):
        gcm = obj
        labels = [str(k) for k in range(1, len(gcm) + 1)]
    else:
        raise CartanError(f"cannot parse Cartan type {spec_string!r}")
    try:
        return CartanSpec(tuple(labels), tuple(tuple(r) for r in gcm))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CartanError):
            raise
        raise CartanError(f"malformed Cartan matrix: {exc}") from None


# ---------------------------------------------------------------------------
# Finite root systems and oracles

def _require_finite(spec: CartanSpec):
    if not spec.is_finite:
        raise CartanError(f"{spec} is not of finite type")


def reflect(spec: CartanSpec, k: int, beta: RootVector) -> RootVector:
    """Simple reflection ``s_k`` (positional index) on a root-lattice vector."""
    p = sum(spec.gcm[k][j] * beta[j] for j in range(spec.rank))
    return tuple(b - p * (j == k) for j, b in enumerate(beta))


@lru_cache(maxsize=None)
def positive_roots(spec: CartanSpec) -> tuple:
    """Positive roots as root vectors, sorted by height then coefficients."""
    _require_finite(spec)
    n = spec.rank
    simple = [tuple(int(j == k) for j in range(n)) for k in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for k in range(n):
                r = reflect(spec, k, beta)
                if all(c >= 0 for c in r) and r not in found:
                    found.add(r)
                    nxt.append(r)
        frontier = nxt
    return tuple(sorted(found, key=lambda b: (sum(b), b)))


def highest_root(spec: CartanSpec) -> RootVector:
    return max(positive_roots(spec), key=lambda b: (sum(b), b))


def _form_weight_root(spec: CartanSpec, lam: Weight, beta: RootVector):
    """``(lam, beta)`` with ``(alpha_i, alpha_i) = 2 d_i``."""
    d = spec.symmetrizer
    return sum(b * d[j] * lam[j] for j, b in enumerate(beta))


def weyl_dim(spec: CartanSpec, lam: Weight) -> int:
    _require_finite(spec)
    lam = tuple(lam)
    if not is_dominant(lam):
        raise CartanError(f"{lam} is not dominant")
    rho = (1,) * spec.rank
    lr = add(lam, rho)
    num = den = 1
    for beta in positive_roots(spec):
        num *= _form_weight_root(spec, lr, beta)
        den *= _form_weight_root(spec, rho, beta)
    q, r = divmod(num, den)
    assert r == 0
    return q


@lru_cache(maxsize=4096)
def freudenthal_multiplicities(spec: CartanSpec, lam: Weight) -> dict:
    """Weight multiplicities of ``V(lam)`` keyed by pairing coordinates."""
    _require_finite(spec)
    lam = tuple(lam)
    if not is_dominant(lam):
        raise CartanError(f"{lam} is not dominant")
    n = spec.rank
    d = spec.symmetrizer
    S = [[d[i] * spec.gcm[i][j] for j in range(n)] for i in range(n)]
    pos = positive_roots(spec)
    alpha = [simple_root_as_weight(spec, i) for i in spec.labels]

    def weight_of(k):
        w = lam
        for j in range(n):
            if k[j]:
                w = sub(w, scale(k[j], alpha[j]))
        return w

    # |lam+rho|^2 - |mu+rho|^2 for mu = lam - kappa
    def gap(k):
        lin = 2 * sum(k[j] * d[j] * (lam[j] + 1) for j in range(n))
        quad = sum(k[i] * S[i][j] * k[j] for i in range(n) for j in range(n))
        return lin - quad

    mult = {(0,) * n: 1}
    level = [(0,) * n]
    while level:
        cands = sorted({tuple(c + (j == t) for j, c in enumerate(k)) for k in level for t in range(n)})
        nxt = []
        for k in cands:
            g = gap(k)
            if g == 0:
                continue
            total = 0
            for beta in pos:
                s = 1
                while True:
                    kk = tuple(a - s * b for a, b in zip(k, beta))
                    if any(a < 0 for a in kk):
                        break
                    m = mult.get(kk)
                    if m:
                        total += m * _form_weight_root(spec, weight_of(kk), beta)
                    s += 1
            q, r = divmod(2 * total, g)
            assert r == 0, (k, total, g)
            if q > 0:
                mult[k] = q
                nxt.append(k)
        level = nxt
    return {weight_of(k): m for k, m in mult.items()}


def dominant_weights_up_to(spec: CartanSpec, bound: int):
    """All dominant weights with every pairing in ``[0, bound]``, lexicographic."""
    return [tuple(c) for c in product(range(bound + 1), repeat=spec.rank)]
