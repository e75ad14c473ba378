"""Uniform crystal interface and the elementary constructions on it.

A crystal handle exposes ``wt``, ``eps``, ``phi``, ``e`` and ``f``.  The
crystal value ``0`` (an operator killing an element) is ``None``; no element
is ever used as a sentinel.  ``eps``/``phi`` return ints or ``NEG_INF``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cartan import CartanSpec, Weight, add, scale, simple_root_as_weight

NEG_INF = float("-inf")


def ext_str(x) -> str:
    return "-inf" if x == NEG_INF else str(int(x))


def ext_parse(x):
    if x in ("-inf", None):
        return NEG_INF
    return int(x)


class Crystal:
    """Base class for crystal handles.

    Subclasses implement the five maps for labels in ``index_set``.  Set
    ``axiom_unsafe`` when the realization is known to break the crystal
    axioms, so that checkers report an expected failure instead of a bug.
    """

    axiom_unsafe = False

    def __init__(self, spec: CartanSpec, index_set=None):
        self.spec = spec
        self.index_set = tuple(spec.labels if index_set is None else index_set)

    def wt(self, b) -> Weight:
        raise NotImplementedError

    def eps(self, i, b):
        raise NotImplementedError

    def phi(self, i, b):
        raise NotImplementedError

    def e(self, i, b):
        raise NotImplementedError

    def f(self, i, b):
        raise NotImplementedError

    def render(self, b) -> str:
        return str(b)

    def pairing(self, i, b) -> int:
        """``<h_i, wt(b)>``."""
        return self.wt(b)[self.spec.index(i)]


@dataclass(frozen=True)
class TElem:
    lam: tuple

    def __str__(self):
        return "t(" + ",".join(map(str, self.lam)) + ")"


class TLambda(Crystal):
    """The one-element crystal ``T_lam``: frozen operators, ``eps = phi = -inf``."""

    def __init__(self, spec: CartanSpec, lam: Weight):
        super().__init__(spec)
        self.lam = tuple(lam)
        self.element = TElem(self.lam)

    def wt(self, b):
        return b.lam

    def eps(self, i, b):
        return NEG_INF

    def phi(self, i, b):
        return NEG_INF

    def e(self, i, b):
        return None

    def f(self, i, b):
        return None


@dataclass(frozen=True)
class BElem:
    i: str
    n: int

    def __str__(self):
        return f"b{self.i}({self.n})"


class ElementaryB(Crystal):
    """The elementary crystal ``B_i = {b_i(n)}`` with ``wt(b_i(n)) = n alpha_i``."""

    def __init__(self, spec: CartanSpec, i):
        super().__init__(spec)
        self.i = str(i)
        spec.index(self.i)
        self._alpha = simple_root_as_weight(spec, self.i)

    def elem(self, n: int) -> BElem:
        return BElem(self.i, int(n))

    def wt(self, b):
        return scale(b.n, self._alpha)

    def eps(self, i, b):
        return -b.n if str(i) == self.i else NEG_INF

    def phi(self, i, b):
        return b.n if str(i) == self.i else NEG_INF

    def e(self, i, b):
        return BElem(self.i, b.n + 1) if str(i) == self.i else None

    def f(self, i, b):
        return BElem(self.i, b.n - 1) if str(i) == self.i else None


@dataclass(frozen=True)
class DualElem:
    b: object


class DualCrystal(Crystal):
    """``B^vee``: arrows reversed, weights negated, ``eps`` and ``phi`` swapped."""

    def __init__(self, base: Crystal):
        super().__init__(base.spec, base.index_set)
        self.base = base
        self.axiom_unsafe = base.axiom_unsafe

    def wt(self, b):
        return tuple(-x for x in self.base.wt(b.b))

    def eps(self, i, b):
        return self.base.phi(i, b.b)

    def phi(self, i, b):
        return self.base.eps(i, b.b)

    def e(self, i, b):
        r = self.base.f(i, b.b)
        return None if r is None else DualElem(r)

    def f(self, i, b):
        r = self.base.e(i, b.b)
        return None if r is None else DualElem(r)

    def render(self, b):
        return self.base.render(b.b) + "^v"


def dual(B: Crystal) -> Crystal:
    """Dual crystal; the dual of a dual is the original handle."""
    if isinstance(B, DualCrystal):
        return B.base
    return DualCrystal(B)


class TensorProduct(Crystal):
    """Tensor product ``B_1 x ... x B_N`` with elements stored as tuples.

    Kashiwara's convention: for ``a x b``, ``f_i`` acts on ``a`` iff
    ``phi_i(a) > eps_i(b)`` and ``e_i`` acts on ``a`` iff ``phi_i(a) >= eps_i(b)``.
    For ``N`` factors this means ``f_i`` acts on the rightmost factor
    maximising ``phi_i(b_k) + sum_{j>k} <h_i, wt(b_j)>`` and ``e_i`` on the
    leftmost factor maximising ``eps_i(b_k) - sum_{j<k} <h_i, wt(b_j)>``.
    """

    def __init__(self, *factors: Crystal):
        if not factors:
            raise ValueError("empty tensor product")
        spec = factors[0].spec
        for B in factors[1:]:
            if B.spec != spec:
                raise ValueError("tensor factors have different Cartan data")
        super().__init__(spec, factors[0].index_set)
        self.factors = tuple(factors)
        self.axiom_unsafe = any(B.axiom_unsafe for B in factors)

    def wt(self, b):
        w = self.spec.zero()
        for B, x in zip(self.factors, b):
            w = add(w, B.wt(x))
        return w

    def _eps_profile(self, i, b):
        k = self.spec.index(i)
        acc = 0
        out = []
        for B, x in zip(self.factors, b):
            out.append(B.eps(i, x) - acc)
            acc += B.wt(x)[k]
        return out

    def _phi_profile(self, i, b):
        k = self.spec.index(i)
        acc = 0
        out = []
        for B, x in zip(reversed(self.factors), reversed(b)):
            out.append(B.phi(i, x) + acc)
            acc += B.wt(x)[k]
        out.reverse()
        return out

    def eps(self, i, b):
        return max(self._eps_profile(i, b))

    def phi(self, i, b):
        return max(self._phi_profile(i, b))

    def _replace(self, b, pos, new):
        if new is None:
            return None
        return b[:pos] + (new,) + b[pos + 1:]

    def e_position(self, i, b) -> int:
        prof = self._eps_profile(i, b)
        return prof.index(max(prof))

    def f_position(self, i, b) -> int:
        prof = self._phi_profile(i, b)
        top = max(prof)
        return len(prof) - 1 - prof[::-1].index(top)

    def e(self, i, b):
        k = self.e_position(i, b)
        return self._replace(b, k, self.factors[k].e(i, b[k]))

    def f(self, i, b):
        k = self.f_position(i, b)
        return self._replace(b, k, self.factors[k].f(i, b[k]))

    def render(self, b):
        return " (x) ".join(B.render(x) for B, x in zip(self.factors, b))


def tensor(*factors: Crystal) -> TensorProduct:
    return TensorProduct(*factors)


class Restriction(Crystal):
    """``Psi_J(B)``: same elements, only the labels in ``J`` are visible."""

    def __init__(self, base: Crystal, J):
        J = {str(j) for j in J}
        unknown = J - set(base.index_set)
        if unknown:
            raise ValueError(f"labels {sorted(unknown)} not in index set")
        super().__init__(base.spec, tuple(i for i in base.index_set if i in J))
        self.base = base
        self.axiom_unsafe = base.axiom_unsafe

    def _check(self, i):
        if str(i) not in self.index_set:
            raise KeyError(f"label {i} removed by restriction")

    def wt(self, b):
        return self.base.wt(b)

    def eps(self, i, b):
        self._check(i)
        return self.base.eps(i, b)

    def phi(self, i, b):
        self._check(i)
        return self.base.phi(i, b)

    def e(self, i, b):
        self._check(i)
        return self.base.e(i, b)

    def f(self, i, b):
        self._check(i)
        return self.base.f(i, b)

    def render(self, b):
        return self.base.render(b)


def restrict(B: Crystal, J) -> Crystal:
    if set(map(str, J)) == set(B.index_set):
        return B
    return Restriction(B, J)
