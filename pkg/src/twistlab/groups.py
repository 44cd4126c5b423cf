"""Exact arithmetic in finite groups over a fixed 0-based element indexing.

Two primary backends: coordinate normal forms for split groups A ⋊ ⟨x⟩ with
a scalar action (A = Z_q1 × Z_q2, conjugation c^x = c^s), and dense Cayley
tables built from concrete realizations (permutations, matrices, quotients).
Direct products stay lazy so large coprime products never materialize a table.

Conventions, used everywhere: identity has index 0, conjugation is
g^h = h^-1 g h, and the commutator is [g, h] = g^-1 h^-1 g h.
"""

from __future__ import annotations

import math
from functools import reduce
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

TABLE_CAP = 20000           # dense Cayley tables refuse anything bigger
CLOSURE_BUDGET = 1 << 20    # products a worklist closure may perform
EXHAUSTIVE_LIMIT = 512      # full sweeps below this order, sampling above
SAMPLE_COUNT = 10_000


class UsageError(ValueError):
    """Bad argument: out-of-range index, malformed descriptor, wrong family."""


class ConstructionError(RuntimeError):
    """A group construction failed a verified precondition."""


class BudgetError(RuntimeError):
    """An enumeration or closure exceeded its configured budget."""


def _as_index_array(members: Iterable[int]) -> np.ndarray:
    arr = np.asarray(sorted(int(m) for m in members), dtype=np.int64)
    return arr


class FiniteGroup:
    """Base interface: elements are 0..order-1, index 0 is the identity."""

    order: int
    key: str
    generators: list[int]
    generator_names: list[str]

    identity = 0

    # -- backend primitives -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def mul_many(self, a, b) -> np.ndarray:
        """Vectorized product with numpy broadcasting over index arrays."""
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.empty(a.shape, dtype=np.int64)
        flat_a, flat_b, flat_o = a.ravel(), b.ravel(), out.ravel()
        for i in range(flat_a.size):
            flat_o[i] = self.mul(int(flat_a[i]), int(flat_b[i]))
        return out

    def inv_many(self, a) -> np.ndarray:
        a = np.asarray(a)
        out = np.empty(a.shape, dtype=np.int64)
        flat_a, flat_o = a.ravel(), out.ravel()
        for i in range(flat_a.size):
            flat_o[i] = self.inv(int(flat_a[i]))
        return out

    def element_name(self, a: int) -> str:
        return f"#{a}"

    # -- shared derived operations ------------------------------------------

    def check_element(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise UsageError(f"element index {a} out of range for {self.key}")
        return a

    def elements(self) -> range:
        return range(self.order)

    def conjugate(self, g: int, h: int) -> int:
        return self.mul(self.mul(self.inv(h), g), h)

    def commutator(self, g: int, h: int) -> int:
        return self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))

    def power(self, g: int, e: int) -> int:
        g = self.check_element(g)
        if e < 0:
            g, e = self.inv(g), -e
        result, base = 0, g
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def element_order(self, g: int) -> int:
        g = self.check_element(g)
        k, cur = 1, g
        while cur != 0:
            cur = self.mul(cur, g)
            k += 1
        return k

    def element_orders(self) -> np.ndarray:
        """Orders of all elements, computed by simultaneous powering."""
        if getattr(self, "_orders", None) is not None:
            return self._orders
        n = self.order
        base = np.arange(n, dtype=np.int64)
        cur = base.copy()
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        k = 1
        while (orders == 0).any():
            k += 1
            cur = self.mul_many(cur, base)
            orders[(orders == 0) & (cur == 0)] = k
            if k > n:
                raise ConstructionError(f"powering did not close in {self.key}")
        self._orders = orders
        return orders

    def is_abelian(self) -> bool:
        gens = np.asarray(self.generators, dtype=np.int64)
        all_idx = np.arange(self.order, dtype=np.int64)
        for g in gens:
            if not np.array_equal(
                self.mul_many(g, all_idx), self.mul_many(all_idx, g)
            ):
                return False
        return True

    def table(self) -> np.ndarray:
        """Dense multiplication table; cached. Requires order <= TABLE_CAP."""
        cached = getattr(self, "_table", None)
        if cached is not None:
            return cached
        if self.order > TABLE_CAP:
            raise BudgetError(
                f"refusing to materialize a {self.order}x{self.order} table"
            )
        idx = np.arange(self.order, dtype=np.int64)
        t = self.mul_many(idx[:, None], idx[None, :]).astype(np.int32)
        self._table = t
        return t

    def inverse_array(self) -> np.ndarray:
        cached = getattr(self, "_inv_arr", None)
        if cached is None:
            cached = self.inv_many(np.arange(self.order, dtype=np.int64))
            self._inv_arr = cached
        return cached

    def rows(self) -> list[list[int]]:
        """Table as plain nested lists; fastest for scalar inner loops."""
        cached = getattr(self, "_rows", None)
        if cached is None:
            cached = self.table().tolist()
            self._rows = cached
        return cached

    def __repr__(self):
        return f"<{type(self).__name__} {self.key} order={self.order}>"


class SemidirectGroup(FiniteGroup):
    """(Z_q1 × Z_q2) ⋊ Z_m with x acting on A by c ↦ c^s.

    Elements are normal-form triples a^i b^j x^k indexed lexicographically:
    index = (i*q2 + j)*m + k.  Right multiplication twists the incoming
    A-part by s^-k:  a^i b^j x^k · a^i' b^j' x^k' =
    a^(i + σ i') b^(j + σ j') x^(k+k') with σ = s^-k.
    """

    def __init__(self, q1: int, q2: int, m: int, s: int,
                 letters: Sequence[Optional[str]] = ("a", "b", "x"),
                 key: Optional[str] = None):
        q1, q2, m, s = int(q1), int(q2), int(m), int(s)
        if q1 < 1 or q2 < 1 or m < 1:
            raise UsageError("moduli q1, q2, m must be positive")
        lcm = math.lcm(q1, q2)
        s %= lcm if lcm > 1 else 1
        if lcm > 1:
            if math.gcd(s, lcm) != 1:
                raise UsageError(f"action scalar {s} not invertible mod {lcm}")
            if pow(s, m, lcm) != 1:
                raise UsageError(
                    f"s^m = {s}^{m} is not 1 mod {lcm}; x^m would act nontrivially"
                )
        self.q1, self.q2, self.m, self.s = q1, q2, m, s
        self.order = q1 * q2 * m
        self.key = key or f"semidirect:q1={q1},q2={q2},m={m},s={s}"
        self.letters = tuple(letters)

        # s^k and s^-k mod q1/q2 for every k, plus E[k] = 1 + s^-1 + ... + s^-(k-1)
        sinv = pow(s, -1, lcm) if lcm > 1 else 0
        self._spow1 = np.array([pow(s, k, q1) for k in range(m)], dtype=np.int64)
        self._spow2 = np.array([pow(s, k, q2) for k in range(m)], dtype=np.int64)
        self._sinv1 = np.array([pow(sinv, k, q1) for k in range(m)], dtype=np.int64)
        self._sinv2 = np.array([pow(sinv, k, q2) for k in range(m)], dtype=np.int64)
        e1 = np.zeros(m + 1, dtype=np.int64)
        e2 = np.zeros(m + 1, dtype=np.int64)
        for k in range(m):
            e1[k + 1] = (e1[k] + self._sinv1[k]) % q1
            e2[k + 1] = (e2[k] + self._sinv2[k]) % q2
        self._geom1, self._geom2 = e1, e2

        gens, names = [], []
        if q1 > 1:
            gens.append(self.encode(1, 0, 0))
            names.append(letters[0] or "a")
        if q2 > 1:
            gens.append(self.encode(0, 1, 0))
            names.append(letters[1] or "b")
        if m > 1:
            gens.append(self.encode(0, 0, 1))
            names.append(letters[2] or "x")
        self.generators = gens
        self.generator_names = names

    # -- coordinates ---------------------------------------------------------

    def encode(self, i: int, j: int, k: int) -> int:
        return (i % self.q1 * self.q2 + j % self.q2) * self.m + k % self.m

    def decode(self, idx: int) -> tuple[int, int, int]:
        ij, k = divmod(self.check_element(idx), self.m)
        i, j = divmod(ij, self.q2)
        return i, j, k

    def decode_many(self, idx) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        idx = np.asarray(idx, dtype=np.int64)
        ij, k = np.divmod(idx, self.m)
        i, j = np.divmod(ij, self.q2)
        return i, j, k

    def encode_many(self, i, j, k) -> np.ndarray:
        return (i % self.q1 * self.q2 + j % self.q2) * self.m + k % self.m

    # -- arithmetic ----------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        i1, j1, k1 = self.decode(a)
        i2, j2, k2 = self.decode(b)
        i = (i1 + self._sinv1[k1] * i2) % self.q1
        j = (j1 + self._sinv2[k1] * j2) % self.q2
        return (i * self.q2 + j) * self.m + (k1 + k2) % self.m

    def inv(self, a: int) -> int:
        i, j, k = self.decode(a)
        ii = -i * self._spow1[k] % self.q1
        jj = -j * self._spow2[k] % self.q2
        return (ii * self.q2 + jj) * self.m + (-k % self.m)

    def mul_many(self, a, b) -> np.ndarray:
        i1, j1, k1 = self.decode_many(a)
        i2, j2, k2 = self.decode_many(b)
        i = (i1 + self._sinv1[k1] * i2) % self.q1
        j = (j1 + self._sinv2[k1] * j2) % self.q2
        return (i * self.q2 + j) * self.m + (k1 + k2) % self.m

    def inv_many(self, a) -> np.ndarray:
        i, j, k = self.decode_many(a)
        ii = -i * self._spow1[k] % self.q1
        jj = -j * self._spow2[k] % self.q2
        return (ii * self.q2 + jj) * self.m + (-k) % self.m

    # -- structure helpers ----------------------------------------------------

    def a_part_indices(self) -> np.ndarray:
        """Indices of the abelian normal subgroup A (x-exponent zero)."""
        i = np.repeat(np.arange(self.q1), self.q2)
        j = np.tile(np.arange(self.q2), self.q1)
        return (i * self.q2 + j) * self.m

    def element_name(self, a: int) -> str:
        i, j, k = self.decode(a)
        la, lb, lx = self.letters
        parts = []
        for e, letter in ((i, la), (j, lb), (k, lx)):
            if e and letter:
                parts.append(letter if e == 1 else f"{letter}^{e}")
        return " ".join(parts) if parts else "1"


class TableGroup(FiniteGroup):
    """Finite group given by a dense, validated multiplication table.

    Tables are only ever built from concrete realizations or verified
    product/quotient constructions, so associativity is inherited rather
    than assumed.
    """

    def __init__(self, table, generators: Sequence[int],
                 generator_names: Sequence[str],
                 element_names: Optional[Sequence[str]] = None,
                 key: Optional[str] = None):
        t = np.asarray(table, dtype=np.int32)
        n = t.shape[0]
        if t.shape != (n, n):
            raise ConstructionError("multiplication table must be square")
        if n > TABLE_CAP:
            raise BudgetError(f"table order {n} exceeds cap {TABLE_CAP}")
        idx = np.arange(n, dtype=np.int32)
        # Latin square: each row and column is a permutation of 0..n-1
        if not (np.array_equal(np.sort(t, axis=1), np.tile(idx, (n, 1)))
                and np.array_equal(np.sort(t, axis=0), np.tile(idx[:, None], (1, n)))):
            raise ConstructionError("table is not a Latin square")
        if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
            raise ConstructionError("index 0 is not a two-sided identity")
        self.order = n
        self._table = t
        inv = np.empty(n, dtype=np.int64)
        rmask = t == 0
        for g in range(n):
            inv[g] = int(np.argmax(rmask[g]))
        if not np.array_equal(t[inv, np.arange(n)], np.zeros(n, dtype=t.dtype)):
            raise ConstructionError("inverses are not two-sided")
        self._inv_arr = inv
        self.generators = [int(g) for g in generators]
        self.generator_names = list(generator_names)
        self._names = list(element_names) if element_names is not None else None
        self.key = key or f"table:order={n}"

    @classmethod
    def from_realization(cls, identity, gens: Sequence[tuple[str, object]],
                         mul_fn: Callable, name_fn: Optional[Callable] = None,
                         key: Optional[str] = None,
                         max_order: int = TABLE_CAP) -> "TableGroup":
        """Build a table by breadth-first closure of concrete objects.

        Elements must be hashable; `mul_fn` must be their (associative)
        product.  Enumeration order is BFS from the identity over the
        given generators, which fixes the element indexing.
        """
        elems = [identity]
        index = {identity: 0}
        gen_objs = [g for _, g in gens]
        frontier = [identity]
        while frontier:
            nxt = []
            for u in frontier:
                for g in gen_objs:
                    v = mul_fn(u, g)
                    if v not in index:
                        if len(elems) >= max_order:
                            raise BudgetError("realization closure exceeded cap")
                        index[v] = len(elems)
                        elems.append(v)
                        nxt.append(v)
            frontier = nxt
        n = len(elems)
        table = np.empty((n, n), dtype=np.int32)
        for a, ea in enumerate(elems):
            row = table[a]
            for b, eb in enumerate(elems):
                row[b] = index[mul_fn(ea, eb)]
        names = [name_fn(e) for e in elems] if name_fn else None
        return cls(table, [index[g] for _, g in gens], [nm for nm, _ in gens],
                   element_names=names, key=key)

    def mul(self, a: int, b: int) -> int:
        return int(self._table[self.check_element(a), self.check_element(b)])

    def inv(self, a: int) -> int:
        return int(self._inv_arr[self.check_element(a)])

    def mul_many(self, a, b) -> np.ndarray:
        return self._table[np.asarray(a), np.asarray(b)].astype(np.int64)

    def inv_many(self, a) -> np.ndarray:
        return self._inv_arr[np.asarray(a)]

    def element_name(self, a: int) -> str:
        if self._names is None:
            return f"#{a}"
        return self._names[self.check_element(a)]


class ProductGroup(FiniteGroup):
    """Direct product H × K; element index = h * |K| + k, never tabulated."""

    def __init__(self, left: FiniteGroup, right: FiniteGroup,
                 key: Optional[str] = None):
        self.left, self.right = left, right
        self.order = left.order * right.order
        self.key = key or f"product:{left.key}|{right.key}"
        self.generators = (
            [g * right.order for g in left.generators]
            + list(right.generators)
        )
        self.generator_names = (
            [f"0.{n}" for n in left.generator_names]
            + [f"1.{n}" for n in right.generator_names]
        )

    def split(self, idx) -> tuple[np.ndarray, np.ndarray]:
        return np.divmod(np.asarray(idx, dtype=np.int64), self.right.order)

    def join(self, h, k) -> np.ndarray:
        return np.asarray(h, dtype=np.int64) * self.right.order + np.asarray(k)

    def mul(self, a: int, b: int) -> int:
        h1, k1 = divmod(self.check_element(a), self.right.order)
        h2, k2 = divmod(self.check_element(b), self.right.order)
        return self.left.mul(h1, h2) * self.right.order + self.right.mul(k1, k2)

    def inv(self, a: int) -> int:
        h, k = divmod(self.check_element(a), self.right.order)
        return self.left.inv(h) * self.right.order + self.right.inv(k)

    def mul_many(self, a, b) -> np.ndarray:
        h1, k1 = self.split(a)
        h2, k2 = self.split(b)
        return self.join(self.left.mul_many(h1, h2), self.right.mul_many(k1, k2))

    def inv_many(self, a) -> np.ndarray:
        h, k = self.split(a)
        return self.join(self.left.inv_many(h), self.right.inv_many(k))

    def element_name(self, a: int) -> str:
        h, k = divmod(self.check_element(a), self.right.order)
        return f"({self.left.element_name(h)}, {self.right.element_name(k)})"


class SubgroupSet:
    """A verified-or-verifiable subset of a parent group, kept sorted."""

    def __init__(self, parent: FiniteGroup, members: Iterable[int]):
        self.parent = parent
        arr = _as_index_array(members)
        if arr.size == 0:
            raise UsageError("subgroup sets cannot be empty")
        self.members = tuple(int(x) for x in arr)
        self._arr = arr
        self._set = frozenset(self.members)

    def array(self) -> np.ndarray:
        return self._arr

    def __contains__(self, g) -> bool:
        return int(g) in self._set

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SubgroupSet)
                and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __repr__(self):
        return f"<SubgroupSet order={len(self)} of {self.parent.key}>"

    def names(self) -> list[str]:
        return [self.parent.element_name(g) for g in self.members]

    def validate(self) -> None:
        """Check identity membership, closure, and Lagrange divisibility."""
        if 0 not in self._set:
            raise ConstructionError("subgroup does not contain the identity")
        if self.parent.order % len(self) != 0:
            raise ConstructionError("cardinality violates Lagrange")
        ok, witness = is_subgroup(self.parent, self.members)
        if not ok:
            raise ConstructionError(f"set is not closed: witness {witness}")

    def normal_in_parent(self) -> bool:
        """Closure under conjugation by parent generators (set is a subgroup)."""
        G = self.parent
        for g in G.generators:
            conj = G.mul_many(G.mul_many(G.inv(g), self._arr), g)
            if not np.isin(conj, self._arr).all():
                return False
        return True


def trivial_subgroup(G: FiniteGroup) -> SubgroupSet:
    return SubgroupSet(G, (0,))


def whole_group(G: FiniteGroup) -> SubgroupSet:
    return SubgroupSet(G, range(G.order))


# ---------------------------------------------------------------------------
# closures and subgroup machinery
# ---------------------------------------------------------------------------

def subgroup_closure(G: FiniteGroup, seeds: Iterable[int],
                     budget: int = CLOSURE_BUDGET) -> SubgroupSet:
    """⟨seeds⟩ by worklist saturation.

    In a finite group the sub-semigroup generated by S together with the
    identity is already a subgroup, so only right products by seeds are
    explored.  Raises BudgetError when more than `budget` products fire.
    """
    seeds = [G.check_element(s) for s in seeds]
    if not seeds:
        raise UsageError("closure needs a nonempty seed set")
    seen = {0}
    queue = [0]
    spent = 0
    while queue:
        u = queue.pop()
        for s in seeds:
            spent += 1
            if spent > budget:
                raise BudgetError(f"closure budget {budget} exhausted")
            v = G.mul(u, s)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return SubgroupSet(G, seen)


def is_subgroup(G: FiniteGroup, members: Iterable[int]):
    """Exact subgroup test; returns (flag, witness).

    The witness is a pair (u, v) from the set with u*v outside it, present
    exactly when the flag is False and the identity was present.
    """
    mem = sorted({G.check_element(m) for m in members})
    if not mem:
        raise UsageError("empty set cannot be tested for subgroup-ness")
    mset = frozenset(mem)
    if 0 not in mset:
        return False, None
    # grow ⟨S⟩ incrementally; S is a subgroup iff it equals its own closure
    span = {0}
    gens: list[int] = []
    for s in mem:
        if s not in span:
            gens.append(s)
            span = set(subgroup_closure(G, gens).members)
            if len(span) > len(mem):
                break
    if len(span) == len(mem) and span == mset:
        return True, None
    # find a concrete violating pair
    arr = np.asarray(mem, dtype=np.int64)
    for u in mem:
        prods = G.mul_many(u, arr)
        bad = ~np.isin(prods, arr)
        if bad.any():
            v = int(arr[np.argmax(bad)])
            return False, (u, v)
    raise ConstructionError("closure disagreed but no violating pair found")


def centralizer(G: FiniteGroup, members: Iterable[int]) -> SubgroupSet:
    """Pointwise centralizer of a set, by scan over the whole group."""
    idx = np.arange(G.order, dtype=np.int64)
    mask = np.ones(G.order, dtype=bool)
    for s in {G.check_element(m) for m in members}:
        mask &= G.mul_many(idx, s) == G.mul_many(s, idx)
    return SubgroupSet(G, idx[mask])


def center(G: FiniteGroup) -> SubgroupSet:
    """Z(G); the centralizer of any generating set."""
    if not G.generators:
        return whole_group(G)
    return centralizer(G, G.generators)


def commutator_subgroup_sets(G: FiniteGroup, inner: SubgroupSet,
                             chunk: int = 256) -> set[int]:
    """All commutators [g, h] with g in `inner`, h in G."""
    out: set[int] = set()
    idx = np.arange(G.order, dtype=np.int64)
    inv_all = G.inverse_array()
    left = inner.array()
    for start in range(0, left.size, chunk):
        block = left[start:start + chunk]
        gh = G.mul_many(block[:, None], idx[None, :])
        hg = G.mul_many(idx[None, :], block[:, None])
        comm = G.mul_many(inv_all[hg], gh)
        out.update(np.unique(comm).tolist())
    return out


def lower_central_series(G: FiniteGroup) -> list[SubgroupSet]:
    """γ1 = G, γ_{i+1} = ⟨[γ_i, G]⟩, returned until the series stabilizes."""
    series = [whole_group(G)]
    while True:
        comm = commutator_subgroup_sets(G, series[-1])
        nxt = subgroup_closure(G, comm) if comm != {0} else trivial_subgroup(G)
        if nxt == series[-1]:
            break
        series.append(nxt)
        if len(nxt) == 1:
            break
    return series


def nilpotency_class(G: FiniteGroup) -> Optional[int]:
    """Least c with γ_{c+1} = 1, or None when the series stalls above 1."""
    series = lower_central_series(G)
    if len(series[-1]) != 1:
        return None
    return len(series) - 1


# ---------------------------------------------------------------------------
# products and quotients
# ---------------------------------------------------------------------------

def direct_product(G: FiniteGroup, H: FiniteGroup) -> ProductGroup:
    return ProductGroup(G, H)


def quotient(G: FiniteGroup, N: SubgroupSet,
             rng_seed: int = 0) -> TableGroup:
    """G/N as a table over coset representatives.

    N must be (and is verified) normal.  Well-definedness of the
    representative multiplication is swept exhaustively for |G| <= 512
    and on 10^4 sampled pairs above that.
    """
    if N.parent is not G:
        raise UsageError("subgroup set belongs to a different group")
    N.validate()
    if not N.normal_in_parent():
        raise ConstructionError("cannot quotient by a non-normal subgroup")
    n = G.order
    coset_of = np.full(n, -1, dtype=np.int64)
    reps: list[int] = []
    narr = N.array()
    for g in range(n):
        if coset_of[g] < 0:
            coset_of[G.mul_many(g, narr)] = len(reps)
            reps.append(g)
    k = len(reps)
    rep_arr = np.asarray(reps, dtype=np.int64)
    table = coset_of[G.mul_many(rep_arr[:, None], rep_arr[None, :])]
    # representative-independence sweep
    if n <= EXHAUSTIVE_LIMIT:
        idx = np.arange(n, dtype=np.int64)
        full = coset_of[G.mul_many(idx[:, None], idx[None, :])]
        if not np.array_equal(full, table[coset_of[idx][:, None], coset_of[idx][None, :]]):
            raise ConstructionError("coset multiplication is not well defined")
    else:
        rng = np.random.default_rng(rng_seed)
        u = rng.integers(0, n, SAMPLE_COUNT)
        v = rng.integers(0, n, SAMPLE_COUNT)
        if not np.array_equal(coset_of[G.mul_many(u, v)],
                              table[coset_of[u], coset_of[v]]):
            raise ConstructionError("coset multiplication is not well defined")
    gen_pairs = [(coset_of[g], nm) for g, nm in zip(G.generators, G.generator_names)]
    gens = [int(g) for g, _ in gen_pairs if g != 0]
    names = [nm for g, nm in gen_pairs if g != 0]
    if not gens:              # quotient may be trivial
        gens, names = [0], []
        gens = []
    element_names = [f"[{G.element_name(r)}]" for r in reps]
    Q = TableGroup(table, gens, names, element_names=element_names,
                   key=f"quotient:{G.key}/N{len(N)}")
    Q.coset_of = coset_of
    Q.coset_reps = rep_arr
    return Q


class CentralProductInfo:
    """A central product H ∘ K with its embeddings and identified center."""

    def __init__(self, group: TableGroup, left: FiniteGroup, right: FiniteGroup,
                 embed_left: np.ndarray, embed_right: np.ndarray,
                 identified_center: tuple[int, ...],
                 left_center: tuple[int, ...], right_center: tuple[int, ...]):
        self.group = group
        self.left = left
        self.right = right
        self.embed_left = embed_left
        self.embed_right = embed_right
        self.identified_center = identified_center
        self.left_center = left_center
        self.right_center = right_center

    def __repr__(self):
        return f"<CentralProduct order={self.group.order}>"


def cyclic_identification(H: FiniteGroup, zh_gen: int,
                          K: FiniteGroup, zk_gen: int) -> dict[int, int]:
    """θ: ⟨zh_gen⟩ → ⟨zk_gen⟩ sending generator to generator."""
    oh = H.element_order(zh_gen)
    ok = K.element_order(zk_gen)
    if oh != ok:
        raise ConstructionError(
            f"cannot identify cyclic groups of orders {oh} and {ok}")
    theta = {}
    u, v = 0, 0
    for _ in range(oh):
        theta[u] = v
        u, v = H.mul(u, zh_gen), K.mul(v, zk_gen)
    return theta


def central_product(H: FiniteGroup, K: FiniteGroup,
                    theta: dict[int, int]) -> CentralProductInfo:
    """(H × K) / {(z, θ(z)^-1)} over an identified central subgroup.

    θ must be an isomorphism between a central subgroup of H and one of K;
    every hypothesis is verified before the quotient is formed, and the
    embedded images are checked to commute and meet in the identified center.
    """
    zh = SubgroupSet(H, theta.keys())
    zk = SubgroupSet(K, theta.values())
    zh.validate(), zk.validate()
    if len(zh) != len(zk) or len(set(theta.values())) != len(theta):
        raise ConstructionError("θ is not a bijection of the designated centers")
    zH, zK = center(H), center(K)
    if not all(z in zH for z in zh) or not all(z in zK for z in zk):
        raise ConstructionError("identified subgroups must be central")
    for u in zh:
        for v in zh:
            if theta[H.mul(u, v)] != K.mul(theta[u], theta[v]):
                raise ConstructionError("θ is not multiplicative")
    P = ProductGroup(H, K)
    kernel = SubgroupSet(
        P, (P.join(z, K.inv(theta[z])) for z in zh))
    Q = quotient(P, kernel)
    hs = np.arange(H.order, dtype=np.int64)
    ks = np.arange(K.order, dtype=np.int64)
    embed_left = Q.coset_of[P.join(hs, 0)]
    embed_right = Q.coset_of[P.join(0, ks)]
    # embedded copies commute elementwise
    comm = Q.mul_many(embed_left[:, None], embed_right[None, :])
    mmoc = Q.mul_many(embed_right[None, :], embed_left[:, None])
    if not np.array_equal(comm, mmoc):
        raise ConstructionError("embedded factors fail to commute")
    ident = tuple(sorted(int(Q.coset_of[P.join(z, 0)]) for z in zh))
    meet = sorted(set(embed_left.tolist()) & set(embed_right.tolist()))
    if tuple(meet) != ident:
        raise ConstructionError("factor intersection differs from identified center")
    return CentralProductInfo(Q, H, K, embed_left, embed_right, ident,
                              tuple(zh.members), tuple(zk.members))


# ---------------------------------------------------------------------------
# regularity
# ---------------------------------------------------------------------------

def _is_prime_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def is_regular_p_group(G: FiniteGroup, p: int):
    """All-pairs regularity test; returns (flag, witness_pair_or_None).

    For each pair (g, h) the defect d = h^-p g^-p (gh)^p must lie in the
    subgroup generated by p-th powers of elements of ⟨g, h⟩'.  Pairs with
    d = 1 need no further work, which makes the scan cheap in practice.
    """
    if not _is_prime_power(G.order, p):
        raise UsageError(f"|G| = {G.order} is not a power of {p}")
    n = G.order
    idx = np.arange(n, dtype=np.int64)
    powp = idx.copy()
    for _ in range(p - 1):
        powp = G.mul_many(powp, idx)
    inv_powp = G.inverse_array()[powp]
    # d[g, h] = inv(h^p) * inv(g^p) * (g h)^p, fully vectorized
    t = G.table() if n <= TABLE_CAP else None
    gh = G.mul_many(idx[:, None], idx[None, :])
    lead = G.mul_many(inv_powp[None, :], inv_powp[:, None])
    d = G.mul_many(lead, powp[gh])
    bad_pairs = np.argwhere(d != 0)
    rows = G.rows() if t is not None else None

    def _closure_pair(g: int, h: int) -> list[int]:
        seen = {0}
        queue = [0]
        while queue:
            u = queue.pop()
            for s in (g, h):
                v = rows[u][s] if rows else G.mul(u, s)
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return sorted(seen)

    for g, h in bad_pairs:
        g, h = int(g), int(h)
        span = _closure_pair(g, h)
        # ⟨g,h⟩' is the normal closure of [g,h] inside ⟨g,h⟩
        derived_gens = [G.commutator(g, h)]
        while True:
            derived = set(subgroup_closure(G, derived_gens).members)
            new = [G.conjugate(u, s) for u in derived for s in (g, h)
                   if G.conjugate(u, s) not in derived]
            if not new:
                break
            derived_gens.extend(sorted(set(new)))
        pth = {G.power(u, p) for u in derived}
        target = set(subgroup_closure(G, pth).members) if pth != {0} else {0}
        if int(d[g, h]) not in target:
            return False, (g, h)
    return True, None


# ---------------------------------------------------------------------------
# axioms validation (tables are only trusted after this sweep)
# ---------------------------------------------------------------------------

def validate_axioms(G: FiniteGroup, seed: int = 0) -> None:
    """Identity, inverses, associativity.

    Associativity is swept exhaustively for |G| <= EXHAUSTIVE_LIMIT and on
    10^4 sampled triples above; equivalent to checking that right
    translations form a faithful permutation representation.
    """
    n = G.order
    idx = np.arange(n, dtype=np.int64)
    if not (np.array_equal(G.mul_many(0, idx), idx)
            and np.array_equal(G.mul_many(idx, 0), idx)):
        raise ConstructionError("identity axiom fails")
    inv = G.inverse_array()
    if not ((G.mul_many(idx, inv) == 0).all() and (G.mul_many(inv, idx) == 0).all()):
        raise ConstructionError("inverse axiom fails")
    if n <= EXHAUSTIVE_LIMIT:
        ab = G.mul_many(idx[:, None], idx[None, :])
        for c in range(n):
            bc = G.mul_many(idx, c)
            if not np.array_equal(G.mul_many(ab, c), G.mul_many(idx[:, None], bc[None, :])):
                raise ConstructionError(f"associativity fails with c={c}")
    else:
        rng = np.random.default_rng(seed)
        a = rng.integers(0, n, SAMPLE_COUNT)
        b = rng.integers(0, n, SAMPLE_COUNT)
        c = rng.integers(0, n, SAMPLE_COUNT)
        if not np.array_equal(G.mul_many(G.mul_many(a, b), c),
                              G.mul_many(a, G.mul_many(b, c))):
            raise ConstructionError("associativity fails on sampled triples")
