"""Catalog of named group families with designated generators and profiles.

Every entry records the spec string that rebuilds it, the generating set the
rest of the toolkit refers to by name, and the structural profile the entry
is expected to satisfy.  Constructors verify their defining relations
eagerly; the heavier profile facts (nilpotency class, center and derived
subgroup orders) are checked on demand by `assert_profile`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import groups as gr
from .groups import (
    CentralProductInfo,
    FiniteGroup,
    ProductGroup,
    SemidirectGroup,
    TableGroup,
    UsageError,
)

SYMMETRIC_CAP = 5


@dataclass
class CatalogEntry:
    name: str
    spec: str
    parameters: dict
    group: FiniteGroup
    designated: dict[str, int]
    expected_profile: dict = field(default_factory=dict)
    central_chain: list[CentralProductInfo] = field(default_factory=list)
    factor_entries: list["CatalogEntry"] = field(default_factory=list)

    def gen(self, name: str) -> int:
        try:
            return self.designated[name]
        except KeyError:
            raise UsageError(f"{self.spec} has no designated element {name!r}")

    def __repr__(self):
        return f"<CatalogEntry {self.spec} order={self.group.order}>"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise gr.ConstructionError(msg)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# main families
# ---------------------------------------------------------------------------

def theorem_a_group(n: int, p: int) -> CatalogEntry:
    """(Z_p^n × Z_p^n) ⋊ Z_p^(n-1) with x acting by c ↦ c^(1+p)."""
    if n < 2:
        raise UsageError(f"theorem_a needs n >= 2, got {n}")
    if p == 2 or not _is_prime(p):
        raise UsageError(f"theorem_a needs an odd prime, got {p}")
    q = p ** n
    G = SemidirectGroup(q, q, p ** (n - 1), 1 + p,
                        key=f"theorem_a:n={n},p={p}")
    a, b, x = G.encode(1, 0, 0), G.encode(0, 1, 0), G.encode(0, 0, 1)
    for c in (a, b):
        _require(G.conjugate(c, x) == G.power(c, 1 + p),
                 "conjugation relation c^x = c^(1+p) fails")
    _require(G.element_order(a) == q and G.element_order(b) == q
             and G.element_order(x) == p ** (n - 1),
             "generator orders are wrong")
    return CatalogEntry(
        name="theorem_a",
        spec=f"theorem_a:n={n},p={p}",
        parameters={"n": n, "p": p},
        group=G,
        designated={"a": a, "b": b, "x": x},
        expected_profile={
            "order": p ** (3 * n - 1),
            "nilpotency_class": n,
            "center_order": p * p,
            "derived_order": p ** (2 * (n - 1)),
        },
    )


def two_group_family(n: int) -> CatalogEntry:
    """(Z_2^n × Z_2^n) ⋊ Z_2^(n-1) with x acting by c ↦ c^3."""
    if n < 2:
        raise UsageError(f"two_group needs n >= 2, got {n}")
    q = 2 ** n
    G = SemidirectGroup(q, q, 2 ** (n - 1), 3, key=f"two_group:n={n}")
    a, b, x = G.encode(1, 0, 0), G.encode(0, 1, 0), G.encode(0, 0, 1)
    for c in (a, b):
        _require(G.conjugate(c, x) == G.power(c, 3),
                 "conjugation relation c^x = c^3 fails")
    return CatalogEntry(
        name="two_group",
        spec=f"two_group:n={n}",
        parameters={"n": n},
        group=G,
        designated={"a": a, "b": b, "x": x},
        expected_profile={"order": 2 ** (3 * n - 1)},
    )


def dihedral(order: int) -> CatalogEntry:
    """Dihedral group of the given 2-power order, Z_2^(n-1) ⋊ Z_2."""
    n = order.bit_length() - 1
    if order < 8 or order != 2 ** n:
        raise UsageError(f"dihedral wants a 2-power order >= 8, got {order}")
    half = order // 2
    G = SemidirectGroup(half, 1, 2, -1, letters=("a", None, "x"),
                        key=f"dihedral:{order}")
    a, x = G.encode(1, 0, 0), G.encode(0, 0, 1)
    _require(G.conjugate(a, x) == G.inv(a), "a^x = a^-1 fails")
    _require(G.element_order(a) == half and G.element_order(x) == 2,
             "dihedral generator orders are wrong")
    return CatalogEntry(
        name="dihedral",
        spec=f"dihedral:{order}",
        parameters={"order": order},
        group=G,
        designated={"a": a, "x": x},
        expected_profile={"order": order, "center_order": 2,
                          "nilpotency_class": n - 1},
    )


_QUAT_AXES = "1ijk"
_QUAT_TABLE = {
    ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
    ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"),
    ("k", "i"): (1, "j"), ("i", "k"): (-1, "j"),
}


def _quat_mul(u, v):
    su, au = u
    sv, av = v
    if au == "1":
        return (su * sv, av)
    if av == "1":
        return (su * sv, au)
    sign, axis = _QUAT_TABLE[(au, av)]
    return (su * sv * sign, axis)


def quaternion8() -> CatalogEntry:
    """Q8 from the unit-quaternion realization with generators i, j."""
    G = TableGroup.from_realization(
        (1, "1"), [("i", (1, "i")), ("j", (1, "j"))], _quat_mul,
        name_fn=lambda e: ("" if e[0] > 0 else "-") + e[1],
        key="q8",
    )
    i, j = G.generators
    minus_one = G.mul(i, i)
    _require(minus_one == G.mul(j, j) and G.mul(minus_one, minus_one) == 0,
             "i^2 = j^2 = -1 of order 2 fails")
    _require(G.conjugate(i, j) == G.inv(i), "i^j = -i fails")
    k = G.mul(i, j)
    return CatalogEntry(
        name="q8",
        spec="q8",
        parameters={},
        group=G,
        designated={"i": i, "j": j, "k": k, "-1": minus_one},
        expected_profile={"order": 8, "center_order": 2,
                          "nilpotency_class": 2},
    )


def heisenberg(p: int) -> CatalogEntry:
    """Unitriangular 3x3 matrices over Z_p; [x, y] = z with z central."""
    if not _is_prime(p) or p == 2:
        raise UsageError(f"heisenberg wants an odd prime, got {p}")

    def mat_mul(u, v):
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p,
                (u[2] + v[2] + u[0] * v[1]) % p)

    def mat_name(e):
        alpha, beta, gamma = e
        zc = (gamma - alpha * beta) % p
        parts = []
        for exp, letter in ((alpha, "x"), (beta, "y"), (zc, "z")):
            if exp:
                parts.append(letter if exp == 1 else f"{letter}^{exp}")
        return " ".join(parts) if parts else "1"

    G = TableGroup.from_realization(
        (0, 0, 0), [("x", (1, 0, 0)), ("y", (0, 1, 0))], mat_mul,
        name_fn=mat_name, key=f"heisenberg:{p}")
    x, y = G.generators
    z = G.commutator(x, y)
    _require(G.commutator(x, z) == 0 and G.commutator(y, z) == 0,
             "z is not central")
    _require(G.power(x, p) == 0 and G.power(y, p) == 0 and G.power(z, p) == 0,
             "exponent p fails")
    return CatalogEntry(
        name="heisenberg",
        spec=f"heisenberg:{p}",
        parameters={"p": p},
        group=G,
        designated={"x": x, "y": y, "z": z},
        expected_profile={"order": p ** 3, "center_order": p,
                          "nilpotency_class": 2, "derived_order": p},
    )


def modular_p3(p: int) -> CatalogEntry:
    """Z_p² ⋊ Z_p with x^y = x^(1+p): the other nonabelian order-p³ group.

    Presentation letters: x is the order-p² generator (the A part of the
    split backend), y the order-p generator acting on it.
    """
    if not _is_prime(p) or p == 2:
        raise UsageError(f"modular wants an odd prime, got {p}")
    G = SemidirectGroup(p * p, 1, p, 1 + p, letters=("x", None, "y"),
                        key=f"modular:{p}")
    x, y = G.encode(1, 0, 0), G.encode(0, 0, 1)
    _require(G.conjugate(x, y) == G.power(x, 1 + p), "x^y = x^(1+p) fails")
    _require(G.element_order(x) == p * p and G.element_order(y) == p,
             "modular generator orders are wrong")
    return CatalogEntry(
        name="modular",
        spec=f"modular:{p}",
        parameters={"p": p},
        group=G,
        designated={"x": x, "y": y, "z": G.power(x, p)},
        expected_profile={"order": p ** 3, "center_order": p,
                          "nilpotency_class": 2, "derived_order": p},
    )


def _cycle_notation(perm: tuple[int, ...]) -> str:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        cur = perm[start]
        while cur != start:
            cyc.append(cur)
            seen[cur] = True
            cur = perm[cur]
        out.append("(" + "".join(str(c + 1) for c in cyc) + ")")
    return "".join(out) if out else "()"


def symmetric(k: int) -> CatalogEntry:
    """S_k on symbols 1..k, generated by (12) and (12...k)."""
    if not 2 <= k <= SYMMETRIC_CAP:
        raise UsageError(f"sym wants 2 <= k <= {SYMMETRIC_CAP}, got {k}")

    def perm_mul(u, v):
        return tuple(v[u[i]] for i in range(k))

    swap = tuple([1, 0] + list(range(2, k)))
    cycle = tuple(list(range(1, k)) + [0])
    gens = [("t", swap)] if k == 2 else [("t", swap), ("c", cycle)]
    G = TableGroup.from_realization(
        tuple(range(k)), gens, perm_mul, name_fn=_cycle_notation,
        key=f"sym:{k}")
    designated = {nm: gi for nm, gi in zip(G.generator_names, G.generators)}
    import math
    return CatalogEntry(
        name="symmetric",
        spec=f"sym:{k}",
        parameters={"k": k},
        group=G,
        designated=designated,
        expected_profile={"order": math.factorial(k)},
    )


def cyclic(n: int) -> CatalogEntry:
    if n < 1:
        raise UsageError("cyclic order must be positive")
    G = SemidirectGroup(n, 1, 1, 1, letters=("a", None, None),
                        key=f"cyclic:{n}")
    designated = {"a": G.encode(1, 0, 0)} if n > 1 else {}
    return CatalogEntry(
        name="cyclic", spec=f"cyclic:{n}", parameters={"n": n}, group=G,
        designated=designated,
        expected_profile={"order": n, "nilpotency_class": 1 if n > 1 else 0},
    )


def abelian_product(q1: int, q2: int) -> CatalogEntry:
    if q1 < 2 or q2 < 2:
        raise UsageError("abelian factors must be >= 2")
    G = SemidirectGroup(q1, q2, 1, 1, key=f"abelian:{q1}x{q2}")
    return CatalogEntry(
        name="abelian", spec=f"abelian:{q1}x{q2}",
        parameters={"q1": q1, "q2": q2}, group=G,
        designated={"a": G.encode(1, 0, 0), "b": G.encode(0, 1, 0)},
        expected_profile={"order": q1 * q2, "nilpotency_class": 1},
    )


_EXTRASPECIAL_KINDS = {"heis", "mod", "d8", "q8"}


def extraspecial(p: int, m: int, kind: Optional[str] = None) -> CatalogEntry:
    """Iterated central product of m nonabelian order-p³ groups.

    Odd p composes Heisenberg ("heis") or exponent-p² ("mod") factors;
    p = 2 composes dihedral factors ("d8") or dihedral factors with one
    final quaternion factor ("q8").
    """
    if m < 1:
        raise UsageError("extraspecial needs m >= 1")
    if kind is None:
        kind = "heis" if p != 2 else "d8"
    if kind not in _EXTRASPECIAL_KINDS:
        raise UsageError(f"unknown extraspecial kind {kind!r}")
    if p == 2 and kind in ("heis", "mod"):
        raise UsageError(f"kind {kind!r} needs an odd prime")
    if p != 2 and kind in ("d8", "q8"):
        raise UsageError(f"kind {kind!r} is a 2-group recipe")

    def make_factor(i: int) -> CatalogEntry:
        if kind == "heis":
            return heisenberg(p)
        if kind == "mod":
            return modular_p3(p)
        if kind == "q8" and i == m - 1 and m > 1:
            return quaternion8()
        if kind == "q8" and m == 1:
            return quaternion8()
        e = dihedral(8)
        return e

    def center_gen(entry_or_group, designated_z=None):
        if designated_z is not None:
            return designated_z
        Z = gr.center(entry_or_group)
        for g in Z:
            if g != 0:
                return g
        raise gr.ConstructionError("center is trivial")

    factors = [make_factor(i) for i in range(m)]
    spec = f"extraspecial:p={p},m={m},kind={kind}"
    first = factors[0]
    if m == 1:
        return CatalogEntry(
            name="extraspecial", spec=spec,
            parameters={"p": p, "m": m, "kind": kind},
            group=first.group, designated=dict(first.designated),
            expected_profile={"order": p ** 3, "center_order": p,
                              "derived_order": p},
            factor_entries=factors,
        )

    chain: list[CentralProductInfo] = []
    acc_group = first.group
    acc_z = first.designated.get("z", first.designated.get("-1"))
    if acc_z is None:
        acc_z = center_gen(acc_group)
    for nxt in factors[1:]:
        nz = nxt.designated.get("z", nxt.designated.get("-1"))
        if nz is None:
            nz = center_gen(nxt.group)
        theta = gr.cyclic_identification(acc_group, acc_z, nxt.group, nz)
        info = gr.central_product(acc_group, nxt.group, theta)
        chain.append(info)
        new_z = int(info.embed_left[acc_z])
        acc_group, acc_z = info.group, new_z
    acc_group.key = spec
    designated = {
        nm: int(_compose_embeddings(chain, idx))
        for nm, idx in first.designated.items()
    }
    designated["z_center"] = acc_z
    return CatalogEntry(
        name="extraspecial", spec=spec,
        parameters={"p": p, "m": m, "kind": kind},
        group=acc_group, designated=designated,
        expected_profile={"order": p ** (1 + 2 * m), "center_order": p,
                          "derived_order": p},
        central_chain=chain, factor_entries=factors,
    )


def _compose_embeddings(chain: list[CentralProductInfo], idx: int) -> int:
    for info in chain:
        idx = int(info.embed_left[idx])
    return idx


def product_entry(left: CatalogEntry, right: CatalogEntry) -> CatalogEntry:
    G = ProductGroup(left.group, right.group,
                     key=f"product:{left.spec}|{right.spec}")
    designated = {f"0.{nm}": idx * right.group.order
                  for nm, idx in left.designated.items()}
    designated.update({f"1.{nm}": idx for nm, idx in right.designated.items()})
    return CatalogEntry(
        name="product", spec=f"product:{left.spec}|{right.spec}",
        parameters={}, group=G, designated=designated,
        expected_profile={"order": G.order},
        factor_entries=[left, right],
    )


# ---------------------------------------------------------------------------
# spec-string grammar
# ---------------------------------------------------------------------------

def _parse_kv(text: str, spec: str) -> dict[str, str]:
    out = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"bad parameter {part!r} in spec {spec!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_spec(spec: str) -> CatalogEntry:
    """Build a catalog entry from its command-line spec string."""
    spec = spec.strip()
    if not spec:
        raise UsageError("empty group spec")
    if spec == "q8":
        return quaternion8()
    head, _, rest = spec.partition(":")
    try:
        if head == "theorem_a":
            kv = _parse_kv(rest, spec)
            return theorem_a_group(int(kv["n"]), int(kv["p"]))
        if head == "two_group":
            kv = _parse_kv(rest, spec)
            return two_group_family(int(kv["n"]))
        if head == "dihedral":
            return dihedral(int(rest))
        if head == "heisenberg":
            return heisenberg(int(rest))
        if head == "modular":
            return modular_p3(int(rest))
        if head == "sym":
            return symmetric(int(rest))
        if head == "cyclic":
            return cyclic(int(rest))
        if head == "abelian":
            qs = [int(t) for t in rest.split("x")]
            if len(qs) != 2:
                raise UsageError(f"abelian spec wants q1xq2, got {rest!r}")
            return abelian_product(*qs)
        if head == "extraspecial":
            kv = _parse_kv(rest, spec)
            return extraspecial(int(kv["p"]), int(kv["m"]), kv.get("kind"))
        if head == "product":
            parts = rest.split("|")
            if len(parts) < 2:
                raise UsageError("product spec wants at least two factors")
            entry = parse_spec(parts[0])
            for part in parts[1:]:
                entry = product_entry(entry, parse_spec(part))
            return entry
    except (KeyError, ValueError) as exc:
        raise UsageError(f"cannot parse group spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown group spec {spec!r}")


#: Desk catalog swept by the congruence and invariant suites.
DEFAULT_CATALOG = (
    "cyclic:6",
    "abelian:9x9",
    "abelian:4x2",
    "sym:3",
    "sym:4",
    "dihedral:8",
    "dihedral:16",
    "q8",
    "heisenberg:3",
    "modular:3",
    "theorem_a:n=2,p=3",
    "two_group:n=2",
)


def default_entries() -> list[CatalogEntry]:
    return [parse_spec(s) for s in DEFAULT_CATALOG]


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def computed_profile(entry: CatalogEntry) -> dict:
    """Order, class, center and derived-subgroup orders, computed exactly."""
    G = entry.group
    derived = gr.lower_central_series(G)
    return {
        "order": G.order,
        "nilpotency_class": gr.nilpotency_class(G),
        "center_order": len(gr.center(G)),
        "derived_order": len(derived[1]) if len(derived) > 1 else 1,
    }


def assert_profile(entry: CatalogEntry) -> dict:
    """Compare the computed profile against every stated expectation."""
    got = computed_profile(entry)
    for key, want in entry.expected_profile.items():
        if want is None:
            continue
        if got.get(key) != want:
            raise gr.ConstructionError(
                f"{entry.spec}: profile {key} is {got.get(key)}, expected {want}")
    return got


def element_by_name(group: FiniteGroup, name: str) -> int:
    """Index of a named element in a group with an element-name table."""
    for idx in group.elements():
        if group.element_name(idx) == name:
            return idx
    raise UsageError(f"no element named {name!r} in {group.key}")
