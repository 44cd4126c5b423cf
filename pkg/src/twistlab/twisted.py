"""Twisted conjugacy: displacement sets, class partitions, congruence tests.

For an automorphism phi, elements x, y are phi-conjugate when
y = z^-1 x phi(z) for some z.  The class of the identity is the
displacement set {g^-1 phi(g)}; its cardinality times the order of the
fixed subgroup equals the group order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import groups as gr
from .automorphisms import Automorphism
from .catalog import CatalogEntry
from .groups import FiniteGroup, SubgroupSet, UsageError


@dataclass
class DisplacementSet:
    """The set {g^-1 phi(g)} with its subgroup/normality flags."""

    group: FiniteGroup
    automorphism: Automorphism
    members: tuple[int, ...]
    is_subgroup: bool
    witness: Optional[tuple[int, int]]
    is_normal: Optional[bool]

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def names(self) -> list[str]:
        return [self.group.element_name(g) for g in self.members]

    def __repr__(self):
        flag = "subgroup" if self.is_subgroup else "not a subgroup"
        return f"<DisplacementSet size={self.cardinality} ({flag})>"


@dataclass
class TwistedPartition:
    group: FiniteGroup
    automorphism: Automorphism
    classes: tuple[tuple[int, ...], ...]

    @property
    def reidemeister_number(self) -> int:
        return len(self.classes)


def _check_phi(G: FiniteGroup, phi: Automorphism) -> None:
    if phi.group is not G:
        raise UsageError("automorphism belongs to a different group")


def displacement_set(G: FiniteGroup, phi: Automorphism) -> DisplacementSet:
    """Single pass over G collecting g^-1 phi(g), with flags computed."""
    _check_phi(G, phi)
    idx = np.arange(G.order, dtype=np.int64)
    vals = G.mul_many(G.inverse_array(), phi.perm[idx].astype(np.int64))
    members = np.unique(vals)
    ok, witness = gr.is_subgroup(G, members)
    normal = None
    if ok:
        normal = SubgroupSet(G, members).normal_in_parent()
    return DisplacementSet(G, phi, tuple(int(v) for v in members),
                           ok, witness, normal)


def _class_labels(G: FiniteGroup, phi: Automorphism) -> np.ndarray:
    """Connected components of x ↦ z^-1 x phi(z) over generator moves z.

    The maps compose like a right action of G, so generator moves suffice
    to generate every orbit.
    """
    n = G.order
    if not G.generators:
        return np.zeros(n, dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    rows, cols = [], []
    for z in G.generators:
        tgt = G.mul_many(G.mul_many(G.inv(z), idx), int(phi.perm[z]))
        rows.append(idx)
        cols.append(tgt)
    graph = coo_matrix(
        (np.ones(n * len(G.generators), dtype=np.int8),
         (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def twisted_partition(G: FiniteGroup, phi: Automorphism) -> TwistedPartition:
    """Full orbit partition; the Reidemeister number is the class count."""
    _check_phi(G, phi)
    labels = _class_labels(G, phi)
    order = np.argsort(labels, kind="stable")
    classes: list[tuple[int, ...]] = []
    start = 0
    sorted_labels = labels[order]
    for end in range(1, len(order) + 1):
        if end == len(order) or sorted_labels[end] != sorted_labels[start]:
            classes.append(tuple(int(v) for v in np.sort(order[start:end])))
            start = end
    classes.sort(key=lambda c: c[0])
    return TwistedPartition(G, phi, tuple(classes))


def reidemeister_number(G: FiniteGroup, phi: Automorphism) -> int:
    return int(_class_labels(G, phi).max()) + 1


def fixed_subgroup(G: FiniteGroup, phi: Automorphism) -> SubgroupSet:
    """C_G(phi) = {x : phi(x) = x}; always closed, verified anyway."""
    _check_phi(G, phi)
    members = np.nonzero(phi.perm == np.arange(G.order))[0]
    sub = SubgroupSet(G, members)
    sub.validate()
    return sub


def is_congruence(G: FiniteGroup, phi: Automorphism) -> bool:
    """Every twisted class must be the coset x·[1]_phi."""
    _check_phi(G, phi)
    idx = np.arange(G.order, dtype=np.int64)
    disp = np.unique(G.mul_many(G.inverse_array(), phi.perm[idx].astype(np.int64)))
    labels = _class_labels(G, phi)
    if np.bincount(labels).max() != disp.size:
        return False
    for d in disp:
        if not np.array_equal(labels[G.mul_many(idx, int(d))], labels):
            return False
    return True


@dataclass
class BVDecomposition:
    """Displacement pieces for the split tower family.

    b_set collects the displacements of the abelian part, v_set is the
    cyclic subgroup generated by the displacement of x, and product is
    their elementwise product, compared against the full displacement set.
    """

    b_set: SubgroupSet
    v_set: SubgroupSet
    product: tuple[int, ...]
    matches: bool
    b_is_subgroup: bool
    x_orbit_matches: bool


def bv_decomposition(entry: CatalogEntry, phi: Automorphism,
                     disp: Optional[DisplacementSet] = None) -> BVDecomposition:
    """Split the displacement set along A and ⟨x⟩ and compare the product."""
    if entry.name != "theorem_a":
        raise UsageError("decomposition applies to theorem_a entries only")
    G = entry.group
    _check_phi(G, phi)
    a_idx = G.a_part_indices()
    b_vals = np.unique(G.mul_many(G.inv_many(a_idx),
                                  phi.perm[a_idx].astype(np.int64)))
    b_ok, _ = gr.is_subgroup(G, b_vals)
    x = entry.gen("x")
    c = G.mul(G.inv(x), phi(x))
    v_sub = gr.subgroup_closure(G, [c])
    b_sub = SubgroupSet(G, b_vals)
    prod = np.unique(G.mul_many(b_sub.array()[:, None],
                                v_sub.array()[None, :]))
    if disp is None:
        disp = displacement_set(G, phi)
    matches = (tuple(int(v) for v in prod) == disp.members)
    # displacements of the x-powers should fill out exactly ⟨c⟩
    xpows = np.array([G.power(x, k) for k in range(G.m)], dtype=np.int64)
    xdisp = np.unique(G.mul_many(G.inv_many(xpows),
                                 phi.perm[xpows].astype(np.int64)))
    x_orbit_matches = np.array_equal(xdisp, v_sub.array())
    return BVDecomposition(b_sub, v_sub, tuple(int(v) for v in prod),
                           matches, bool(b_ok), bool(x_orbit_matches))
