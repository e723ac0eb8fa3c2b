"""Quivers with involution, their bound quivers and Euler/Cartan forms."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

DimVector = Tuple[int, ...]


class QuiverError(ValueError):
    """Invalid quiver or involution data."""


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    allow_loops: bool = False

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise QuiverError("arrow labels must be unique")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise QuiverError(f"arrow {a.label} uses an unknown vertex")
            if a.source == a.target and not self.allow_loops:
                raise QuiverError(f"loop {a.label} not allowed (set allow_loops)")

    @classmethod
    def build(cls, vertices: Sequence, arrows: Sequence[Tuple], allow_loops=False):
        """``arrows`` given as (label, source, target) triples."""
        return cls(tuple(str(v) for v in vertices),
                   tuple(Arrow(str(l), str(s), str(t)) for l, s, t in arrows),
                   allow_loops)

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(label)

    def arrows_between(self, s: str, t: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == s and a.target == t]

    def is_sink(self, v: str) -> bool:
        return all(a.source != v for a in self.arrows)

    def is_source(self, v: str) -> bool:
        return all(a.target != v for a in self.arrows)

    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        stack = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for a in self.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        stack.append(a.target)
        return seen == len(self.vertices)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices,
                      tuple(Arrow(a.label, a.target, a.source) for a in self.arrows),
                      self.allow_loops)


# ---------------------------------------------------------------------------
# Forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormData:
    vertices: Tuple[str, ...]
    euler_matrix: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, quiver: Quiver) -> "FormData":
        n = len(quiver.vertices)
        e = [[int(i == j) for j in range(n)] for i in range(n)]
        for a in quiver.arrows:
            e[quiver.index(a.source)][quiver.index(a.target)] -= 1
        return cls(quiver.vertices, tuple(tuple(r) for r in e))

    @property
    def cartan(self) -> Tuple[Tuple[int, ...], ...]:
        e = self.euler_matrix
        n = len(e)
        return tuple(tuple(e[i][j] + e[j][i] for j in range(n)) for i in range(n))

    def euler(self, a: Sequence[int], b: Sequence[int]) -> int:
        e = self.euler_matrix
        return sum(a[i] * e[i][j] * b[j]
                   for i in range(len(a)) if a[i]
                   for j in range(len(b)) if b[j])

    def symmetric(self, a: Sequence[int], b: Sequence[int]) -> int:
        return self.euler(a, b) + self.euler(b, a)

    def cartan_entry(self, i: str, j: str) -> int:
        return self.cartan[self.vertices.index(i)][self.vertices.index(j)]

    def unit(self, v: str) -> DimVector:
        return tuple(int(w == v) for w in self.vertices)


def euler_form(fd: FormData, a, b) -> int:
    return fd.euler(a, b)


def symmetrized_form(fd: FormData, a, b) -> int:
    return fd.symmetric(a, b)


def cartan_entry(fd: FormData, i: str, j: str) -> int:
    return fd.cartan_entry(i, j)


# ---------------------------------------------------------------------------
# Quivers with involution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IQuiver:
    quiver: Quiver
    tau: Tuple[Tuple[str, str], ...]
    arrow_tau: Tuple[Tuple[str, str], ...]

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    @property
    def tau_map(self) -> Dict[str, str]:
        return dict(self.tau)

    @property
    def arrow_tau_map(self) -> Dict[str, str]:
        return dict(self.arrow_tau)

    def t(self, v: str) -> str:
        return self.tau_map[v]

    def is_split(self, v: str) -> bool:
        return self.t(v) == v

    @property
    def representatives(self) -> Tuple[str, ...]:
        """Least vertex id of each orbit, in vertex order."""
        tm = self.tau_map
        return tuple(v for v in self.vertices if v <= tm[v])

    @property
    def forms(self) -> FormData:
        return FormData.of(self.quiver)

    def tau_vector(self, alpha: Sequence[int]) -> DimVector:
        tm = self.tau_map
        out = [0] * len(self.vertices)
        for i, v in enumerate(self.vertices):
            out[self.vertices.index(tm[v])] += alpha[i]
        return tuple(out)

    def is_split_type(self) -> bool:
        return all(self.is_split(v) for v in self.vertices)


def _arrow_signature(a: Arrow, tau: Mapping[str, str]) -> Tuple[str, str]:
    return tau[a.source], tau[a.target]


def validate_iquiver(quiver: Quiver, tau: Optional[Mapping[str, str]] = None,
                     arrow_tau: Optional[Mapping[str, str]] = None) -> IQuiver:
    """Check an involution and extend it to arrows when unambiguous."""
    tau = {v: v for v in quiver.vertices} if not tau else {str(k): str(v) for k, v in tau.items()}
    for v in quiver.vertices:
        tau.setdefault(v, v)
    if set(tau) != set(quiver.vertices) or sorted(tau.values()) != sorted(quiver.vertices):
        raise QuiverError("tau must be a permutation of the vertices")
    for v, w in tau.items():
        if tau[w] != v:
            raise QuiverError(f"tau is not an involution at vertex {v}")
    if arrow_tau:
        at = {str(k): str(v) for k, v in arrow_tau.items()}
    else:
        at = {}
    labels = {a.label: a for a in quiver.arrows}
    # fill in the forced part of the arrow involution
    for a in quiver.arrows:
        if a.label in at:
            continue
        s, t = _arrow_signature(a, tau)
        cands = quiver.arrows_between(s, t)
        if not cands:
            raise QuiverError(f"arrow {a.label} ({a.source}->{a.target}) has no image "
                              f"{s}->{t} under tau")
        if (s, t) == (a.source, a.target) and len(cands) > 1:
            if arrow_tau:
                raise QuiverError(f"arrow {a.label}: pairing missing from arrow_tau")
            # parallel arrows fixed setwise: identity pairing is the natural choice
            at[a.label] = a.label
            continue
        if len(cands) > 1:
            raise QuiverError(f"arrow {a.label}: ambiguous image among "
                              f"{[c.label for c in cands]}; supply arrow_tau")
        at[a.label] = cands[0].label
    for l, m in at.items():
        if l not in labels or m not in labels:
            raise QuiverError(f"arrow_tau mentions unknown arrow {l}->{m}")
        a, b = labels[l], labels[m]
        if (b.source, b.target) != _arrow_signature(a, tau):
            raise QuiverError(f"arrow {l} is not sent to an arrow {tau[a.source]}->{tau[a.target]}")
        if at.get(m) != l:
            raise QuiverError(f"arrow involution is not involutive at {l}")
    return IQuiver(quiver,
                   tuple(sorted(tau.items(), key=lambda kv: quiver.index(kv[0]))),
                   tuple(sorted(at.items())))


# ---------------------------------------------------------------------------
# Bound quivers
# ---------------------------------------------------------------------------


Path2 = Tuple[str, str]  # (first arrow, second arrow): composite second∘first


@dataclass(frozen=True)
class Relation:
    """Linear combination of length-two paths equal to zero."""
    terms: Tuple[Tuple[int, Path2], ...]
    name: str = ""


@dataclass(frozen=True)
class BoundQuiver:
    quiver: Quiver
    relations: Tuple[Relation, ...] = ()
    base: Optional[IQuiver] = None
    name: str = ""

    @property
    def vertices(self):
        return self.quiver.vertices

    @property
    def arrows(self):
        return self.quiver.arrows

    def eps_label(self, v: str) -> str:
        return eps_label(v)


def eps_label(v: str) -> str:
    return f"eps_{v}"


def path_algebra(quiver: Quiver) -> BoundQuiver:
    return BoundQuiver(quiver, (), None, "kQ")


def bound_quiver(iq: IQuiver) -> BoundQuiver:
    """Quiver with the extra eps arrows and the nilpotent/commutative relations."""
    q = iq.quiver
    tm = iq.tau_map
    atm = iq.arrow_tau_map
    arrows = list(q.arrows)
    for v in q.vertices:
        arrows.append(Arrow(eps_label(v), v, tm[v]))
    qbar = Quiver(q.vertices, tuple(arrows), allow_loops=True)
    rels = []
    for v in q.vertices:
        rels.append(Relation(((1, (eps_label(v), eps_label(tm[v]))),),
                             f"nil[{v}]"))
    for a in q.arrows:
        # eps_{t(a)} a - tau(a) eps_{s(a)}
        rels.append(Relation(((1, (a.label, eps_label(a.target))),
                              (-1, (eps_label(a.source), atm[a.label]))),
                             f"comm[{a.label}]"))
    return BoundQuiver(qbar, tuple(rels), iq, "iquiver")


def diagonal_iquiver(quiver: Quiver) -> IQuiver:
    """Two copies of Q swapped by the involution; primed copy uses suffix '."""
    verts = list(quiver.vertices) + [v + "'" for v in quiver.vertices]
    arrows = [(a.label, a.source, a.target) for a in quiver.arrows]
    arrows += [(a.label + "'", a.source + "'", a.target + "'") for a in quiver.arrows]
    dq = Quiver.build(verts, arrows, quiver.allow_loops)
    tau = {v: v + "'" for v in quiver.vertices}
    tau.update({v + "'": v for v in quiver.vertices})
    at = {a.label: a.label + "'" for a in quiver.arrows}
    at.update({a.label + "'": a.label for a in quiver.arrows})
    return validate_iquiver(dq, tau, at)


def double_framed(iq: IQuiver | Quiver) -> BoundQuiver:
    """Double framed bound quiver: the bound quiver of the diagonal ıquiver."""
    quiver = iq.quiver if isinstance(iq, IQuiver) else iq
    bq = bound_quiver(diagonal_iquiver(quiver))
    return BoundQuiver(bq.quiver, bq.relations, bq.base, "double-framed")


def lambda_euler_vs_torus(fd: FormData, tau: Mapping[str, str], m: Sequence[int],
                          alpha: Sequence[int], side: str = "left") -> int:
    """Euler form of the ıquiver algebra between a module class and a torus class."""
    if side == "left":
        return fd.euler(alpha, m)
    if side == "right":
        verts = fd.vertices
        ta = [0] * len(verts)
        for i, v in enumerate(verts):
            ta[verts.index(tau[v])] += alpha[i]
        return fd.euler(m, ta)
    raise ValueError("side must be 'left' or 'right'")


# ---------------------------------------------------------------------------
# JSON and standard examples
# ---------------------------------------------------------------------------


def iquiver_from_json(data) -> IQuiver:
    if isinstance(data, str):
        data = json.loads(data)
    q = Quiver.build(data["vertices"],
                     [(a["label"], a["from"], a["to"]) for a in data.get("arrows", [])],
                     bool(data.get("allow_loops", False)))
    return validate_iquiver(q, data.get("tau"), data.get("arrow_tau"))


def iquiver_to_json(iq: IQuiver) -> dict:
    return {
        "vertices": list(iq.vertices),
        "arrows": [{"from": a.source, "to": a.target, "label": a.label}
                   for a in iq.quiver.arrows],
        "tau": dict(iq.tau),
        "arrow_tau": dict(iq.arrow_tau),
        "allow_loops": iq.quiver.allow_loops,
    }


def load_iquiver(path: str) -> IQuiver:
    with open(path) as fh:
        return iquiver_from_json(json.load(fh))


def rank_two(a: int, b: int) -> Quiver:
    """a arrows 1->2 and b arrows 2->1."""
    arrows = [(f"a{k}", "1", "2") for k in range(1, a + 1)]
    arrows += [(f"b{k}", "2", "1") for k in range(1, b + 1)]
    return Quiver.build(["1", "2"], arrows)


def linear_quiver(n: int, orientation: str | None = None) -> Quiver:
    """A_n with arrows i -> i+1 by default; orientation string of '>'/'<' per edge."""
    orientation = orientation or ">" * (n - 1)
    arrows = []
    for k, o in enumerate(orientation, start=1):
        if o == ">":
            arrows.append((f"a{k}", str(k), str(k + 1)))
        else:
            arrows.append((f"a{k}", str(k + 1), str(k)))
    return Quiver.build([str(i) for i in range(1, n + 1)], arrows)


def jordan_quiver() -> Quiver:
    return Quiver.build(["1"], [("x", "1", "1")], allow_loops=True)


def point_quiver() -> Quiver:
    return Quiver.build(["1"], [])


def kronecker(m: int = 2) -> Quiver:
    return rank_two(m, 0)


def split(quiver: Quiver) -> IQuiver:
    return validate_iquiver(quiver)


def quasi_split_a3() -> IQuiver:
    """1 -> 2 <- 3 with the swap 1 <-> 3."""
    q = Quiver.build(["1", "2", "3"], [("a", "1", "2"), ("b", "3", "2")])
    return validate_iquiver(q, {"1": "3", "3": "1", "2": "2"})


def disjoint_points(n: int) -> Quiver:
    return Quiver.build([str(i) for i in range(1, n + 1)], [])
