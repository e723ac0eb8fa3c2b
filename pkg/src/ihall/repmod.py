"""Representations of bound quivers over F_p.

Hom spaces, Krull-Schmidt decomposition and canonical isoclass keys,
automorphism counts, extension spaces, submodule enumeration (Hall numbers)
and enumeration of isoclasses by dimension.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .quiver import Arrow, BoundQuiver, Relation

Key = Tuple[Tuple[int, int], ...]  # sorted (indecomposable id, multiplicity)


class CapacityError(RuntimeError):
    """An enumeration exceeded its configured budget."""


class RelationError(ValueError):
    """A representation violates the relations of its bound quiver."""


@dataclass
class Budget:
    """Enumeration limits: vectors per Hom search and classes per Ext space."""
    search_cap: int = 2 ** 14
    ext_cap: int = 3 ** 12


BUDGET = Budget()


def default_search_cap(p: int) -> int:
    """Largest number of vectors we are willing to enumerate in one Hom space."""
    return BUDGET.search_cap


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


class FqRep:
    """Finite-dimensional representation; matrices have shape target x source."""

    __slots__ = ("bq", "p", "dims", "maps", "_key")

    def __init__(self, bq: BoundQuiver, p: int, dims: Sequence[int],
                 maps: Dict[str, np.ndarray] | None = None, check: bool = False):
        self.bq = bq
        self.p = p
        self.dims = tuple(int(d) for d in dims)
        vi = {v: i for i, v in enumerate(bq.vertices)}
        maps = dict(maps or {})
        full = {}
        for a in bq.arrows:
            shape = (self.dims[vi[a.target]], self.dims[vi[a.source]])
            m = maps.pop(a.label, None)
            if m is None:
                m = la.zeros(*shape)
            else:
                m = np.asarray(m, dtype=la.DTYPE).reshape(shape) % p
            full[a.label] = m
        if maps:
            raise KeyError(f"unknown arrows: {sorted(maps)}")
        self.maps = full
        self._key = None
        if check:
            check_relations(self)
            if not is_nilpotent_rep(self):
                raise RelationError("representation is not nilpotent")

    def dim(self, v: str) -> int:
        return self.dims[self.bq.vertices.index(v)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def __getitem__(self, label: str) -> np.ndarray:
        return self.maps[label]

    def byte_key(self):
        if self._key is None:
            self._key = (self.dims, b"".join(self.maps[a.label].astype(np.int8).tobytes()
                                             for a in self.bq.arrows))
        return self._key

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def all_maps_zero(self) -> bool:
        return not any(m.any() for m in self.maps.values())

    def to_json(self) -> dict:
        return {"dims": dict(zip(self.bq.vertices, self.dims)),
                "maps": {k: m.tolist() for k, m in self.maps.items() if m.size}}

    def __repr__(self):
        return f"FqRep(dims={self.dims}, p={self.p})"


def rep_from_json(bq: BoundQuiver, p: int, data) -> FqRep:
    if isinstance(data, str):
        data = json.loads(data)
    dims = [int(data["dims"].get(v, 0)) for v in bq.vertices]
    maps = {k: np.array(v, dtype=la.DTYPE) for k, v in data.get("maps", {}).items()}
    return FqRep(bq, p, dims, maps, check=True)


def zero_rep(bq: BoundQuiver, p: int) -> FqRep:
    return FqRep(bq, p, [0] * len(bq.vertices))


def simple(bq: BoundQuiver, p: int, v: str, mult: int = 1) -> FqRep:
    return FqRep(bq, p, [mult if w == v else 0 for w in bq.vertices])


def semisimple(bq: BoundQuiver, p: int, dims: Sequence[int]) -> FqRep:
    return FqRep(bq, p, dims)


def direct_sum(*reps: FqRep) -> FqRep:
    reps = [r for r in reps]
    bq, p = reps[0].bq, reps[0].p
    dims = [sum(r.dims[i] for r in reps) for i in range(len(bq.vertices))]
    maps = {}
    vi = {v: i for i, v in enumerate(bq.vertices)}
    for a in bq.arrows:
        m = la.zeros(dims[vi[a.target]], dims[vi[a.source]])
        r0 = c0 = 0
        for r in reps:
            blk = r.maps[a.label]
            m[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] = blk
            r0 += blk.shape[0]
            c0 += blk.shape[1]
        maps[a.label] = m
    return FqRep(bq, p, dims, maps)


def check_relations(M: FqRep) -> None:
    for rel in M.bq.relations:
        total = None
        for coeff, (first, second) in rel.terms:
            term = coeff * (M.maps[second] @ M.maps[first])
            total = term if total is None else total + term
        if total is not None and (total % M.p).any():
            raise RelationError(f"relation {rel.name} fails")


def _preimage(A: np.ndarray, W: np.ndarray, p: int) -> np.ndarray:
    """Rows of a constraint matrix whose kernel is {x : A x in colspan W}."""
    n = A.shape[0]
    if W.shape[1] == 0:
        return A % p
    C = la.nullspace(W.T % p, p).T  # kernel of C is colspan W
    return (C @ A) % p


def is_nilpotent_rep(M: FqRep) -> bool:
    """True iff every sufficiently long path acts by zero."""
    bq, p = M.bq, M.p
    vs = bq.vertices
    W = {v: la.zeros(M.dims[i], 0) for i, v in enumerate(vs)}
    for _ in range(M.total_dim + 1):
        if all(W[v].shape[1] == M.dims[i] for i, v in enumerate(vs)):
            return True
        newW = {}
        for i, v in enumerate(vs):
            rows = [_preimage(M.maps[a.label], W[a.target], p)
                    for a in bq.arrows if a.source == v]
            rows = [r for r in rows if r.shape[0]]
            if not rows or M.dims[i] == 0:
                newW[v] = la.eye(M.dims[i])
            else:
                newW[v] = la.nullspace(np.concatenate(rows, axis=0), p)
        W = newW
    return all(W[v].shape[1] == M.dims[i] for i, v in enumerate(vs))


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------

Morphism = Tuple[np.ndarray, ...]  # one matrix per vertex, shape N_i x M_i


def _hom_system(M: FqRep, N: FqRep) -> Tuple[np.ndarray, List[Tuple[int, int, int]]]:
    """Matrix of the intertwining equations; also per-vertex (offset, rows, cols)."""
    bq = M.bq
    vs = bq.vertices
    vi = {v: i for i, v in enumerate(vs)}
    offs = []
    o = 0
    for i in range(len(vs)):
        offs.append((o, N.dims[i], M.dims[i]))
        o += N.dims[i] * M.dims[i]
    blocks = []
    for a in bq.arrows:
        s, t = vi[a.source], vi[a.target]
        nrow = N.dims[t] * M.dims[s]
        if nrow == 0:
            continue
        row = la.zeros(nrow, o)
        os_, ns, ms = offs[s]
        ot, nt, mt = offs[t]
        if ns * ms:
            row[:, os_:os_ + ns * ms] += np.kron(N.maps[a.label], la.eye(ms))
        if nt * mt:
            row[:, ot:ot + nt * mt] -= np.kron(la.eye(nt), M.maps[a.label].T)
        blocks.append(row % M.p)
    A = np.concatenate(blocks, axis=0) if blocks else la.zeros(0, o)
    return A, offs


def _unpack(vec: np.ndarray, offs) -> Morphism:
    return tuple(vec[o:o + r * c].reshape(r, c) for o, r, c in offs)


def hom_space(M: FqRep, N: FqRep) -> List[Morphism]:
    """Basis of Hom(M, N); |Hom| = p ** len(basis)."""
    A, offs = _hom_system(M, N)
    total = offs[-1][0] + offs[-1][1] * offs[-1][2] if offs else 0
    if total == 0:
        return []
    ns = la.nullspace(A, M.p) if A.shape[0] else la.eye(total)
    return [_unpack(ns[:, j], offs) for j in range(ns.shape[1])]


def hom_dim(M: FqRep, N: FqRep) -> int:
    A, offs = _hom_system(M, N)
    total = sum(r * c for _, r, c in offs)
    return total - la.rank(A, M.p) if A.shape[0] else total


def compose(g: Morphism, f: Morphism, p: int) -> Morphism:
    """g after f."""
    return tuple((gi @ fi) % p for gi, fi in zip(g, f))


def is_invertible_morphism(f: Morphism, p: int) -> bool:
    for m in f:
        if m.shape[0] != m.shape[1]:
            return False
        if m.shape[0] and la.rank(m, p) < m.shape[0]:
            return False
    return True


def _endo_kind(f: Morphism, p: int) -> str:
    """'inv', 'nil' or 'split' (neither nilpotent nor invertible)."""
    inv = True
    nil = True
    for m in f:
        n = m.shape[0]
        if n == 0:
            continue
        r = la.rank(m, p)
        if r < n:
            inv = False
        if r and la.mat_pow(m, n, p).any():
            nil = False
    if inv:
        return "inv"
    if nil:
        return "nil"
    return "split"


# ---------------------------------------------------------------------------
# Sub- and quotient representations
# ---------------------------------------------------------------------------


def subrep(M: FqRep, basis: Sequence[np.ndarray]) -> FqRep:
    """Representation on invariant subspaces with the given column bases."""
    vi = {v: i for i, v in enumerate(M.bq.vertices)}
    maps = {}
    for a in M.bq.arrows:
        Bs, Bt = basis[vi[a.source]], basis[vi[a.target]]
        if Bs.shape[1] == 0 or Bt.shape[1] == 0:
            maps[a.label] = la.zeros(Bt.shape[1], Bs.shape[1])
            continue
        maps[a.label] = la.solve(Bt, (M.maps[a.label] @ Bs) % M.p, M.p)
    return FqRep(M.bq, M.p, [b.shape[1] for b in basis], maps)


def quotient_rep(M: FqRep, basis: Sequence[np.ndarray]) -> FqRep:
    vi = {v: i for i, v in enumerate(M.bq.vertices)}
    comps = [la.extend_basis(b, M.dims[i], M.p) for i, b in enumerate(basis)]
    maps = {}
    for a in M.bq.arrows:
        s, t = vi[a.source], vi[a.target]
        Cs, Ct, Bt = comps[s], comps[t], basis[t]
        if Cs.shape[1] == 0 or Ct.shape[1] == 0:
            maps[a.label] = la.zeros(Ct.shape[1], Cs.shape[1])
            continue
        full = np.concatenate([Bt, Ct], axis=1)
        coords = la.solve(full, (M.maps[a.label] @ Cs) % M.p, M.p)
        maps[a.label] = coords[Bt.shape[1]:]
    return FqRep(M.bq, M.p, [c.shape[1] for c in comps], maps)


def _split_by_bases(M: FqRep, K: Sequence[np.ndarray], I: Sequence[np.ndarray]):
    vi = {v: i for i, v in enumerate(M.bq.vertices)}
    P = [np.concatenate([k, i], axis=1) for k, i in zip(K, I)]
    Pinv = [la.inverse(x, M.p) if x.shape[0] else x for x in P]
    m1, m2 = {}, {}
    for a in M.bq.arrows:
        s, t = vi[a.source], vi[a.target]
        conj = (Pinv[t] @ M.maps[a.label] @ P[s]) % M.p
        ks, kt = K[s].shape[1], K[t].shape[1]
        m1[a.label] = conj[:kt, :ks]
        m2[a.label] = conj[kt:, ks:]
    return (FqRep(M.bq, M.p, [k.shape[1] for k in K], m1),
            FqRep(M.bq, M.p, [i.shape[1] for i in I], m2))


def fitting_split(M: FqRep, phi: Morphism) -> Tuple[FqRep, FqRep]:
    p = M.p
    K, I = [], []
    for m in phi:
        n = m.shape[0]
        if n == 0:
            K.append(la.zeros(0, 0))
            I.append(la.zeros(0, 0))
            continue
        pw = la.mat_pow(m, n, p)
        K.append(la.nullspace(pw, p))
        I.append(la.column_space(pw, p))
    return _split_by_bases(M, K, I)


# ---------------------------------------------------------------------------
# Batched helpers for exhaustive endomorphism scans
# ---------------------------------------------------------------------------


def _batch_rank(stack: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices (batch, r, c) mod p."""
    m = stack.copy() % p
    b, rows, cols = m.shape
    inv = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=la.DTYPE)
    rank = np.zeros(b, dtype=np.int64)
    ar = np.arange(b)
    for c in range(cols):
        # pivot row: first row >= rank with nonzero entry in column c
        rows_idx = np.arange(rows)[None, :]
        cand = (m[:, :, c] != 0) & (rows_idx >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.where(has, cand.argmax(axis=1), 0)
        sel = ar[has]
        pr = piv[has]
        rk = rank[has]
        # swap pivot row into position rank
        tmp = m[sel, pr].copy()
        m[sel, pr] = m[sel, rk]
        m[sel, rk] = tmp
        pivval = m[sel, rk, c]
        m[sel, rk] = (m[sel, rk] * inv[pivval][:, None]) % p
        factors = m[sel, :, c].copy()
        factors[np.arange(len(sel)), rk] = 0
        m[sel] = (m[sel] - factors[:, :, None] * m[sel, rk][:, None, :]) % p
        rank[sel] += 1
    return rank


def _batch_matpow(stack: np.ndarray, e: int, p: int) -> np.ndarray:
    n = stack.shape[1]
    result = np.broadcast_to(np.eye(n, dtype=la.DTYPE), stack.shape).copy()
    base = stack % p
    while e:
        if e & 1:
            result = np.einsum("bij,bjk->bik", result, base) % p
        base = np.einsum("bij,bjk->bik", base, base) % p
        e >>= 1
    return result


def _exhaustive_split(basis: List[Morphism], p: int, cap: int) -> Optional[Morphism]:
    d = len(basis)
    if p ** d > cap:
        raise CapacityError(f"endomorphism algebra of dimension {d} exceeds search cap "
                            f"({p}^{d} > {cap}); raise --max-hom-dim")
    coeffs = np.array(list(itertools.product(range(p), repeat=d)), dtype=la.DTYPE)
    nverts = len(basis[0])
    split = np.zeros(len(coeffs), dtype=bool)
    anysing = np.zeros(len(coeffs), dtype=bool)
    anynonnil = np.zeros(len(coeffs), dtype=bool)
    for v in range(nverts):
        n = basis[0][v].shape[0]
        if n == 0:
            continue
        stack = np.stack([b[v] for b in basis])  # d x n x n
        mats = np.einsum("kd,dij->kij", coeffs, stack) % p
        rk = _batch_rank(mats, p)
        anysing |= rk < n
        pw = _batch_matpow(mats, n, p)
        anynonnil |= pw.reshape(len(coeffs), -1).any(axis=1)
    split = anysing & anynonnil
    idx = np.nonzero(split)[0]
    if idx.size == 0:
        return None
    c = coeffs[idx[0]]
    return tuple(sum(int(ci) * b[v] for ci, b in zip(c, basis)) % p for v in range(nverts))


def find_splitting_endomorphism(M: FqRep, basis: List[Morphism], cap: int) -> Optional[Morphism]:
    """A non-nilpotent non-invertible endomorphism, or None if End(M) is local."""
    p = M.p
    if not basis:
        return None
    ident = tuple(la.eye(d) for d in M.dims)

    def shifted(f, lam):
        return tuple((fi - lam * e) % p for fi, e in zip(f, ident))

    cands: List[Morphism] = []
    for b in basis:
        for lam in range(p):
            cands.append(shifted(b, lam))
    for f in cands:
        if _endo_kind(f, p) == "split":
            return f
    more = []
    for b1, b2 in itertools.combinations(basis, 2):
        more.append(compose(b1, b2, p))
        more.append(compose(b2, b1, p))
        more.append(tuple((x + y) % p for x, y in zip(b1, b2)))
    for f in more:
        for lam in range(p):
            g = shifted(f, lam)
            if _endo_kind(g, p) == "split":
                return g
    if len(basis) <= 2:
        # every element is a combination already covered above only when d == 1
        if len(basis) == 1:
            return None
    return _exhaustive_split(basis, p, cap)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass
class Indecomposable:
    id: int
    rep: FqRep
    end_dim: int
    residue_degree: int
    name: str


class Classifier:
    """Canonical isoclass keys for representations of one bound quiver over F_p."""

    def __init__(self, bq: BoundQuiver, p: int, search_cap: int | None = None):
        self.bq = bq
        self.p = p
        self.cap = search_cap or default_search_cap(p)
        self.catalog: List[Indecomposable] = []
        self._by_dims: Dict[Tuple[int, ...], List[int]] = {}
        self._cache: Dict[tuple, Key] = {}
        self._rep_cache: Dict[Key, FqRep] = {}
        self._aut_cache: Dict[Key, int] = {}
        self._simple_ids: Dict[int, int] = {}
        self.jordan = (len(bq.vertices) == 1 and len(bq.arrows) == 1
                       and bq.arrows[0].source == bq.arrows[0].target
                       and not bq.relations)
        self._jordan_ids: Dict[int, int] = {}

    # catalog --------------------------------------------------------------
    def _register(self, U: FqRep, end_dim: int, degree: int, name: str | None = None) -> int:
        idx = len(self.catalog)
        if name is None:
            nz = [(v, d) for v, d in zip(self.bq.vertices, U.dims) if d]
            if len(nz) == 1 and nz[0][1] == 1:
                name = f"S{nz[0][0]}"
            else:
                name = "U(" + ",".join(str(d) for d in U.dims) + ")"
            same = [i for i in self._by_dims.get(U.dims, [])]
            if same:
                name += "#" + str(len(same) + 1)
        self.catalog.append(Indecomposable(idx, U, end_dim, degree, name))
        self._by_dims.setdefault(U.dims, []).append(idx)
        return idx

    def simple_id(self, i: int) -> int:
        if self.jordan:
            return self.jordan_id(1)
        if i not in self._simple_ids:
            v = self.bq.vertices[i]
            U = simple(self.bq, self.p, v)
            for j in self._by_dims.get(U.dims, []):
                self._simple_ids[i] = j
                return j
            self._simple_ids[i] = self._register(U, 1, 1)
        return self._simple_ids[i]

    def jordan_id(self, n: int) -> int:
        if n not in self._jordan_ids:
            m = la.zeros(n, n)
            for k in range(n - 1):
                m[k + 1, k] = 1
            U = FqRep(self.bq, self.p, [n], {self.bq.arrows[0].label: m})
            self._jordan_ids[n] = self._register(U, n, 1, "S1" if n == 1 else f"J{n}")
        return self._jordan_ids[n]

    def identify(self, U: FqRep) -> int:
        """Catalog id of an indecomposable representation."""
        basis = hom_space(U, U)
        end_dim = len(basis)
        for j in self._by_dims.get(U.dims, []):
            W = self.catalog[j]
            if W.end_dim != end_dim:
                continue
            if isomorphic_indecomposables(U, W.rep):
                return j
        return self._register(U, end_dim, residue_degree(U, basis))

    # keys ------------------------------------------------------------------
    def key(self, M: FqRep) -> Key:
        bk = M.byte_key()
        hit = self._cache.get(bk)
        if hit is not None:
            return hit
        if M.total_dim == 0:
            key: Key = ()
        elif self.jordan:
            key = self._jordan_key(M)
        elif M.all_maps_zero():
            key = tuple(sorted((self.simple_id(i), d) for i, d in enumerate(M.dims) if d))
        else:
            counts: Dict[int, int] = {}
            for U in self.decompose(M):
                j = self.identify(U)
                counts[j] = counts.get(j, 0) + 1
            key = tuple(sorted(counts.items()))
        self._cache[bk] = key
        return key

    def _jordan_key(self, M: FqRep) -> Key:
        x = M.maps[self.bq.arrows[0].label]
        n = M.dims[0]
        ranks = [n]
        pw = la.eye(n)
        while ranks[-1]:
            pw = (pw @ x) % self.p
            ranks.append(la.rank(pw, self.p))
        counts = {}
        for k in range(1, len(ranks)):
            at_least_k = ranks[k - 1] - ranks[k]
            at_least_k1 = (ranks[k] - ranks[k + 1]) if k + 1 < len(ranks) else 0
            exact = at_least_k - at_least_k1
            if exact:
                counts[self.jordan_id(k)] = exact
        return tuple(sorted(counts.items()))

    def decompose(self, M: FqRep) -> List[FqRep]:
        if M.total_dim == 0:
            return []
        basis = hom_space(M, M)
        phi = find_splitting_endomorphism(M, basis, self.cap)
        if phi is None:
            return [M]
        A, B = fitting_split(M, phi)
        return self.decompose(A) + self.decompose(B)

    def rep(self, key: Key) -> FqRep:
        if key not in self._rep_cache:
            if not key:
                R = zero_rep(self.bq, self.p)
            else:
                parts = [self.catalog[j].rep for j, m in key for _ in range(m)]
                R = direct_sum(*parts)
            self._cache.setdefault(R.byte_key(), key)
            self._rep_cache[key] = R
        return self._rep_cache[key]

    def dims(self, key: Key) -> Tuple[int, ...]:
        out = [0] * len(self.bq.vertices)
        for j, m in key:
            for i, d in enumerate(self.catalog[j].rep.dims):
                out[i] += m * d
        return tuple(out)

    def name(self, key: Key) -> str:
        if not key:
            return "0"
        parts = []
        for j, m in key:
            nm = self.catalog[j].name
            parts.append(nm if m == 1 else f"{m}{nm}")
        return "+".join(parts)

    def aut_count(self, key_or_rep) -> int:
        key = key_or_rep if isinstance(key_or_rep, tuple) else self.key(key_or_rep)
        if key not in self._aut_cache:
            self._aut_cache[key] = self._aut_from_key(key)
        return self._aut_cache[key]

    def _aut_from_key(self, key: Key) -> int:
        if not key:
            return 1
        M = self.rep(key)
        q = self.p
        dim_end = hom_dim(M, M)
        num = q ** dim_end
        den = 1
        for j, n in key:
            U = self.catalog[j]
            d = U.residue_degree
            Q = q ** d
            num *= la.gl_order(n, Q)
            den *= Q ** (n * n)
        assert num % den == 0
        return num // den


def isomorphic_indecomposables(U: FqRep, W: FqRep) -> bool:
    """Exact test for indecomposables: some composite W->U->... is invertible."""
    if U.dims != W.dims:
        return False
    f = hom_space(U, W)
    if not f:
        return False
    g = hom_space(W, U)
    for fa in f:
        for gb in g:
            if is_invertible_morphism(compose(gb, fa, U.p), U.p):
                return True
    return False


def residue_degree(U: FqRep, basis: List[Morphism]) -> int:
    """Degree over F_p of the residue field of the local ring End(U)."""
    p = U.p
    d = 1
    dim = max(1, len(basis))
    for b in basis:
        cur = b
        for r in range(1, dim + 1):
            # cur = b^(p^r)
            cur = tuple(la.mat_pow(m, p, p) for m in cur)
            diff = tuple((x - y) % p for x, y in zip(cur, b))
            if _endo_kind(diff, p) in ("nil",) or not any(m.any() for m in diff):
                d = d * r // math.gcd(d, r)
                break
        else:
            raise ArithmeticError("residue degree not found")
    return d


# ---------------------------------------------------------------------------
# Top-level convenience wrappers
# ---------------------------------------------------------------------------

_CLASSIFIERS: Dict[Tuple[int, int], Classifier] = {}


def classifier_for(bq: BoundQuiver, p: int) -> Classifier:
    k = (id(bq), p)
    c = _CLASSIFIERS.get(k)
    if c is None or c.bq is not bq:
        c = Classifier(bq, p)
        _CLASSIFIERS[k] = c
    return c


def is_isomorphic(M: FqRep, N: FqRep) -> bool:
    if M.dims != N.dims:
        return False
    c = classifier_for(M.bq, M.p)
    return c.key(M) == c.key(N)


def _combine(basis, coeffs, src_dims, dst_dims, p) -> Morphism:
    out = [la.zeros(n, m) for m, n in zip(src_dims, dst_dims)]
    for c, b in zip(coeffs, basis):
        for v in range(len(out)):
            out[v] = out[v] + c * b[v]
    return tuple(m % p for m in out)


def is_isomorphic_bruteforce(M: FqRep, N: FqRep, cap: int | None = None) -> bool:
    """Search Hom(M, N) for an invertible element (small cases only)."""
    if M.dims != N.dims:
        return False
    basis = hom_space(M, N)
    cap = cap or default_search_cap(M.p)
    if M.p ** len(basis) > cap:
        raise CapacityError("Hom space too large for exhaustive search")
    for coeffs in itertools.product(range(M.p), repeat=len(basis)):
        f = _combine(basis, coeffs, M.dims, N.dims, M.p)
        if is_invertible_morphism(f, M.p):
            return True
    return False


def aut_count(M: FqRep) -> int:
    return classifier_for(M.bq, M.p).aut_count(M)


def aut_count_bruteforce(M: FqRep, cap: int | None = None) -> int:
    basis = hom_space(M, M)
    cap = cap or default_search_cap(M.p)
    if M.p ** len(basis) > cap:
        raise CapacityError("End space too large for exhaustive count")
    count = 0
    for coeffs in itertools.product(range(M.p), repeat=len(basis)):
        f = _combine(basis, coeffs, M.dims, M.dims, M.p)
        if is_invertible_morphism(f, M.p):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Extensions
# ---------------------------------------------------------------------------


@dataclass
class ExtData:
    """Cocycle coordinates for extensions 0 -> Y -> L -> X -> 0."""
    X: FqRep
    Y: FqRep
    offsets: Dict[str, Tuple[int, int, int]]  # arrow -> (offset, rows, cols)
    ncoords: int
    cocycles: np.ndarray      # ncoords x dim Z
    coboundaries: np.ndarray  # ncoords x dim B
    reps: np.ndarray          # ncoords x dim Ext (complement of B in Z)
    hom_dim: int

    @property
    def dim(self) -> int:
        return self.reps.shape[1]


def ext_data(X: FqRep, Y: FqRep) -> ExtData:
    bq, p = X.bq, X.p
    vi = {v: i for i, v in enumerate(bq.vertices)}
    offsets = {}
    o = 0
    for a in bq.arrows:
        r, c = Y.dims[vi[a.target]], X.dims[vi[a.source]]
        offsets[a.label] = (o, r, c)
        o += r * c
    n = o
    arrows = {a.label: a for a in bq.arrows}
    # relation constraints: sum coeff * (Y(second) c_first + c_second X(first)) = 0
    rows = []
    for rel in bq.relations:
        a1 = arrows[rel.terms[0][1][0]]
        a2 = arrows[rel.terms[0][1][1]]
        nr = Y.dims[vi[a2.target]] * X.dims[vi[a1.source]]
        if nr == 0:
            continue
        block = la.zeros(nr, n)
        for coeff, (first, second) in rel.terms:
            f_off, f_r, f_c = offsets[first]
            s_off, s_r, s_c = offsets[second]
            if f_r * f_c:
                block[:, f_off:f_off + f_r * f_c] += coeff * np.kron(Y.maps[second], la.eye(f_c))
            if s_r * s_c:
                block[:, s_off:s_off + s_r * s_c] += coeff * np.kron(la.eye(s_r), X.maps[first].T)
        rows.append(block % p)
    if n == 0:
        Z = la.zeros(0, 0)
    elif rows:
        Z = la.nullspace(np.concatenate(rows, axis=0), p)
    else:
        Z = la.eye(n)
    # coboundary map from f = (f_i : X_i -> Y_i)
    foffs = []
    fo = 0
    for i in range(len(bq.vertices)):
        foffs.append((fo, Y.dims[i], X.dims[i]))
        fo += Y.dims[i] * X.dims[i]
    D = la.zeros(n, fo)
    for a in bq.arrows:
        s, t = vi[a.source], vi[a.target]
        off, r, c = offsets[a.label]
        if r * c == 0:
            continue
        os_, ys, xs = foffs[s]
        ot, yt, xt = foffs[t]
        if ys * xs:
            D[off:off + r * c, os_:os_ + ys * xs] += np.kron(Y.maps[a.label], la.eye(xs))
        if yt * xt:
            D[off:off + r * c, ot:ot + yt * xt] -= np.kron(la.eye(yt), X.maps[a.label].T)
    D %= p
    rk = la.rank(D, p) if D.size else 0
    hdim = fo - rk
    B = la.column_space(D, p) if D.size else la.zeros(n, 0)
    # complement of B inside Z
    if Z.shape[1] == 0:
        reps = la.zeros(n, 0)
    else:
        aug = np.concatenate([B, Z], axis=1)
        _, piv = la.rref(aug, p)
        extra = [c - B.shape[1] for c in piv if c >= B.shape[1]]
        reps = Z[:, extra] if extra else la.zeros(n, 0)
    return ExtData(X, Y, offsets, n, Z, B, reps, hdim)


def middle_term(ed: ExtData, coords: np.ndarray) -> FqRep:
    """L with L(a) = [[Y(a), c_a], [0, X(a)]] for the cocycle with given coordinates."""
    X, Y = ed.X, ed.Y
    bq, p = X.bq, X.p
    vi = {v: i for i, v in enumerate(bq.vertices)}
    dims = [x + y for x, y in zip(X.dims, Y.dims)]
    maps = {}
    for a in bq.arrows:
        s, t = vi[a.source], vi[a.target]
        off, r, c = ed.offsets[a.label]
        m = la.zeros(dims[t], dims[s])
        m[:Y.dims[t], :Y.dims[s]] = Y.maps[a.label]
        m[Y.dims[t]:, Y.dims[s]:] = X.maps[a.label]
        if r * c:
            m[:Y.dims[t], Y.dims[s]:] = coords[off:off + r * c].reshape(r, c)
        maps[a.label] = m % p
    return FqRep(bq, p, dims, maps)


def _isotypic_vertex(M: FqRep) -> Optional[int]:
    """Vertex index if M is S_i^m for a single vertex i (all maps zero)."""
    nz = [i for i, d in enumerate(M.dims) if d]
    if len(nz) == 1 and M.all_maps_zero():
        return nz[0]
    return None


def extension_middle_terms(X: FqRep, Y: FqRep, cap: int | None = None) -> Iterator[Tuple[int, FqRep]]:
    """Yield (count, L) with sum count*[L] equal to the sum over Ext^1(X, Y) of [L_xi].

    When X or Y is isotypic semisimple of multiplicity m, classes with the same
    span in the single-copy Ext space give isomorphic middle terms, so only
    subspaces are enumerated.
    """
    cap = cap or BUDGET.ext_cap
    p = X.p
    iy = _isotypic_vertex(Y)
    ix = _isotypic_vertex(X)
    if iy is not None and Y.dims[iy] > 1:
        yield from _isotypic_middles(X, Y, iy, sub_side=True, cap=cap)
        return
    if ix is not None and X.dims[ix] > 1:
        yield from _isotypic_middles(X, Y, ix, sub_side=False, cap=cap)
        return
    ed = ext_data(X, Y)
    if p ** ed.dim > cap:
        raise CapacityError(f"Ext space of dimension {ed.dim} too large ({p}^{ed.dim})")
    for coeffs in itertools.product(range(p), repeat=ed.dim):
        vec = (ed.reps @ np.array(coeffs, dtype=la.DTYPE)) % p if ed.dim else la.zeros(ed.ncoords, 1)[:, 0]
        yield 1, middle_term(ed, vec)


def _isotypic_middles(X: FqRep, Y: FqRep, vidx: int, sub_side: bool, cap: int):
    bq, p = X.bq, X.p
    v = bq.vertices[vidx]
    vi = {w: i for i, w in enumerate(bq.vertices)}
    if sub_side:
        m = Y.dims[vidx]
        single = ext_data(X, simple(bq, p, v))
        full = ext_data(X, Y)
    else:
        m = X.dims[vidx]
        single = ext_data(simple(bq, p, v), Y)
        full = ext_data(X, Y)
    e = single.dim
    count_total = 0
    for r in range(0, min(e, m) + 1):
        for W in la.rref_subspaces(e, r, p):
            cnt = la.surjection_count(m, r, p)
            vec = la.zeros(full.ncoords, 1)[:, 0]
            for k in range(r):
                cyc = (single.reps @ W[k]) % p
                for a in bq.arrows:
                    off1, r1, c1 = single.offsets[a.label]
                    if r1 * c1 == 0:
                        continue
                    blk = cyc[off1:off1 + r1 * c1].reshape(r1, c1)
                    off, rr, cc = full.offsets[a.label]
                    big = vec[off:off + rr * cc].reshape(rr, cc)
                    if sub_side:
                        big[k, :] = blk[0, :]
                    else:
                        big[:, k] = blk[:, 0]
                    vec[off:off + rr * cc] = big.reshape(-1)
            count_total += cnt
            yield cnt, middle_term(full, vec)
    expected = p ** (m * e)
    assert count_total == expected, (count_total, expected)


def ext1_classes(X: FqRep, Y: FqRep) -> Dict[Key, int]:
    """|Ext^1(X, Y)_L| for every middle term class L (direct enumeration)."""
    c = classifier_for(X.bq, X.p)
    out: Dict[Key, int] = {}
    for cnt, L in extension_middle_terms(X, Y):
        k = c.key(L)
        out[k] = out.get(k, 0) + cnt
    return out


def ext1_dim(X: FqRep, Y: FqRep) -> int:
    return ext_data(X, Y).dim


# ---------------------------------------------------------------------------
# Submodules and Hall numbers
# ---------------------------------------------------------------------------


def _invariant(M: FqRep, chosen: Dict[int, np.ndarray], a: Arrow, vi) -> bool:
    s, t = vi[a.source], vi[a.target]
    Bs, Bt = chosen[s], chosen[t]
    if Bs.shape[0] == 0:
        return True
    img = (M.maps[a.label] @ Bs.T) % M.p  # columns
    if not img.any():
        return True
    if Bt.shape[0] == 0:
        return False
    return la.rank(np.concatenate([Bt.T, img], axis=1), M.p) == Bt.shape[0]


def submodules(M: FqRep, dims: Sequence[int]) -> Iterator[List[np.ndarray]]:
    """All subrepresentations with the given dimension vector, as column bases."""
    bq, p = M.bq, M.p
    vs = bq.vertices
    vi = {v: i for i, v in enumerate(vs)}
    order = list(range(len(vs)))
    arrows_ready: List[List[Arrow]] = [[] for _ in order]
    pos = {v: k for k, v in enumerate(order)}
    for a in bq.arrows:
        k = max(pos[vi[a.source]], pos[vi[a.target]])
        arrows_ready[k].append(a)
    chosen: Dict[int, np.ndarray] = {}

    def rec(k: int):
        if k == len(order):
            yield [chosen[i].T.copy() for i in range(len(vs))]
            return
        i = order[k]
        for W in la.rref_subspaces(M.dims[i], dims[i], p):
            chosen[i] = W
            if all(_invariant(M, chosen, a, vi) for a in arrows_ready[k]):
                yield from rec(k + 1)
        chosen.pop(i, None)

    if any(d > n for d, n in zip(dims, M.dims)):
        return
    yield from rec(0)


def hall_number(L: FqRep, M: FqRep, N: FqRep) -> int:
    """Number of submodules X of L with X iso N and L/X iso M."""
    if tuple(L.dims) != tuple(m + n for m, n in zip(M.dims, N.dims)):
        return 0
    c = classifier_for(L.bq, L.p)
    kM, kN = c.key(M), c.key(N)
    count = 0
    for basis in submodules(L, N.dims):
        if c.key(subrep(L, basis)) != kN:
            continue
        if c.key(quotient_rep(L, basis)) == kM:
            count += 1
    return count


def hall_numbers_of(L: FqRep, sub_dims: Sequence[int]) -> Dict[Tuple[Key, Key], int]:
    """All F^L_{M,N} with dims N = sub_dims at once, keyed by (key M, key N)."""
    c = classifier_for(L.bq, L.p)
    out: Dict[Tuple[Key, Key], int] = {}
    for basis in submodules(L, sub_dims):
        kN = c.key(subrep(L, basis))
        kM = c.key(quotient_rep(L, basis))
        out[(kM, kN)] = out.get((kM, kN), 0) + 1
    return out


def ext1_with_middle(M: FqRep, N: FqRep, L: FqRep) -> int:
    """|Ext^1(M, N)_L| through the Riedtmann-Peng formula."""
    F = hall_number(L, M, N)
    c = classifier_for(L.bq, L.p)
    num = F * M.p ** hom_dim(M, N) * c.aut_count(M) * c.aut_count(N)
    den = c.aut_count(L)
    if num % den:
        raise ArithmeticError(f"Riedtmann-Peng quotient {num}/{den} is not an integer")
    return num // den


# ---------------------------------------------------------------------------
# Isoclass tables
# ---------------------------------------------------------------------------


@dataclass
class IsoclassTable:
    bq: BoundQuiver
    p: int
    keys: List[Key]
    reps: List[FqRep]
    max_total_dim: int

    def by_dims(self, dims) -> List[FqRep]:
        return [r for r in self.reps if tuple(r.dims) == tuple(dims)]

    def __len__(self):
        return len(self.reps)


def enumerate_isoclasses(bq: BoundQuiver, p: int, max_total_dim: int,
                         cap: int | None = None) -> IsoclassTable:
    """All nilpotent isoclasses up to a total dimension.

    Every nonzero nilpotent representation is an extension of a simple top
    quotient S_i by a representation of smaller dimension, so levels are grown
    one simple at a time. Only the line spanned by a class matters here.
    """
    cap = cap or BUDGET.ext_cap
    c = classifier_for(bq, p)
    levels: List[Dict[Key, FqRep]] = [{(): zero_rep(bq, p)}]
    simples = [simple(bq, p, v) for v in bq.vertices]
    for n in range(1, max_total_dim + 1):
        new: Dict[Key, FqRep] = {}
        for X in levels[n - 1].values():
            for S in simples:
                ed = ext_data(S, X)
                if p ** ed.dim > cap:
                    raise CapacityError("Ext space too large while enumerating isoclasses")
                for r in (0, 1):
                    for W in la.rref_subspaces(ed.dim, r, p):
                        vec = (ed.reps @ W[0]) % p if r else la.zeros(ed.ncoords, 1)[:, 0]
                        L = middle_term(ed, vec)
                        k = c.key(L)
                        if k not in new:
                            new[k] = c.rep(k)
        levels.append(new)
    keys, reps = [], []
    for lvl in levels:
        for k in sorted(lvl, key=lambda k: (c.dims(k), k)):
            keys.append(k)
            reps.append(lvl[k])
    return IsoclassTable(bq, p, keys, reps, max_total_dim)
