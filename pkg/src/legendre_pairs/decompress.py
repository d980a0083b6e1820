"""Decompression: recover full ±1 pairs from a compressed candidate, and the
orbit-restricted whole-sequence search used at length 85.

Both engines are deterministic functions of (input, config, seed); search
shards never share mutable state, so results merge by concatenation.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .candgen import CandidatePair
from .grouptools import (
    LexRankCode,
    block_from_codes,
    orbits,
    sequence_from_block,
)
from .seqcore import compress, paf, paf_vector, psd_vector, verify_legendre_pair

PSD_CEILING_TOL = 1e-6


class SearchConfigError(ValueError):
    """Inconsistent search configuration or candidate."""


@dataclass
class SearchConfig:
    strategy: str = "backtrack"  # "backtrack" | "orbit_restricted"
    budget_nodes: int = 10**9
    max_solutions: int = 0  # 0 = collect every solution found
    seed: int = 0
    psd_prune: bool = True
    # orbit_restricted strategy only:
    subgroup_generators: Tuple[int, ...] = ()
    ones_orbits: int = 0
    twos_orbits: int = 0
    exhaustive: bool = False
    p2_prefilter: bool = True
    hint_codes: Tuple[Tuple[int, int], ...] = ()  # (ones_rank, twos_rank) warm starts

    def validate(self) -> None:
        if self.budget_nodes <= 0:
            raise SearchConfigError("budget_nodes must be positive")
        if self.strategy not in ("backtrack", "orbit_restricted"):
            raise SearchConfigError(f"unknown strategy {self.strategy!r}")
        if self.strategy == "orbit_restricted" and not self.subgroup_generators:
            raise SearchConfigError("orbit_restricted needs subgroup_generators")


@dataclass
class SearchResult:
    pairs: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = field(default_factory=list)
    codes: List[Optional[Tuple[dict, dict]]] = field(default_factory=list)
    nodes_visited: int = 0
    exhausted: bool = False


def _negative_counts(row: Sequence[int], m: int) -> List[int]:
    """Per-class count of -1 entries forced by the compression row sums."""
    counts = []
    for j, v in enumerate(row):
        if abs(v) > m or (m - v) % 2 != 0:
            raise SearchConfigError(
                f"row sum {v} at class {j} is unreachable with {m} ±1 entries"
            )
        counts.append((m - v) // 2)
    return counts


def uncompress_search(ell: int, cand: CandidatePair, cfg: SearchConfig) -> SearchResult:
    """Depth-first search for ±1 pairs whose m-compressions equal (cand.a, cand.b).

    Entries are assigned a whole residue class at a time, sides interleaved
    within a class; each class j of a side has exactly (m - row_j)/2 entries
    equal to -1.  Pruning: joint PAF interval/parity bounds per shift, plus an
    optional PSD ceiling on the completed A side.
    """
    cfg.validate()
    if cfg.strategy != "backtrack":
        raise SearchConfigError("uncompress_search requires strategy='backtrack'")
    d = len(cand.a)
    if len(cand.b) != d or d == 0 or ell % d != 0:
        raise SearchConfigError(f"candidate shape {d} does not divide ℓ={ell}")
    m = ell // d
    neg_a = _negative_counts(cand.a, m)
    neg_b = _negative_counts(cand.b, m)

    classes = [tuple(j + i * d for i in range(m)) for j in range(d)]
    # most-constrained-first: fewest subset choices first
    order = sorted(
        range(d), key=lambda j: (math.comb(m, neg_a[j]) * math.comb(m, neg_b[j]), j)
    )
    steps: List[Tuple[int, int]] = []  # (side, class index)
    for j in order:
        steps.append((0, j))
        steps.append((1, j))

    rows = ([0] * ell, [0] * ell)
    negs = (neg_a, neg_b)
    classes_set = [frozenset(c) for c in classes]
    nshifts = ell // 2

    # per-side partial PAF sums and unknown-product counts, indexed by shift
    partial = ([0] * (nshifts + 1), [0] * (nshifts + 1))
    unknown = ([ell] * (nshifts + 1), [ell] * (nshifts + 1))

    # Shift classes mod d and their exact per-side targets from the
    # compression identity: sum of PAF(j) over j ≡ ±c (mod d), folded onto
    # tracked shifts 1..ℓ//2, equals paf(compressed, c) (halved for c = 0,
    # net of PAF(0) = ℓ).
    class_shifts: Dict[int, List[int]] = {}
    for s in range(1, nshifts + 1):
        c = min(s % d, (d - s % d) % d)
        class_shifts.setdefault(c, []).append(s)
    class_targets = []
    for row_vals in (cand.a, cand.b):
        targets = {}
        for c in class_shifts:
            if c == 0:
                targets[c] = (paf(row_vals, 0) - ell) // 2
            else:
                targets[c] = paf(row_vals, c)
        class_targets.append(targets)

    rng = random.Random(cfg.seed)
    choice_tables: List[List[Tuple[int, ...]]] = []
    for side, j in steps:
        opts = list(itertools.combinations(classes[j], negs[side][j]))
        rng.shuffle(opts)
        choice_tables.append(opts)

    result = SearchResult()
    psd_limit = 2 * ell + 2 + PSD_CEILING_TOL
    stop = False

    def apply_class(side: int, j: int, neg_positions: Tuple[int, ...]):
        row = rows[side]
        ps, us = partial[side], unknown[side]
        for i in classes[j]:
            row[i] = -1 if i in neg_positions else 1
        deltas = []
        for s in range(1, nshifts + 1):
            dp = 0
            dn = 0
            for i in classes[j]:
                p1 = row[(i + s) % ell]
                if p1 != 0:
                    dp += row[i] * p1
                    dn += 1
                j2 = (i - s) % ell
                if j2 != (i + s) % ell:
                    p2v = row[j2]
                    if p2v != 0 and j2 not in classes_set[j]:
                        dp += p2v * row[i]
                        dn += 1
            ps[s] += dp
            us[s] -= dn
            deltas.append((dp, dn))
        return deltas

    def undo_class(side: int, j: int, deltas):
        row = rows[side]
        ps, us = partial[side], unknown[side]
        for i in classes[j]:
            row[i] = 0
        for s in range(1, nshifts + 1):
            dp, dn = deltas[s - 1]
            ps[s] -= dp
            us[s] += dn

    def paf_prune(side: int) -> bool:
        pa, pb = partial
        ua, ub = unknown
        for s in range(1, nshifts + 1):
            gap = -2 - pa[s] - pb[s]
            u = ua[s] + ub[s]
            if abs(gap) > u or (gap - u) % 2 != 0:
                return True
        ps, us = partial[side], unknown[side]
        targets = class_targets[side]
        for c, shifts in class_shifts.items():
            acc = 0
            slack = 0
            for s in shifts:
                acc += ps[s]
                slack += us[s]
            gap = targets[c] - acc
            if abs(gap) > slack or (gap - slack) % 2 != 0:
                return True
        return False

    a_last_step = max(i for i, (side, _) in enumerate(steps) if side == 0)

    def descend(depth: int) -> None:
        nonlocal stop
        if stop:
            return
        if depth == len(steps):
            A, B = tuple(rows[0]), tuple(rows[1])
            rep = verify_legendre_pair(A, B)
            if (
                rep.is_legendre_pair
                and compress(A, m) == cand.a
                and compress(B, m) == cand.b
            ):
                result.pairs.append((A, B))
                result.codes.append(None)
                if cfg.max_solutions and len(result.pairs) >= cfg.max_solutions:
                    stop = True
            return
        side, j = steps[depth]
        for neg_positions in choice_tables[depth]:
            if stop:
                return
            if result.nodes_visited >= cfg.budget_nodes:
                stop = True
                return
            result.nodes_visited += 1
            deltas = apply_class(side, j, neg_positions)
            ok = not paf_prune(side)
            if ok and cfg.psd_prune and depth == a_last_step:
                spec = psd_vector(rows[0])
                if max(spec[1:]) > psd_limit:
                    ok = False
            if ok:
                descend(depth + 1)
            undo_class(side, j, deltas)

    descend(0)
    result.exhausted = not stop
    return result


def _selection_hash(seed: int, index: int, space1: int, space2: int) -> Tuple[int, int]:
    """Counter-based pseudo-random selection pair: splittable and reproducible."""
    digest = hashlib.blake2b(
        f"{seed}:{index}".encode(), digest_size=16
    ).digest()
    v = int.from_bytes(digest, "big")
    return (v % space1, (v // space1) % space2)


def orbit_search(ell: int, cfg: SearchConfig) -> SearchResult:
    """Search block sequences built from whole multiplier orbits.

    Stage 1 filters each selection (exact compressed square-sum when 5 | ℓ,
    then a PSD ceiling); stage 2 pairs up pool members whose PAF vectors are
    exact complements.  Selections arrive from warm-start hints, then either
    an exhaustive scan or seeded counter-based sampling without replacement.
    """
    cfg.validate()
    if cfg.strategy != "orbit_restricted":
        raise SearchConfigError("orbit_search requires strategy='orbit_restricted'")
    table = orbits(ell, cfg.subgroup_generators)
    n1 = table.class_count(1)
    n2 = table.class_count(2)
    k1, k2 = cfg.ones_orbits, cfg.twos_orbits
    if k1 < 0 or k2 < 0 or k1 > n1 or k2 > n2:
        raise SearchConfigError(
            f"selection counts ({k1},{k2}) exceed available orbits ({n1},{n2})"
        )
    want = (ell - 1) // 2
    if k1 * 1 + k2 * 2 != want:
        raise SearchConfigError(
            f"selection counts ({k1},{k2}) give block size {k1 + 2 * k2}, need {want}"
        )
    space1, space2 = math.comb(n1, k1), math.comb(n2, k2)
    m5 = ell // 5 if ell % 5 == 0 else None
    psd_limit = 2 * ell + 2 + PSD_CEILING_TOL

    result = SearchResult()
    pool_by_paf: Dict[Tuple[int, ...], List[int]] = {}
    pool_seqs: List[Tuple[int, ...]] = []
    pool_codes: List[dict] = []

    def codes_dict(code1: LexRankCode, code2: Optional[LexRankCode]) -> dict:
        out = {1: (code1.n, code1.k, code1.rank)}
        if code2 is not None:
            out[2] = (code2.n, code2.k, code2.rank)
        return out

    def consider(rank1: int, rank2: int) -> None:
        codes = {1: LexRankCode(n1, k1, rank1)}
        if n2:
            codes[2] = LexRankCode(n2, k2, rank2)
        block = block_from_codes(table, codes)
        seq = sequence_from_block(block)
        if m5 is not None and cfg.p2_prefilter:
            if paf(compress(seq, m5), 0) != 4 * m5 + 1:
                return
        if cfg.psd_prune:
            spec = psd_vector(seq)
            if max(spec[1:]) > psd_limit:
                return
        pv = tuple(paf_vector(seq)[1 : ell // 2 + 1])
        comp = tuple(-2 - v for v in pv)
        my_index = len(pool_seqs)
        pool_seqs.append(seq)
        pool_codes.append(codes_dict(codes[1], codes.get(2)))
        pool_by_paf.setdefault(pv, []).append(my_index)
        for other in pool_by_paf.get(comp, []):
            if comp == pv and other == my_index:
                continue  # self-pairing handled below
            A, B = pool_seqs[other], seq
            rep = verify_legendre_pair(A, B)
            if rep.is_legendre_pair:
                result.pairs.append((A, B))
                result.codes.append((pool_codes[other], pool_codes[my_index]))
        if comp == pv:
            rep = verify_legendre_pair(seq, seq)
            if rep.is_legendre_pair:
                result.pairs.append((seq, seq))
                result.codes.append((pool_codes[my_index], pool_codes[my_index]))

    def hit_limits() -> bool:
        if cfg.max_solutions and len(result.pairs) >= cfg.max_solutions:
            return True
        return result.nodes_visited >= cfg.budget_nodes

    seen: Set[Tuple[int, int]] = set()
    for rank1, rank2 in cfg.hint_codes:
        if hit_limits():
            break
        key = (rank1, rank2)
        if key in seen:
            continue
        seen.add(key)
        result.nodes_visited += 1
        consider(rank1, rank2)

    complete = False
    if cfg.exhaustive:
        complete = True
        for rank1 in range(space1):
            for rank2 in range(space2):
                if (rank1, rank2) in seen:
                    continue
                if hit_limits():
                    complete = False
                    break
                seen.add((rank1, rank2))
                result.nodes_visited += 1
                consider(rank1, rank2)
            else:
                continue
            break
    else:
        index = 0
        total = space1 * space2
        while not hit_limits() and len(seen) < total:
            r1, r2 = _selection_hash(cfg.seed, index, space1, space2)
            index += 1
            if (r1, r2) in seen:
                continue
            seen.add((r1, r2))
            result.nodes_visited += 1
            consider(r1, r2)
        complete = len(seen) >= total

    result.exhausted = complete
    return result
