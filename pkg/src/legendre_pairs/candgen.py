"""Candidate compressed pairs: the d=5 conjecture-driven generator and the
general constraint-list generator for other compression shapes.

A candidate is a pair of integer sequences (a, b) of length d = ℓ/m that a
real Legendre pair could compress to: entry sums 1, joint PAF deficit -2m at
every nonzero shift, and (d=5 conjecture form) square-sum 4m+1 per side.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .diophantine import admits_unit_sum, odd_five_squares, signed_orderings
from .seqcore import paf, paf_vector, psd_vector


class ProfileError(ValueError):
    """A generation profile violates one of its count/parity identities."""


@dataclass(frozen=True)
class CandidatePair:
    """A compressed pair with its balanced-split coefficient x (d=5 only)."""

    a: Tuple[int, ...]
    b: Tuple[int, ...]
    ell: int
    m: int
    x: Optional[int] = None

    def check(self) -> None:
        """Re-validate the defining constraints from scratch."""
        d = len(self.a)
        if len(self.b) != d or self.ell != d * self.m:
            raise ValueError("inconsistent candidate shape")
        if sum(self.a) != 1 or sum(self.b) != 1:
            raise ValueError("entry sums must be 1")
        pa, pb = paf_vector(self.a), paf_vector(self.b)
        for s in range(1, d):
            if pa[s] + pb[s] != -2 * self.m:
                raise ValueError(f"joint PAF at shift {s} is {pa[s] + pb[s]}")
        if self.x is not None and pa[1] - pa[2] != self.x:
            raise ValueError("recorded x does not match PAF(1)-PAF(2)")


def _rotations_and_reversals(t: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    d = len(t)
    rots = [t[i:] + t[:i] for i in range(d)]
    return rots + [tuple(reversed(r)) for r in rots]


def _canonical_key(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Least (x>=0 preferred) representative under per-side rotation/reversal
    and side swap."""
    best = None
    for first, second in ((a, b), (b, a)):
        x_first = paf(first, 1) - paf(first, 2)
        if x_first < 0:
            continue
        for fa in _rotations_and_reversals(first):
            for fb in _rotations_and_reversals(second):
                cand = (fa, fb)
                if best is None or cand < best:
                    best = cand
    if best is None:  # both orientations give x<0: impossible (swap negates x)
        raise AssertionError("empty canonical orbit")
    return best


def canonicalize(pair: CandidatePair) -> CandidatePair:
    """Idempotent canonical form over shifts, reversals, and side swap."""
    a, b = _canonical_key(pair.a, pair.b)
    return CandidatePair(a=a, b=b, ell=pair.ell, m=pair.m,
                         x=paf(a, 1) - paf(a, 2))


def candidates_d5(m: int, x_filter: Optional[Set[int]] = None) -> List[CandidatePair]:
    """All canonical d=5 conjecture-form candidates for length ℓ = 5m.

    Both sides range over unit-sum signed arrangements of the all-odd
    five-square solutions of 4m+1; pairs are kept when the joint PAF deficit
    is exactly -2m at shifts 1 and 2 (shifts 3,4 follow by symmetry).
    """
    if m < 1 or m % 2 == 0:
        raise ValueError(f"m must be a positive odd integer, got {m}")
    tuples: Set[Tuple[int, ...]] = set()
    for sol in odd_five_squares(m):
        if admits_unit_sum(sol):
            tuples.update(signed_orderings(sol))
    ordered = sorted(tuples)
    profiles = [(t, paf(t, 1), paf(t, 2)) for t in ordered]
    target = -2 * m
    seen: Set[Tuple[Tuple[int, ...], Tuple[int, ...]]] = set()
    out: List[CandidatePair] = []
    for a, pa1, pa2 in profiles:
        for b, pb1, pb2 in profiles:
            if pa1 + pb1 != target or pa2 + pb2 != target:
                continue
            key = _canonical_key(a, b)
            if key in seen:
                continue
            seen.add(key)
            x = paf(key[0], 1) - paf(key[0], 2)
            if x_filter is not None and x not in x_filter:
                continue
            out.append(CandidatePair(a=key[0], b=key[1], ell=5 * m, m=m, x=x))
    out.sort(key=lambda p: (p.a, p.b))
    return out


@dataclass
class GenerationProfile:
    """Constraint list for the general candidate generator.

    abs_value_counts maps magnitude -> total count across the pair (2d
    entries in all); balanced additionally forces the per-side split in half.
    """

    ell: int
    m: int
    d: int
    abs_value_counts: Dict[int, int]
    balanced: bool = False
    x_filter: Optional[Set[int]] = None
    budget: Optional[int] = None
    seed: int = 0

    def validate(self) -> None:
        if self.ell != self.d * self.m:
            raise ProfileError(f"ell={self.ell} != d*m = {self.d * self.m}")
        total = sum(self.abs_value_counts.values())
        if total != 2 * self.d:
            raise ProfileError(
                f"magnitude counts sum to {total}, need 2*d = {2 * self.d}"
            )
        for mag, cnt in self.abs_value_counts.items():
            if cnt < 0:
                raise ProfileError(f"negative count for magnitude {mag}")
            if cnt == 0:
                continue
            if mag < 1 or mag > self.m or mag % 2 != self.m % 2:
                raise ProfileError(
                    f"magnitude {mag} outside the compressed alphabet for m={self.m}"
                )
            if self.balanced and cnt % 2 != 0:
                raise ProfileError(
                    f"balanced split needs an even count for magnitude {mag}, got {cnt}"
                )

    def side_counts(self) -> Optional[Dict[int, int]]:
        """Per-sequence magnitude counts when balanced, else None."""
        if not self.balanced:
            return None
        return {mag: cnt // 2 for mag, cnt in self.abs_value_counts.items()}

    def admits(self, a: Sequence[int], b: Sequence[int]) -> bool:
        """Check a concrete pair against every profile constraint."""
        self.validate()
        a, b = tuple(a), tuple(b)
        if len(a) != self.d or len(b) != self.d:
            return False
        counts: Dict[int, int] = {}
        for v in a + b:
            counts[abs(v)] = counts.get(abs(v), 0) + 1
        expected = {mag: cnt for mag, cnt in self.abs_value_counts.items() if cnt}
        if counts != expected:
            return False
        if self.balanced:
            half = {mag: cnt for mag, cnt in self.side_counts().items() if cnt}
            for side in (a, b):
                side_counts: Dict[int, int] = {}
                for v in side:
                    side_counts[abs(v)] = side_counts.get(abs(v), 0) + 1
                if side_counts != half:
                    return False
        if sum(a) != 1 or sum(b) != 1:
            return False
        pa, pb = paf_vector(a), paf_vector(b)
        if any(pa[s] + pb[s] != -2 * self.m for s in range(1, self.d)):
            return False
        # spectral condition: follows exactly from the PAF identity, but
        # recheck in float as an independent belt
        sa, sb = psd_vector(a), psd_vector(b)
        if any(abs(sa[k] + sb[k] - (2 * self.ell + 2)) > 1e-6 for k in range(1, self.d)):
            return False
        return True


def candidates_general(profile: GenerationProfile) -> Iterator[CandidatePair]:
    """Deterministic seeded stream of pairs satisfying the profile.

    Backtracking over positions in interleaved (a0, b0, a1, b1, ...) order
    with running joint-PAF interval/parity pruning; stops at profile.budget
    nodes when set.
    """
    profile.validate()
    d, m = profile.d, profile.m
    target = -2 * m
    rng = random.Random(profile.seed)
    mags = sorted(profile.abs_value_counts)
    max_mag = max(mags)

    # remaining magnitude budgets: joint, plus per-side when balanced
    joint = dict(profile.abs_value_counts)
    half = profile.side_counts()
    side_rem = [dict(half), dict(half)] if half else None

    a = [0] * d
    b = [0] * d
    rows = (a, b)
    shifts = range(1, d // 2 + 1)
    # joint partial PAF per shift and number of unknown products
    partial = {s: 0 for s in shifts}
    unknown = {s: 2 * d for s in shifts}
    nodes = 0
    budget = profile.budget

    # per-depth value orders, fixed by the seed for reproducibility
    orders: List[List[int]] = []
    for _ in range(2 * d):
        vals = [sign * mag for mag in mags for sign in (1, -1)]
        rng.shuffle(vals)
        orders.append(vals)

    def products_touching(row: List[int], i: int, s: int) -> int:
        """New known products for shift s after row[i] was just set."""
        total = 0
        j = (i + s) % d
        if row[j] != 0:
            total += row[i] * row[j]
        j2 = (i - s) % d
        if j2 != j and row[j2] != 0:
            total += row[i] * row[j2]
        return total

    def count_new(row: List[int], i: int, s: int) -> int:
        n = 0
        if row[(i + s) % d] != 0:
            n += 1
        j2 = (i - s) % d
        if j2 != (i + s) % d and row[j2] != 0:
            n += 1
        return n

    def feasible_counts(side_idx: int, pos: int) -> bool:
        remaining = d - pos - 1
        row = rows[side_idx]
        cur = sum(row[: pos + 1])
        if side_rem is not None:
            rem = side_rem[side_idx]
            if sum(rem.values()) != remaining:
                return False
            lo = cur - sum(mag * cnt for mag, cnt in rem.items())
            hi = cur + sum(mag * cnt for mag, cnt in rem.items())
        else:
            if remaining > sum(joint.values()):
                return False
            caps = sorted(
                (mag for mag, cnt in joint.items() for _ in range(cnt)),
                reverse=True,
            )[:remaining]
            lo, hi = cur - sum(caps), cur + sum(caps)
        if not lo <= 1 <= hi:
            return False
        if (1 - cur - remaining) % 2 != 0:  # all values odd
            return False
        return True

    def prune_paf() -> bool:
        for s in shifts:
            gap = target - partial[s]
            bound = unknown[s] * max_mag * max_mag
            if abs(gap) > bound:
                return True
            if unknown[s] == 0 and gap != 0:
                return True
            # all products are odd, so the remaining sum has parity unknown[s]
            if (gap - unknown[s]) % 2 != 0:
                return True
        return False

    def emit() -> Optional[CandidatePair]:
        ta, tb = tuple(a), tuple(b)
        x = paf(ta, 1) - paf(ta, 2) if d == 5 else None
        if d == 5 and profile.x_filter is not None and x not in profile.x_filter:
            return None
        pair = CandidatePair(a=ta, b=tb, ell=profile.ell, m=m, x=x)
        pair.check()
        return pair

    def step(depth: int) -> Iterator[CandidatePair]:
        nonlocal nodes
        if depth == 2 * d:
            pair = emit()
            if pair is not None:
                yield pair
            return
        side_idx, pos = depth % 2, depth // 2
        row = rows[side_idx]
        for v in orders[depth]:
            mag = abs(v)
            if joint.get(mag, 0) <= 0:
                continue
            if side_rem is not None and side_rem[side_idx].get(mag, 0) <= 0:
                continue
            if budget is not None and nodes >= budget:
                return
            nodes += 1
            joint[mag] -= 1
            if side_rem is not None:
                side_rem[side_idx][mag] -= 1
            row[pos] = v
            deltas = {}
            for s in shifts:
                dp = products_touching(row, pos, s)
                dn = count_new(row, pos, s)
                partial[s] += dp
                unknown[s] -= dn
                deltas[s] = (dp, dn)
            if feasible_counts(side_idx, pos) and not prune_paf():
                yield from step(depth + 1)
            row[pos] = 0
            for s, (dp, dn) in deltas.items():
                partial[s] -= dp
                unknown[s] += dn
            joint[mag] += 1
            if side_rem is not None:
                side_rem[side_idx][mag] += 1

    yield from step(0)
